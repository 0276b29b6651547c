/* Copyright 2026 The OWPL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef OWPL_UNCERTAINTY_H_
#define OWPL_UNCERTAINTY_H_

#include <cstdint>
#include <vector>

#include "owpl/matrix.h"

namespace owpl {

// Orientation of a score field. Confidence-style scores (max softmax
// probability, max logit) are low on unknown points; thresholded
// unknown-ness scores are high on unknown points. Consumers check the
// polarity they need instead of guessing.
enum class ScorePolarity { kLowMeansUnknown, kHighMeansUnknown };

enum class ScoreMethod { kMsp, kMaxLogit, kExternal };

struct ScoreField {
  std::vector<double> values;
  ScorePolarity polarity = ScorePolarity::kLowMeansUnknown;
  ScoreMethod method = ScoreMethod::kExternal;
};

// Per-point max softmax probability. Rows are shifted by their max before
// exponentiation, so arbitrarily large logits stay finite. Values in (0, 1].
ScoreField msp_scores(const Matrix& logits, int threads = 1);

// Per-point maximum raw logit.
ScoreField maxlogit_scores(const Matrix& logits, int threads = 1);

// Open-set prediction: argmax class when the unknown score is below the
// threshold, the unknown label id n_classes otherwise (a score exactly at
// the threshold maps to unknown). Requires high-means-unknown polarity;
// argmax ties resolve to the lowest class index.
std::vector<std::int32_t> predict_open_set(const Matrix& logits,
                                           const ScoreField& unknown_scores,
                                           double threshold, int threads = 1);

// Unified high-means-unknown view of any score field (negates
// low-means-unknown values). Rank order is preserved, which is all the
// threshold-free metrics need.
std::vector<double> as_unknown_scores(const ScoreField& scores);

}  // namespace owpl

#endif  // OWPL_UNCERTAINTY_H_
