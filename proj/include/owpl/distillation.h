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
#ifndef OWPL_DISTILLATION_H_
#define OWPL_DISTILLATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "owpl/matrix.h"
#include "owpl/pointset.h"

namespace owpl {

struct DistillConfig {
  double temperature = 2.0;
  // Novel classes occupy label ids [novel_label_offset,
  // novel_label_offset + novel_count); with teacher logits of width K the
  // offset is normally K - novel_count (novel heads appended last).
  std::int32_t novel_count = 1;
  std::int32_t novel_label_offset = 0;
};

// softmax(row / temperature), computed with max subtraction. Every output
// entry is strictly positive and the row sums to 1.
std::vector<double> soften(std::span<const double> logits_row,
                           double temperature);

// Soft-label targets for incremental training: points carrying a novel label
// (any value in the configured novel range) get a one-hot row on that label;
// every other point (sentinel kUnknownLabel) gets the softened teacher row.
// teacher_logits must be N x (novel_label_offset + novel_count).
LabelSet make_distilled_gt(const Matrix& teacher_logits,
                           std::span<const std::int32_t> novel_labels,
                           const DistillConfig& config);

struct IlLossGrad {
  double loss = 0.0;
  Matrix grad_logits;
};

// Mean KL(soften(student_row, T) || target_row) over rows. Target entries
// are clamped to >= 1e-12 before the log ratio so one-hot targets stay
// finite. The gradient is with respect to the student logits.
IlLossGrad il_loss(const Matrix& student_logits, const LabelSet& distilled,
                   double temperature, int threads = 1);

}  // namespace owpl

#endif  // OWPL_DISTILLATION_H_
