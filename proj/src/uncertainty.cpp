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
#include "owpl/uncertainty.h"

#include <cmath>
#include <string>

#include "owpl/common.h"
#include "owpl/parallel.h"

namespace owpl {
namespace {

void check_logits(const Matrix& logits, const std::string& scope) {
  require(logits.rows() >= 1, ErrorKind::kEmptyInput, scope, "no rows");
  require(logits.cols() >= 2, ErrorKind::kInvalidArgument, scope,
          "need at least two classes");
  for (double v : logits.data()) {
    require(std::isfinite(v), ErrorKind::kNonFiniteValue, scope,
            "non-finite logit");
  }
}

std::size_t argmax_row(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;  // ties keep the lowest index
  }
  return best;
}

}  // namespace

ScoreField msp_scores(const Matrix& logits, int threads) {
  check_logits(logits, "uncertainty.msp_scores");
  ScoreField out;
  out.values.resize(logits.rows());
  out.polarity = ScorePolarity::kLowMeansUnknown;
  out.method = ScoreMethod::kMsp;
  parallel_for(logits.rows(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto row = logits.row(i);
      double mx = row[argmax_row(row)];
      double denom = 0.0;
      for (double z : row) denom += std::exp(z - mx);
      out.values[i] = 1.0 / denom;  // exp(mx - mx) / sum
    }
  });
  return out;
}

ScoreField maxlogit_scores(const Matrix& logits, int threads) {
  check_logits(logits, "uncertainty.maxlogit_scores");
  ScoreField out;
  out.values.resize(logits.rows());
  out.polarity = ScorePolarity::kLowMeansUnknown;
  out.method = ScoreMethod::kMaxLogit;
  parallel_for(logits.rows(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto row = logits.row(i);
      out.values[i] = row[argmax_row(row)];
    }
  });
  return out;
}

std::vector<std::int32_t> predict_open_set(const Matrix& logits,
                                           const ScoreField& unknown_scores,
                                           double threshold, int threads) {
  const std::string scope = "uncertainty.predict_open_set";
  check_logits(logits, scope);
  require(unknown_scores.polarity == ScorePolarity::kHighMeansUnknown,
          ErrorKind::kPolarityMismatch, scope,
          "unknown scores must be high-means-unknown; negate or transform "
          "confidence scores first");
  require(unknown_scores.values.size() == logits.rows(),
          ErrorKind::kDimensionMismatch, scope,
          "score count does not match logit rows");

  const std::int32_t unknown_id = static_cast<std::int32_t>(logits.cols());
  std::vector<std::int32_t> pred(logits.rows());
  parallel_for(logits.rows(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (unknown_scores.values[i] < threshold) {
        pred[i] = static_cast<std::int32_t>(argmax_row(logits.row(i)));
      } else {
        pred[i] = unknown_id;
      }
    }
  });
  return pred;
}

std::vector<double> as_unknown_scores(const ScoreField& scores) {
  std::vector<double> out = scores.values;
  if (scores.polarity == ScorePolarity::kLowMeansUnknown) {
    for (double& v : out) v = -v;
  }
  return out;
}

}  // namespace owpl
