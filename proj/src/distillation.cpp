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
#include "owpl/distillation.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "owpl/common.h"
#include "owpl/parallel.h"

namespace owpl {
namespace {

constexpr double kTargetFloor = 1e-12;

void check_temperature(double t, const char* scope) {
  require(std::isfinite(t) && t > 0.0, ErrorKind::kNonpositiveTemperature,
          scope, "temperature must be finite and > 0, got " +
                     std::to_string(t));
}

// Fills out with softmax(row / t) and returns the per-entry log
// probabilities via log_out when non-null.
void soften_into(std::span<const double> row, double t, std::span<double> out,
                 std::span<double> log_out) {
  double mx = row[0];
  for (double v : row) mx = std::max(mx, v);
  double denom = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = std::exp((row[j] - mx) / t);
    denom += out[j];
  }
  const double log_denom = std::log(denom);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!log_out.empty()) log_out[j] = (row[j] - mx) / t - log_denom;
    out[j] /= denom;
  }
}

}  // namespace

std::vector<double> soften(std::span<const double> logits_row,
                           double temperature) {
  const char* scope = "distillation.soften";
  check_temperature(temperature, scope);
  require(!logits_row.empty(), ErrorKind::kEmptyInput, scope, "empty row");
  for (std::size_t j = 0; j < logits_row.size(); ++j) {
    require(std::isfinite(logits_row[j]), ErrorKind::kNonFiniteValue, scope,
            "non-finite logit at column " + std::to_string(j));
  }
  std::vector<double> out(logits_row.size());
  soften_into(logits_row, temperature, out, {});
  return out;
}

LabelSet make_distilled_gt(const Matrix& teacher_logits,
                           std::span<const std::int32_t> novel_labels,
                           const DistillConfig& config) {
  const char* scope = "distillation.make_distilled_gt";
  check_temperature(config.temperature, scope);
  require(config.novel_count >= 1, ErrorKind::kInvalidArgument, scope,
          "novel_count must be >= 1, got " +
              std::to_string(config.novel_count));
  require(config.novel_label_offset >= 0, ErrorKind::kInvalidArgument, scope,
          "novel_label_offset must be >= 0, got " +
              std::to_string(config.novel_label_offset));
  const std::size_t n = teacher_logits.rows();
  const std::size_t width = static_cast<std::size_t>(
      config.novel_label_offset + config.novel_count);
  require(n > 0, ErrorKind::kEmptyInput, scope, "no rows");
  require(teacher_logits.cols() == width, ErrorKind::kDimensionMismatch,
          scope,
          "teacher logits have " + std::to_string(teacher_logits.cols()) +
              " columns, expected offset + novel_count = " +
              std::to_string(width));
  require(novel_labels.size() == n, ErrorKind::kDimensionMismatch, scope,
          "novel label count " + std::to_string(novel_labels.size()) +
              " does not match row count " + std::to_string(n));

  const std::int32_t lo = config.novel_label_offset;
  const std::int32_t hi = config.novel_label_offset + config.novel_count;
  Matrix soft(n, width);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t label = novel_labels[i];
    auto out = soft.row(i);
    if (label == kUnknownLabel) {
      soften_into(teacher_logits.row(i), config.temperature, out, {});
    } else {
      require(label >= lo && label < hi, ErrorKind::kLabelOutOfRange, scope,
              "novel label " + std::to_string(label) + " at row " +
                  std::to_string(i) + " outside [" + std::to_string(lo) +
                  ", " + std::to_string(hi) + ") and not the sentinel " +
                  std::to_string(kUnknownLabel));
      std::fill(out.begin(), out.end(), 0.0);
      out[static_cast<std::size_t>(label)] = 1.0;
    }
  }
  return LabelSet::distilled(std::move(soft));
}

IlLossGrad il_loss(const Matrix& student_logits, const LabelSet& distilled,
                   double temperature, int threads) {
  const char* scope = "distillation.il_loss";
  check_temperature(temperature, scope);
  require(distilled.kind == LabelKind::kDistilled,
          ErrorKind::kInvalidArgument, scope,
          "label set kind must be distilled");
  distilled.validate();
  const std::size_t n = student_logits.rows();
  const std::size_t width = student_logits.cols();
  require(n > 0, ErrorKind::kEmptyInput, scope, "no rows");
  require(distilled.soft.rows() == n && distilled.soft.cols() == width,
          ErrorKind::kDimensionMismatch, scope,
          "target shape " + std::to_string(distilled.soft.rows()) + "x" +
              std::to_string(distilled.soft.cols()) +
              " does not match student logits " + std::to_string(n) + "x" +
              std::to_string(width));

  IlLossGrad out;
  out.grad_logits = Matrix(n, width);
  std::vector<double> row_loss(n, 0.0);
  const double inv_nt = 1.0 / (static_cast<double>(n) * temperature);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> p(width);
    std::vector<double> log_p(width);
    for (std::size_t i = begin; i < end; ++i) {
      soften_into(student_logits.row(i), temperature, p, log_p);
      auto target = distilled.soft.row(i);
      auto grad = out.grad_logits.row(i);
      double kl = 0.0;
      for (std::size_t j = 0; j < width; ++j) {
        const double log_y = std::log(std::max(target[j], kTargetFloor));
        grad[j] = log_p[j] - log_y;  // reused below; scaled after kl is known
        kl += p[j] * grad[j];
      }
      row_loss[i] = kl;
      for (std::size_t j = 0; j < width; ++j) {
        grad[j] = inv_nt * p[j] * (grad[j] - kl);
      }
    }
  });
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += row_loss[i];
  out.loss = total / static_cast<double>(n);
  return out;
}

}  // namespace owpl
