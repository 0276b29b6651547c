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
#include "owpl/losses.h"

#include <cmath>
#include <cstddef>

#include "owpl/common.h"
#include "owpl/parallel.h"

namespace owpl {
namespace {

// Writes softmax(row) into out and returns log(sum(exp(row - max))) + max,
// the log-partition used by the cross-entropy term.
double softmax_row(std::span<const double> row, std::span<double> out) {
  double mx = row[0];
  for (double v : row) mx = std::max(mx, v);
  double denom = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = std::exp(row[j] - mx);
    denom += out[j];
  }
  for (std::size_t j = 0; j < row.size(); ++j) out[j] /= denom;
  return std::log(denom) + mx;
}

void check_labels(std::span<const std::int32_t> labels, std::size_t n,
                  std::int32_t hi, const char* scope) {
  require(labels.size() == n, ErrorKind::kDimensionMismatch, scope,
          "label count " + std::to_string(labels.size()) +
              " does not match row count " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    require(labels[i] >= 0 && labels[i] < hi, ErrorKind::kLabelOutOfRange,
            scope,
            "label " + std::to_string(labels[i]) + " at row " +
                std::to_string(i) + " outside [0, " + std::to_string(hi) +
                ")");
  }
}

}  // namespace

LossGrad closed_set_loss(const Matrix& logits,
                         std::span<const std::int32_t> labels, int threads) {
  const char* scope = "losses.closed_set";
  const std::size_t n = logits.rows();
  const std::size_t c = logits.cols();
  require(n > 0, ErrorKind::kEmptyInput, scope, "no rows");
  require(c >= 2, ErrorKind::kDimensionMismatch, scope,
          "need at least 2 classes, got " + std::to_string(c));
  check_labels(labels, n, static_cast<std::int32_t>(c), scope);

  LossGrad out;
  out.grad_logits = Matrix(n, c);
  std::vector<double> row_loss(n, 0.0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto row = logits.row(i);
      auto grad = out.grad_logits.row(i);
      const double logz = softmax_row(row, grad);
      const auto y = static_cast<std::size_t>(labels[i]);
      row_loss[i] = logz - row[y];
      for (std::size_t j = 0; j < c; ++j) grad[j] /= static_cast<double>(n);
      grad[y] -= 1.0 / static_cast<double>(n);
    }
  });
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += row_loss[i];
  out.loss = total / static_cast<double>(n);
  return out;
}

PseudoLossGrad pseudo_loss(const Matrix& logits,
                           std::span<const double> unknown_scores,
                           std::span<const std::int32_t> pseudo_labels,
                           int threads) {
  const char* scope = "losses.pseudo";
  const std::size_t n = logits.rows();
  const std::size_t c = logits.cols();
  require(n > 0, ErrorKind::kEmptyInput, scope, "no rows");
  require(c >= 2, ErrorKind::kDimensionMismatch, scope,
          "need at least 2 classes, got " + std::to_string(c));
  require(unknown_scores.size() == n, ErrorKind::kDimensionMismatch, scope,
          "unknown score count " + std::to_string(unknown_scores.size()) +
              " does not match row count " + std::to_string(n));
  check_labels(pseudo_labels, n, static_cast<std::int32_t>(c) + 1, scope);

  PseudoLossGrad out;
  out.grad_logits = Matrix(n, c);
  out.grad_unknown_scores.assign(n, 0.0);
  std::vector<double> row_loss(n, 0.0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> wide(c + 1);
    std::vector<double> prob(c + 1);
    for (std::size_t i = begin; i < end; ++i) {
      auto row = logits.row(i);
      for (std::size_t j = 0; j < c; ++j) wide[j] = row[j];
      wide[c] = unknown_scores[i];
      const double logz = softmax_row(wide, prob);
      const auto y = static_cast<std::size_t>(pseudo_labels[i]);
      row_loss[i] = logz - wide[y];
      auto grad = out.grad_logits.row(i);
      for (std::size_t j = 0; j <= c; ++j) {
        double g = prob[j] / static_cast<double>(n);
        if (j == y) g -= 1.0 / static_cast<double>(n);
        if (j < c) {
          grad[j] = g;
        } else {
          out.grad_unknown_scores[i] = g;
        }
      }
    }
  });
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += row_loss[i];
  out.loss = total / static_cast<double>(n);
  return out;
}

double total_oss_loss(double closed, double pseudo, const LossConfig& config) {
  return closed + config.alpha * pseudo;
}

}  // namespace owpl
