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
#ifndef OWPL_LOSSES_H_
#define OWPL_LOSSES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "owpl/matrix.h"

namespace owpl {

struct LossConfig {
  double alpha = 0.001;  // pseudo-loss weight in the combined objective
};

struct LossGrad {
  double loss = 0.0;
  Matrix grad_logits;
};

// Mean softmax cross-entropy over closed-set labels in [0, n_classes).
// grad_logits[i] = (softmax(logits[i]) - onehot(labels[i])) / N.
LossGrad closed_set_loss(const Matrix& logits,
                         std::span<const std::int32_t> labels,
                         int threads = 1);

struct PseudoLossGrad {
  double loss = 0.0;
  Matrix grad_logits;
  std::vector<double> grad_unknown_scores;
};

// Cross-entropy over rows widened by one unknown column: row i becomes
// [logits[i] | unknown_scores[i]] with n_classes + 1 entries, and pseudo
// labels may take the value n_classes. Gradients cover both inputs.
PseudoLossGrad pseudo_loss(const Matrix& logits,
                           std::span<const double> unknown_scores,
                           std::span<const std::int32_t> pseudo_labels,
                           int threads = 1);

// closed + alpha * pseudo.
double total_oss_loss(double closed, double pseudo,
                      const LossConfig& config = {});

}  // namespace owpl

#endif  // OWPL_LOSSES_H_
