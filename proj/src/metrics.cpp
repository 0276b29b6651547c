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
#include "owpl/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <string>

#include "owpl/common.h"

namespace owpl {
namespace {

void check_ranking_input(std::span<const double> scores,
                         std::span<const std::uint8_t> is_unknown,
                         const char* scope, std::size_t* n_pos,
                         std::size_t* n_neg) {
  require(!scores.empty(), ErrorKind::kEmptyInput, scope, "no scores");
  require(scores.size() == is_unknown.size(), ErrorKind::kDimensionMismatch,
          scope,
          "score count " + std::to_string(scores.size()) +
              " does not match mask count " +
              std::to_string(is_unknown.size()));
  std::size_t pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    require(std::isfinite(scores[i]), ErrorKind::kNonFiniteValue, scope,
            "non-finite score at index " + std::to_string(i));
    if (is_unknown[i]) ++pos;
  }
  require(pos > 0 && pos < scores.size(), ErrorKind::kSingleClassInput, scope,
          "need both classes present, got " + std::to_string(pos) +
              " unknown of " + std::to_string(scores.size()));
  *n_pos = pos;
  *n_neg = scores.size() - pos;
}

std::vector<std::size_t> order_ascending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  });
  return order;
}

}  // namespace

double auroc(std::span<const double> scores,
             std::span<const std::uint8_t> is_unknown) {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  check_ranking_input(scores, is_unknown, "metrics.auroc", &n_pos, &n_neg);

  const auto order = order_ascending(scores);
  // Rank-sum with average ranks over tie blocks (Mann-Whitney U).
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t block_pos = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (is_unknown[order[j]]) ++block_pos;
      ++j;
    }
    // 1-based ranks i+1 .. j averaged over the block.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    pos_rank_sum += avg_rank * static_cast<double>(block_pos);
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

std::vector<PrPoint> pr_curve(std::span<const double> scores,
                              std::span<const std::uint8_t> is_unknown) {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  check_ranking_input(scores, is_unknown, "metrics.aupr", &n_pos, &n_neg);

  auto order = order_ascending(scores);
  std::reverse(order.begin(), order.end());  // descending sweep
  std::vector<PrPoint> points;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (is_unknown[order[j]]) {
        ++tp;
      } else {
        ++fp;
      }
      ++j;
    }
    PrPoint pt;
    pt.recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    pt.precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    points.push_back(pt);
    i = j;
  }
  return points;
}

double aupr(std::span<const double> scores,
            std::span<const std::uint8_t> is_unknown) {
  const auto points = pr_curve(scores, is_unknown);
  double area = 0.0;
  double prev_recall = 0.0;
  for (const PrPoint& pt : points) {
    area += (pt.recall - prev_recall) * pt.precision;
    prev_recall = pt.recall;
  }
  return area;
}

IouResult miou(std::span<const std::int32_t> pred,
               std::span<const std::int32_t> gt,
               std::span<const std::int32_t> class_set) {
  const char* scope = "metrics.miou";
  require(!class_set.empty(), ErrorKind::kEmptyClassSet, scope,
          "class set is empty");
  require(!pred.empty(), ErrorKind::kEmptyInput, scope, "no predictions");
  require(pred.size() == gt.size(), ErrorKind::kDimensionMismatch, scope,
          "prediction count " + std::to_string(pred.size()) +
              " does not match ground-truth count " +
              std::to_string(gt.size()));

  IouResult out;
  const std::set<std::int32_t> classes(class_set.begin(), class_set.end());
  for (std::int32_t c : classes) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool in_pred = pred[i] == c;
      const bool in_gt = gt[i] == c;
      if (in_pred && in_gt) {
        ++tp;
      } else if (in_pred) {
        ++fp;
      } else if (in_gt) {
        ++fn;
      }
    }
    const std::size_t denom = tp + fp + fn;
    if (denom == 0) continue;  // absent from both arrays
    out.per_class[c] =
        static_cast<double>(tp) / static_cast<double>(denom);
  }
  if (!out.per_class.empty()) {
    double sum = 0.0;
    for (const auto& [c, iou] : out.per_class) sum += iou;
    out.mean = sum / static_cast<double>(out.per_class.size());
  }
  return out;
}

MiouSplit miou_split(std::span<const std::int32_t> pred,
                     std::span<const std::int32_t> gt,
                     std::span<const std::int32_t> old_classes,
                     std::span<const std::int32_t> novel_classes) {
  const char* scope = "metrics.miou_split";
  require(!old_classes.empty(), ErrorKind::kEmptyClassSet, scope,
          "old class set is empty");
  require(!novel_classes.empty(), ErrorKind::kEmptyClassSet, scope,
          "novel class set is empty");
  std::vector<std::int32_t> all(old_classes.begin(), old_classes.end());
  all.insert(all.end(), novel_classes.begin(), novel_classes.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  MiouSplit out;
  out.all = miou(pred, gt, all);
  out.old_set = miou(pred, gt, old_classes);
  out.novel_set = miou(pred, gt, novel_classes);
  return out;
}

double binary_iou(std::span<const std::uint8_t> a,
                  std::span<const std::uint8_t> b) {
  const char* scope = "metrics.binary_iou";
  require(a.size() == b.size(), ErrorKind::kDimensionMismatch, scope,
          "mask sizes " + std::to_string(a.size()) + " and " +
              std::to_string(b.size()) + " differ");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] != 0;
    const bool in_b = b[i] != 0;
    if (in_a && in_b) ++inter;
    if (in_a || in_b) ++uni;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace owpl
