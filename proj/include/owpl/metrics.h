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
#ifndef OWPL_METRICS_H_
#define OWPL_METRICS_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace owpl {

// Ranking metrics for unknown identification. Scores must be oriented so
// that higher means more likely unknown; is_unknown entries are 0/1.
// Both classes must be present.

// Mann-Whitney AUROC: probability that a random unknown point outscores a
// random known point, ties counted 1/2.
double auroc(std::span<const double> scores,
             std::span<const std::uint8_t> is_unknown);

// Area under the precision-recall curve with unknown as the positive class.
// Descending-score sweep; equal scores are processed as one block; the area
// is the step-wise sum precision_i * (recall_i - recall_{i-1}).
double aupr(std::span<const double> scores,
            std::span<const std::uint8_t> is_unknown);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

// The (recall, precision) points of the aupr sweep, one per score block.
std::vector<PrPoint> pr_curve(std::span<const double> scores,
                              std::span<const std::uint8_t> is_unknown);

struct IouResult {
  // Only classes present in pred or gt appear here.
  std::map<std::int32_t, double> per_class;
  // Mean over per_class; 0 when no class from the requested set is present.
  double mean = 0.0;
};

// Per-class intersection-over-union restricted to class_set. Classes absent
// from both pred and gt are excluded from the mean.
IouResult miou(std::span<const std::int32_t> pred,
               std::span<const std::int32_t> gt,
               std::span<const std::int32_t> class_set);

struct MiouSplit {
  IouResult all;      // over old_classes union novel_classes
  IouResult old_set;
  IouResult novel_set;
};

MiouSplit miou_split(std::span<const std::int32_t> pred,
                     std::span<const std::int32_t> gt,
                     std::span<const std::int32_t> old_classes,
                     std::span<const std::int32_t> novel_classes);

// Jaccard overlap of two binary masks; 1.0 when both are empty.
double binary_iou(std::span<const std::uint8_t> a,
                  std::span<const std::uint8_t> b);

}  // namespace owpl

#endif  // OWPL_METRICS_H_
