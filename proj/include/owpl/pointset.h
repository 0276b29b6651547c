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
#ifndef OWPL_POINTSET_H_
#define OWPL_POINTSET_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "owpl/matrix.h"

namespace owpl {

// Ground-truth and pseudo-label value for points outside the closed class set.
inline constexpr std::int32_t kUnknownLabel = -1;

// A point cloud with a per-point class-probability field (raw logits).
// Coordinates are XYZ; logits are one row per point over n_classes closed
// classes. Labels and features are optional blocks.
struct PointProbabilityCloud {
  std::size_t n_points = 0;
  std::size_t n_classes = 0;
  Matrix coords;    // n_points x 3
  Matrix logits;    // n_points x n_classes
  std::vector<std::int32_t> labels;  // empty when absent; -1 marks unknown
  Matrix features;  // n_points x c when present, 0 x 0 otherwise

  bool has_labels() const { return !labels.empty(); }
  bool has_features() const { return !features.empty(); }
  std::size_t feature_channels() const { return features.cols(); }

  // Enforces shape consistency, finiteness and label range. Throws Error.
  void validate() const;
};

enum class LabelKind { kClosedSet, kPseudo, kNovelOneHot, kDistilled };

// Hard or soft supervision targets. Closed-set, pseudo and novel-one-hot
// sets carry integer labels; distilled sets carry per-point distributions
// whose rows must lie on the probability simplex (sum 1 within 1e-9).
struct LabelSet {
  LabelKind kind = LabelKind::kClosedSet;
  std::vector<std::int32_t> hard;
  Matrix soft;

  static LabelSet closed_set(std::vector<std::int32_t> labels);
  static LabelSet pseudo(std::vector<std::int32_t> labels);
  static LabelSet novel_one_hot(std::vector<std::int32_t> labels);
  static LabelSet distilled(Matrix soft_rows);

  std::size_t size() const {
    return kind == LabelKind::kDistilled ? soft.rows() : hard.size();
  }
  void validate() const;
};

enum class CloudFormat { kOwpc, kCsv };

// OWPC is a little-endian binary container (magic "OWPC0001"); CSV is a
// text table "x,y,z,logit_0..logit_{C-1}[,label]" with LF line endings.
// Both store coords/logits as 32-bit floats (binary) or shortest-round-trip
// decimal text (CSV); loading widens to double.
PointProbabilityCloud load_cloud(const std::filesystem::path& path,
                                 CloudFormat format);
void save_cloud(const PointProbabilityCloud& cloud,
                const std::filesystem::path& path, CloudFormat format);

// Picks the format from the file extension: ".csv" is CSV, anything else OWPC.
CloudFormat guess_format(const std::filesystem::path& path);

}  // namespace owpl

#endif  // OWPL_POINTSET_H_
