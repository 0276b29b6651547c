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
#ifndef OWPL_SPATIAL_INDEX_H_
#define OWPL_SPATIAL_INDEX_H_

#include <cstdint>
#include <vector>

#include "owpl/matrix.h"

namespace owpl {

// kNN results for a batch of queries, row-major m x k. Rows are sorted by
// ascending squared distance, ties broken by ascending point index.
struct NeighborList {
  std::size_t query_count = 0;
  std::size_t k = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> sq_distances;

  const std::uint32_t* row_indices(std::size_t i) const {
    return indices.data() + i * k;
  }
  const double* row_sq_distances(std::size_t i) const {
    return sq_distances.data() + i * k;
  }
};

// Exact k-nearest-neighbor queries over a fixed XYZ point set. The tree is a
// median-split kd-tree; queries prune with exact squared distances, so
// results match a full scan including the index tie rule. Queries are
// read-only and safe to run concurrently.
class SpatialIndex {
 public:
  // coords: n x 3, finite. Throws empty-input / dimension-mismatch /
  // non-finite-value.
  static SpatialIndex build(const Matrix& coords);

  std::size_t size() const { return static_cast<std::size_t>(n_); }

  // k nearest indexed points for each query point index.
  //  - exclude: optional mask over indexed points (true = not a candidate).
  //  - exclude_self: drop the query's own index from its candidates.
  // Throws k-too-large when any query has fewer than k candidates.
  NeighborList knn(const std::vector<std::uint32_t>& queries, std::size_t k,
                   const std::vector<bool>* exclude = nullptr,
                   bool exclude_self = false, int threads = 1) const;

  // Convenience: query every indexed point.
  NeighborList knn_all(std::size_t k, bool exclude_self,
                       int threads = 1) const;

 private:
  struct Node {
    double split = 0.0;
    std::int32_t dim = -1;  // -1 marks a leaf
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  std::uint32_t build_node(std::uint32_t begin, std::uint32_t end);
  void query_one(std::uint32_t query, std::size_t k,
                 const std::vector<bool>* exclude, bool exclude_self,
                 std::uint32_t* out_indices, double* out_sq) const;

  std::uint32_t n_ = 0;
  std::vector<double> pts_;           // n x 3 flattened
  std::vector<std::uint32_t> order_;  // leaf-grouped permutation of indices
  std::vector<Node> nodes_;
};

}  // namespace owpl

#endif  // OWPL_SPATIAL_INDEX_H_
