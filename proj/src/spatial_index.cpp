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
#include "owpl/spatial_index.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "owpl/common.h"
#include "owpl/parallel.h"

namespace owpl {
namespace {

constexpr std::uint32_t kLeafSize = 16;

// (squared distance, index) candidate; smaller distance wins, then smaller
// index. This total order defines every tie-break in the module.
struct Candidate {
  double sq;
  std::uint32_t idx;
};

inline bool better(const Candidate& a, const Candidate& b) {
  return a.sq < b.sq || (a.sq == b.sq && a.idx < b.idx);
}

// Max-heap on "worse": top() is the weakest kept candidate.
struct WorseOnTop {
  bool operator()(const Candidate& a, const Candidate& b) const {
    return better(a, b);
  }
};

}  // namespace

SpatialIndex SpatialIndex::build(const Matrix& coords) {
  const std::string scope = "spatial_index.build_index";
  require(coords.rows() >= 1, ErrorKind::kEmptyInput, scope,
          "no points to index");
  require(coords.cols() == 3, ErrorKind::kDimensionMismatch, scope,
          "coords must be n x 3");
  for (double v : coords.data()) {
    require(std::isfinite(v), ErrorKind::kNonFiniteValue, scope,
            "non-finite coordinate");
  }

  SpatialIndex index;
  index.n_ = static_cast<std::uint32_t>(coords.rows());
  index.pts_ = coords.data();
  index.order_.resize(index.n_);
  std::iota(index.order_.begin(), index.order_.end(), 0u);
  index.nodes_.reserve(2 * (index.n_ / kLeafSize + 1));
  index.build_node(0, index.n_);
  return index;
}

std::uint32_t SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end) {
  std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{});
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  double lo[3], hi[3];
  for (int d = 0; d < 3; ++d) {
    lo[d] = hi[d] = pts_[order_[begin] * 3 + d];
  }
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    for (int d = 0; d < 3; ++d) {
      double v = pts_[order_[i] * 3 + d];
      lo[d] = std::min(lo[d], v);
      hi[d] = std::max(hi[d], v);
    }
  }
  int dim = 0;
  for (int d = 1; d < 3; ++d) {
    if (hi[d] - lo[d] > hi[dim] - lo[dim]) dim = d;
  }

  std::uint32_t mid = begin + (end - begin) / 2;
  // (coordinate, index) is a total order, so the two sides are uniquely
  // determined regardless of nth_element's internal permutation.
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     double ca = pts_[a * 3 + dim], cb = pts_[b * 3 + dim];
                     return ca < cb || (ca == cb && a < b);
                   });
  double split = pts_[order_[mid] * 3 + dim];

  nodes_[id].dim = dim;
  nodes_[id].split = split;
  std::uint32_t left = build_node(begin, mid);
  std::uint32_t right = build_node(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void SpatialIndex::query_one(std::uint32_t query, std::size_t k,
                             const std::vector<bool>* exclude,
                             bool exclude_self, std::uint32_t* out_indices,
                             double* out_sq) const {
  const double qx = pts_[query * 3];
  const double qy = pts_[query * 3 + 1];
  const double qz = pts_[query * 3 + 2];

  std::vector<Candidate> heap;
  heap.reserve(k);
  WorseOnTop cmp;

  auto consider = [&](std::uint32_t idx) {
    if (exclude_self && idx == query) return;
    if (exclude != nullptr && (*exclude)[idx]) return;
    double dx = pts_[idx * 3] - qx;
    double dy = pts_[idx * 3 + 1] - qy;
    double dz = pts_[idx * 3 + 2] - qz;
    Candidate c{dx * dx + dy * dy + dz * dz, idx};
    if (heap.size() < k) {
      heap.push_back(c);
      std::push_heap(heap.begin(), heap.end(), cmp);
    } else if (better(c, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), cmp);
      heap.back() = c;
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
  };

  // Iterative depth-first traversal, nearer child first. A subtree is skipped
  // only when the splitting plane is provably farther than the current k-th
  // candidate, so results stay exact.
  std::vector<std::uint32_t> stack;
  stack.push_back(0);
  while (!stack.empty()) {
    std::uint32_t id = stack.back();
    stack.pop_back();
    const Node& node = nodes_[id];
    if (node.dim < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        consider(order_[i]);
      }
      continue;
    }
    double q = (node.dim == 0 ? qx : node.dim == 1 ? qy : qz);
    double delta = q - node.split;
    std::uint32_t near = delta < 0.0 ? node.left : node.right;
    std::uint32_t far = delta < 0.0 ? node.right : node.left;
    if (heap.size() < k || delta * delta <= heap.front().sq) {
      stack.push_back(far);
    }
    stack.push_back(near);
  }

  require(heap.size() == k, ErrorKind::kKTooLarge, "spatial_index.knn",
          "query " + std::to_string(query) + " has only " +
              std::to_string(heap.size()) + " candidates for k=" +
              std::to_string(k));
  std::sort(heap.begin(), heap.end(), better);
  for (std::size_t j = 0; j < k; ++j) {
    out_indices[j] = heap[j].idx;
    out_sq[j] = heap[j].sq;
  }
}

NeighborList SpatialIndex::knn(const std::vector<std::uint32_t>& queries,
                               std::size_t k, const std::vector<bool>* exclude,
                               bool exclude_self, int threads) const {
  const std::string scope = "spatial_index.knn";
  require(k >= 1, ErrorKind::kInvalidArgument, scope, "k must be >= 1");
  require(exclude == nullptr || exclude->size() == n_,
          ErrorKind::kDimensionMismatch, scope,
          "exclusion mask must cover every indexed point");
  for (std::uint32_t q : queries) {
    require(q < n_, ErrorKind::kIndexOutOfRange, scope,
            "query index " + std::to_string(q) + " out of range");
  }

  NeighborList out;
  out.query_count = queries.size();
  out.k = k;
  out.indices.resize(queries.size() * k);
  out.sq_distances.resize(queries.size() * k);

  parallel_for(queries.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      query_one(queries[i], k, exclude, exclude_self,
                out.indices.data() + i * k, out.sq_distances.data() + i * k);
    }
  });
  return out;
}

NeighborList SpatialIndex::knn_all(std::size_t k, bool exclude_self,
                                   int threads) const {
  std::vector<std::uint32_t> queries(n_);
  std::iota(queries.begin(), queries.end(), 0u);
  return knn(queries, k, nullptr, exclude_self, threads);
}

}  // namespace owpl
