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
#ifndef OWPL_GBD_H_
#define OWPL_GBD_H_

#include <cstdint>
#include <span>
#include <vector>

#include "owpl/hua.h"
#include "owpl/pointset.h"
#include "owpl/uncertainty.h"

namespace owpl {

// Undirected edge between local node ids (u < v).
struct WeightedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double weight = 0.0;
};

// kNN similarity graph over a region. node_ids maps local node ids
// (0..n-1, edge endpoints) to cloud point indices; node i is region member
// i in sorted order. The graph can be a forest of components when the
// region has spatially separated parts.
struct WeightedNeighborGraph {
  std::vector<std::uint32_t> node_ids;
  std::vector<WeightedEdge> edges;
};

// Spanning forest: one tree per connected component of the source graph,
// edges sorted by (u, v).
struct SpanningTree {
  std::size_t node_count = 0;
  std::vector<WeightedEdge> edges;
};

// Two-component 1-D Gaussian mixture. Components are ordered mean1 >= mean2
// after fitting.
struct GmmFit {
  double mixing1 = 0.5, mixing2 = 0.5;
  double mean1 = 0.0, mean2 = 0.0;
  double stddev1 = 0.0, stddev2 = 0.0;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // Log-likelihood after every EM step of the winning restart (nondecreasing).
  std::vector<double> log_likelihood_history;
};

struct GmmConfig {
  std::size_t max_iterations = 200;
  double tolerance = 1e-8;
  std::uint64_t rng_seed = 7;
  std::size_t restarts = 4;
};

// Final object proposals: objects and rejected points partition the region.
// Objects are ordered by their smallest point index; all index lists are
// sorted cloud point indices.
struct UnknownMask {
  std::vector<std::vector<std::uint32_t>> objects;
  std::vector<std::uint32_t> rejected;
};

struct MergeConfig {
  std::size_t min_object_points = 10;
  double mad_multiplier = 3.0;
};

struct GbdConfig {
  std::size_t k = 16;
  double epsilon = 3.0;  // cut threshold margin, in component-1 stddevs
  DistanceSimilarityMode sim_mode = DistanceSimilarityMode::kInverted;
  GmmConfig gmm;
  MergeConfig merge;
  int threads = 1;
};

// Builds the region's kNN graph: every node links to its k nearest region
// points (k clamps to region size - 1) with similarity weights; when both
// directed weights exist for a pair, the smaller one is stored. Weights are
// finite and in [0, 2]. Throws region-too-small for regions of < 2 points.
WeightedNeighborGraph build_region_graph(const PointProbabilityCloud& cloud,
                                         const RegionState& region,
                                         const ScoreField& scores,
                                         std::size_t k,
                                         DistanceSimilarityMode mode,
                                         int threads = 1);

// Kruskal's algorithm with edges ordered by (weight, u, v), one tree per
// component. A tree input reproduces itself.
SpanningTree minimum_spanning_tree(const WeightedNeighborGraph& graph);

// Fits the two-component mixture by EM (log-space responsibilities, best of
// `restarts` random initializations, means seeded from two samples).
// Throws degenerate-input for < 4 samples or zero spread.
GmmFit fit_edge_weight_gmm(std::span<const double> weights,
                           const GmmConfig& config);

// Removes every edge with weight > mean1 - epsilon * stddev1. High-weight
// edges join points with near-identical confidence (closed-set texture);
// what survives are the wider-spread low-confidence links.
SpanningTree cut_edges(const SpanningTree& tree, const GmmFit& fit,
                       double epsilon);

// Groups the forest into components and keeps those that look like objects:
// size >= max(min_object_points, median - mad_multiplier * MAD of component
// sizes). Singletons are always rejected; a lone component has nothing to be
// rejected against and is kept.
UnknownMask merge_components(const SpanningTree& forest,
                             const RegionState& region,
                             const MergeConfig& config = {});

// One-call region -> objects stage. When the GMM is degenerate (all edge
// weights equal), falls back to cutting above the 90th percentile weight and
// flags it in the result.
struct GbdResult {
  UnknownMask mask;
  GmmFit fit;
  bool gmm_degenerate = false;
  double cut_threshold = 0.0;
  std::size_t tree_edge_count = 0;
  std::vector<std::size_t> component_sizes;  // after cutting, descending
};

GbdResult detect_unknown_objects(const PointProbabilityCloud& cloud,
                                 const RegionState& region,
                                 const ScoreField& scores,
                                 const GbdConfig& config);

}  // namespace owpl

#endif  // OWPL_GBD_H_
