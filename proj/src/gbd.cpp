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
#include "owpl/gbd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "owpl/common.h"
#include "owpl/log.h"
#include "owpl/rng.h"
#include "owpl/spatial_index.h"

namespace owpl {
namespace {

// Union-find with path halving.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

double median_sorted(const std::vector<double>& sorted) {
  std::size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2]
                    : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double log_normal_pdf(double x, double mean, double var) {
  double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

struct Component {
  double mixing, mean, var;
};

}  // namespace

WeightedNeighborGraph build_region_graph(const PointProbabilityCloud& cloud,
                                         const RegionState& region,
                                         const ScoreField& scores,
                                         std::size_t k,
                                         DistanceSimilarityMode mode,
                                         int threads) {
  const std::string scope = "gbd.build_region_graph";
  require(region.members.size() >= 2, ErrorKind::kRegionTooSmall, scope,
          "need at least two region points to build a graph");
  require(scores.values.size() == cloud.n_points, ErrorKind::kDimensionMismatch,
          scope, "score count does not match cloud");
  require(k >= 1, ErrorKind::kInvalidArgument, scope, "k must be >= 1");
  require(std::is_sorted(region.members.begin(), region.members.end()),
          ErrorKind::kInvalidArgument, scope, "region members must be sorted");
  for (std::uint32_t m : region.members) {
    require(m < cloud.n_points, ErrorKind::kIndexOutOfRange, scope,
            "region member " + std::to_string(m) + " out of range");
  }

  WeightedNeighborGraph graph;
  graph.node_ids = region.members;
  const std::size_t n = graph.node_ids.size();
  const std::size_t k_eff = std::min(k, n - 1);

  Matrix region_coords(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      region_coords(i, d) = cloud.coords(graph.node_ids[i], d);
    }
  }
  SpatialIndex index = SpatialIndex::build(region_coords);
  NeighborList local = index.knn_all(k_eff, /*exclude_self=*/true, threads);

  // Similarity works on cloud point indices; lift the local neighbor ids.
  NeighborList lifted = local;
  for (std::uint32_t& idx : lifted.indices) idx = graph.node_ids[idx];
  Matrix sim = similarity(graph.node_ids, lifted, scores, mode, threads);

  // Directed weights collapse onto unordered pairs by minimum.
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pair_weight;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t* idx = local.row_indices(i);
    for (std::size_t j = 0; j < k_eff; ++j) {
      std::uint32_t u = static_cast<std::uint32_t>(i);
      std::uint32_t v = idx[j];
      if (u > v) std::swap(u, v);
      auto key = std::make_pair(u, v);
      auto [it, inserted] = pair_weight.try_emplace(key, sim(i, j));
      if (!inserted) it->second = std::min(it->second, sim(i, j));
    }
  }
  graph.edges.reserve(pair_weight.size());
  for (const auto& [key, w] : pair_weight) {
    graph.edges.push_back(WeightedEdge{key.first, key.second, w});
  }
  return graph;
}

SpanningTree minimum_spanning_tree(const WeightedNeighborGraph& graph) {
  const std::string scope = "gbd.minimum_spanning_tree";
  const std::size_t n = graph.node_ids.size();
  require(n >= 1, ErrorKind::kEmptyInput, scope, "graph has no nodes");
  for (const WeightedEdge& e : graph.edges) {
    require(e.u < n && e.v < n, ErrorKind::kIndexOutOfRange, scope,
            "edge endpoint out of range");
  }

  std::vector<WeightedEdge> edges = graph.edges;
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              if (a.weight != b.weight) return a.weight < b.weight;
              if (a.u != b.u) return a.u < b.u;
              return a.v < b.v;
            });

  SpanningTree tree;
  tree.node_count = n;
  DisjointSet dsu(n);
  for (const WeightedEdge& e : edges) {
    if (dsu.unite(e.u, e.v)) tree.edges.push_back(e);
  }
  std::sort(tree.edges.begin(), tree.edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              return a.u != b.u ? a.u < b.u : a.v < b.v;
            });
  return tree;
}

GmmFit fit_edge_weight_gmm(std::span<const double> weights,
                           const GmmConfig& config) {
  const std::string scope = "gbd.fit_edge_weight_gmm";
  const std::size_t n = weights.size();
  require(n >= 4, ErrorKind::kDegenerateInput, scope,
          "need at least four samples, got " + std::to_string(n));
  double lo = weights[0], hi = weights[0];
  for (double w : weights) {
    require(std::isfinite(w), ErrorKind::kNonFiniteValue, scope,
            "non-finite weight");
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  require(hi > lo, ErrorKind::kDegenerateInput, scope,
          "all weights equal; no mixture to fit");

  double sum = 0.0;
  for (double w : weights) sum += w;
  const double data_mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double w : weights) sq += (w - data_mean) * (w - data_mean);
  const double data_var = sq / static_cast<double>(n);
  // Variance floor keeps a component from collapsing onto one sample.
  const double var_floor = std::max(1e-12, 1e-10 * data_var);

  Rng rng(config.rng_seed);
  GmmFit best;
  bool have_best = false;

  for (std::size_t restart = 0; restart < config.restarts; ++restart) {
    Component c1{0.5, weights[rng.below(n)], data_var};
    Component c2{0.5, weights[rng.below(n)], data_var};
    if (c1.mean == c2.mean) {
      c2.mean = c1.mean + std::sqrt(data_var);  // deterministic nudge apart
    }

    GmmFit fit;
    std::vector<double> resp1(n);
    double prev_ll = -std::numeric_limits<double>::infinity();

    for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
      double ll = 0.0;
      double log_m1 = std::log(c1.mixing), log_m2 = std::log(c2.mixing);
      for (std::size_t i = 0; i < n; ++i) {
        double l1 = log_m1 + log_normal_pdf(weights[i], c1.mean, c1.var);
        double l2 = log_m2 + log_normal_pdf(weights[i], c2.mean, c2.var);
        double mx = std::max(l1, l2);
        double lse = mx + std::log(std::exp(l1 - mx) + std::exp(l2 - mx));
        resp1[i] = std::exp(l1 - lse);
        ll += lse;
      }
      fit.log_likelihood_history.push_back(ll);
      fit.log_likelihood = ll;
      fit.iterations = iter;

      double n1 = 0.0;
      for (double r : resp1) n1 += r;
      n1 = std::clamp(n1, 1e-10, static_cast<double>(n) - 1e-10);
      double n2 = static_cast<double>(n) - n1;

      double m1 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        m1 += resp1[i] * weights[i];
        m2 += (1.0 - resp1[i]) * weights[i];
      }
      c1.mean = m1 / n1;
      c2.mean = m2 / n2;

      double v1 = 0.0, v2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d1 = weights[i] - c1.mean;
        double d2 = weights[i] - c2.mean;
        v1 += resp1[i] * d1 * d1;
        v2 += (1.0 - resp1[i]) * d2 * d2;
      }
      c1.var = std::max(v1 / n1, var_floor);
      c2.var = std::max(v2 / n2, var_floor);
      c1.mixing = n1 / static_cast<double>(n);
      c2.mixing = n2 / static_cast<double>(n);

      if (iter > 1 && ll - prev_ll < config.tolerance) {
        fit.converged = true;
        break;
      }
      prev_ll = ll;
    }

    fit.mixing1 = c1.mixing;
    fit.mixing2 = c2.mixing;
    fit.mean1 = c1.mean;
    fit.mean2 = c2.mean;
    fit.stddev1 = std::sqrt(c1.var);
    fit.stddev2 = std::sqrt(c2.var);
    if (!have_best || fit.log_likelihood > best.log_likelihood) {
      best = fit;
      have_best = true;
    }
  }

  if (best.mean1 < best.mean2) {
    std::swap(best.mean1, best.mean2);
    std::swap(best.stddev1, best.stddev2);
    std::swap(best.mixing1, best.mixing2);
  }
  return best;
}

SpanningTree cut_edges(const SpanningTree& tree, const GmmFit& fit,
                       double epsilon) {
  const double threshold = fit.mean1 - epsilon * fit.stddev1;
  SpanningTree out;
  out.node_count = tree.node_count;
  for (const WeightedEdge& e : tree.edges) {
    if (!(e.weight > threshold)) out.edges.push_back(e);
  }
  return out;
}

UnknownMask merge_components(const SpanningTree& forest,
                             const RegionState& region,
                             const MergeConfig& config) {
  const std::string scope = "gbd.merge_components";
  const std::size_t n = forest.node_count;
  require(n >= 1, ErrorKind::kEmptyInput, scope, "forest has no nodes");
  require(region.members.size() == n, ErrorKind::kDimensionMismatch, scope,
          "region size does not match forest node count");

  DisjointSet dsu(n);
  for (const WeightedEdge& e : forest.edges) {
    require(e.u < n && e.v < n, ErrorKind::kIndexOutOfRange, scope,
            "edge endpoint out of range");
    dsu.unite(e.u, e.v);
  }

  // Components keyed by their smallest local node id, so object order is the
  // order of first appearance in the sorted region.
  std::map<std::uint32_t, std::vector<std::uint32_t>> components;
  for (std::uint32_t i = 0; i < n; ++i) {
    components[dsu.find(i)].push_back(i);
  }
  std::vector<std::vector<std::uint32_t>> comps;
  comps.reserve(components.size());
  for (auto& [root, members] : components) {
    std::sort(members.begin(), members.end());
    comps.push_back(std::move(members));
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  double size_cutoff = static_cast<double>(config.min_object_points);
  if (comps.size() > 1) {
    std::vector<double> sizes;
    sizes.reserve(comps.size());
    for (const auto& c : comps) sizes.push_back(static_cast<double>(c.size()));
    std::sort(sizes.begin(), sizes.end());
    double med = median_sorted(sizes);
    std::vector<double> dev;
    dev.reserve(sizes.size());
    for (double s : sizes) dev.push_back(std::abs(s - med));
    std::sort(dev.begin(), dev.end());
    double mad = median_sorted(dev);
    size_cutoff = std::max(size_cutoff, med - config.mad_multiplier * mad);
  } else {
    // A single component is the object by default; only the singleton rule
    // below can still reject it.
    size_cutoff = 2.0;
  }

  UnknownMask mask;
  for (const auto& comp : comps) {
    bool keep = comp.size() >= 2 &&
                static_cast<double>(comp.size()) >= size_cutoff;
    if (keep) {
      std::vector<std::uint32_t> object;
      object.reserve(comp.size());
      for (std::uint32_t local : comp) {
        object.push_back(region.members[local]);
      }
      mask.objects.push_back(std::move(object));
    } else {
      for (std::uint32_t local : comp) {
        mask.rejected.push_back(region.members[local]);
      }
    }
  }
  std::sort(mask.rejected.begin(), mask.rejected.end());
  return mask;
}

GbdResult detect_unknown_objects(const PointProbabilityCloud& cloud,
                                 const RegionState& region,
                                 const ScoreField& scores,
                                 const GbdConfig& config) {
  WeightedNeighborGraph graph = build_region_graph(
      cloud, region, scores, config.k, config.sim_mode, config.threads);
  SpanningTree tree = minimum_spanning_tree(graph);

  GbdResult result;
  result.tree_edge_count = tree.edges.size();

  std::vector<double> weights;
  weights.reserve(tree.edges.size());
  for (const WeightedEdge& e : tree.edges) weights.push_back(e.weight);

  SpanningTree cut;
  double threshold = 0.0;
  bool degenerate = false;
  try {
    result.fit = fit_edge_weight_gmm(weights, config.gmm);
    threshold = result.fit.mean1 - config.epsilon * result.fit.stddev1;
    cut = cut_edges(tree, result.fit, config.epsilon);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDegenerateInput) throw;
    degenerate = true;
    // Fall back to a plain high quantile of the tree weights.
    std::vector<double> sorted = weights;
    std::sort(sorted.begin(), sorted.end());
    threshold = sorted.empty()
                    ? 0.0
                    : sorted[(sorted.size() - 1) * 9 / 10];
    log_warn("edge-weight mixture fit degenerate; cutting above the 90th "
             "percentile instead");
    cut.node_count = tree.node_count;
    for (const WeightedEdge& e : tree.edges) {
      if (!(e.weight > threshold)) cut.edges.push_back(e);
    }
  }

  result.gmm_degenerate = degenerate;
  result.cut_threshold = threshold;
  result.mask = merge_components(cut, region, config.merge);

  DisjointSet dsu(cut.node_count);
  for (const WeightedEdge& e : cut.edges) dsu.unite(e.u, e.v);
  std::map<std::uint32_t, std::size_t> comp_sizes;
  for (std::uint32_t i = 0; i < cut.node_count; ++i) ++comp_sizes[dsu.find(i)];
  for (const auto& [root, size] : comp_sizes) {
    result.component_sizes.push_back(size);
  }
  std::sort(result.component_sizes.rbegin(), result.component_sizes.rend());
  return result;
}

}  // namespace owpl
