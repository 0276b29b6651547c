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
#include "owpl/hua.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "owpl/common.h"
#include "owpl/parallel.h"
#include "owpl/rng.h"

namespace owpl {
namespace {

void check_scores(const ScoreField& scores, const std::string& scope) {
  require(!scores.values.empty(), ErrorKind::kEmptyInput, scope, "no scores");
  require(scores.polarity == ScorePolarity::kLowMeansUnknown,
          ErrorKind::kPolarityMismatch, scope,
          "region growing seeds from low scores; pass a low-means-unknown "
          "field");
  for (double v : scores.values) {
    require(std::isfinite(v), ErrorKind::kNonFiniteValue, scope,
            "non-finite score");
  }
}

struct ScoreStats {
  double mean;
  double stddev;  // population
};

ScoreStats score_stats(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

// Mean score over a sorted member list, recomputed in index order so the
// value is independent of how the set was assembled.
double member_mean(const std::vector<std::uint32_t>& members,
                   const std::vector<double>& scores) {
  double sum = 0.0;
  for (std::uint32_t m : members) sum += scores[m];
  return sum / static_cast<double>(members.size());
}

}  // namespace

std::vector<std::uint32_t> select_seeds(const ScoreField& scores,
                                        const HuaConfig& config) {
  const std::string scope = "hua.select_seeds";
  check_scores(scores, scope);
  const std::size_t n = scores.values.size();
  require(config.seed_count >= 1, ErrorKind::kInvalidArgument, scope,
          "seed_count must be >= 1");
  require(config.seed_pool_fraction > 0.0 && config.seed_pool_fraction <= 1.0,
          ErrorKind::kInvalidArgument, scope,
          "seed_pool_fraction must be in (0, 1]");

  std::size_t pool_size = static_cast<std::size_t>(
      std::ceil(config.seed_pool_fraction * static_cast<double>(n)));
  pool_size = std::min(pool_size, n);
  require(pool_size >= config.seed_count, ErrorKind::kPoolTooSmall, scope,
          "pool of " + std::to_string(pool_size) +
              " lowest scores cannot supply " +
              std::to_string(config.seed_count) + " seeds");

  // Lowest pool_size scores; (score, index) ordering makes the pool unique
  // even when scores tie.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::partial_sort(order.begin(), order.begin() + pool_size, order.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      double sa = scores.values[a], sb = scores.values[b];
                      return sa < sb || (sa == sb && a < b);
                    });

  Rng rng(config.rng_seed);
  std::vector<std::uint64_t> picks =
      rng.sample_without_replacement(pool_size, config.seed_count);
  std::vector<std::uint32_t> seeds(picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    seeds[i] = order[picks[i]];
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

Matrix similarity(const std::vector<std::uint32_t>& points,
                  const NeighborList& neighbors, const ScoreField& scores,
                  DistanceSimilarityMode mode, int threads) {
  const std::string scope = "hua.similarity";
  require(points.size() == neighbors.query_count,
          ErrorKind::kDimensionMismatch, scope,
          "points and neighbor rows disagree");
  require(neighbors.k >= 1, ErrorKind::kInvalidArgument, scope,
          "neighbor list is empty");
  for (std::uint32_t p : points) {
    require(p < scores.values.size(), ErrorKind::kIndexOutOfRange, scope,
            "point index " + std::to_string(p) + " out of range");
  }

  Matrix sim(points.size(), neighbors.k);
  parallel_for(points.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double* sq = neighbors.row_sq_distances(i);
      const std::uint32_t* idx = neighbors.row_indices(i);
      double row_max = 0.0;
      for (std::size_t j = 0; j < neighbors.k; ++j) {
        row_max = std::max(row_max, sq[j]);
      }
      double s_i = scores.values[points[i]];
      for (std::size_t j = 0; j < neighbors.k; ++j) {
        double dist_term;
        if (row_max == 0.0) {
          dist_term = 1.0;  // all neighbors coincident: equally near
        } else {
          double ratio = sq[j] / row_max;
          dist_term =
              mode == DistanceSimilarityMode::kRatio ? ratio : 1.0 - ratio;
        }
        double score_term = std::exp(-std::abs(s_i - scores.values[idx[j]]));
        sim(i, j) = dist_term + score_term;
      }
    }
  });
  return sim;
}

RegionState grow_region(const PointProbabilityCloud& cloud,
                        const ScoreField& scores, const HuaConfig& config) {
  const std::string scope = "hua.grow_region";
  check_scores(scores, scope);
  require(scores.values.size() == cloud.n_points, ErrorKind::kDimensionMismatch,
          scope, "score count does not match cloud");
  require(config.k >= 1, ErrorKind::kInvalidArgument, scope, "k must be >= 1");

  const std::size_t n = cloud.n_points;
  ScoreStats all = score_stats(scores.values);
  const double stop_threshold = all.mean - config.stop_lambda * all.stddev;

  RegionState state;
  state.seeds = select_seeds(scores, config);
  state.members = state.seeds;
  state.mean_score_history.push_back(member_mean(state.members, scores.values));

  // Strict inequality: a seed set already at or above the bound grows nothing.
  if (!(state.mean_score_history.front() < stop_threshold)) {
    state.stopped_reason = StopReason::kStopCondition;
    return state;
  }

  SpatialIndex index = SpatialIndex::build(cloud.coords);
  std::vector<bool> is_member(n, false);
  for (std::uint32_t m : state.members) is_member[m] = true;

  // Max similarity seen per candidate this iteration; -1 marks untouched.
  std::vector<double> best_sim(n, -1.0);

  while (true) {
    if (state.iterations >= config.max_iterations) {
      state.stopped_reason = StopReason::kMaxIterations;
      return state;
    }
    std::size_t available = n - state.members.size();
    std::size_t k_eff = std::min(config.k, available);
    if (k_eff == 0) {
      state.stopped_reason = StopReason::kExhausted;
      return state;
    }

    NeighborList neighbors =
        index.knn(state.members, k_eff, &is_member, false, config.threads);
    Matrix sim = similarity(state.members, neighbors, scores, config.sim_mode,
                            config.threads);

    // Global 50th percentile over all m x k entries: the value at index
    // floor(count / 2) in ascending order. Admission is >=, so the top half
    // (plus ties) gets in and at least one candidate is always admitted.
    std::vector<double> entries = sim.data();
    std::size_t mid = entries.size() / 2;
    std::nth_element(entries.begin(), entries.begin() + mid, entries.end());
    double admit_threshold = entries[mid];

    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < state.members.size(); ++i) {
      const std::uint32_t* idx = neighbors.row_indices(i);
      for (std::size_t j = 0; j < k_eff; ++j) {
        std::uint32_t cand = idx[j];
        if (best_sim[cand] < 0.0) touched.push_back(cand);
        best_sim[cand] = std::max(best_sim[cand], sim(i, j));
      }
    }

    std::vector<std::uint32_t> batch;
    for (std::uint32_t cand : touched) {
      if (best_sim[cand] >= admit_threshold) batch.push_back(cand);
    }
    for (std::uint32_t cand : touched) best_sim[cand] = -1.0;

    if (batch.empty()) {
      state.stopped_reason = StopReason::kExhausted;
      return state;
    }
    std::sort(batch.begin(), batch.end());

    std::vector<std::uint32_t> grown;
    grown.reserve(state.members.size() + batch.size());
    std::merge(state.members.begin(), state.members.end(), batch.begin(),
               batch.end(), std::back_inserter(grown));
    double grown_mean = member_mean(grown, scores.values);

    if (!(grown_mean < stop_threshold)) {
      // The violating batch is rolled back so the returned region still
      // satisfies the recorded bound.
      state.stopped_reason = StopReason::kStopCondition;
      return state;
    }

    state.members.swap(grown);
    for (std::uint32_t b : batch) is_member[b] = true;
    state.mean_score_history.push_back(grown_mean);
    ++state.iterations;
  }
}

}  // namespace owpl
