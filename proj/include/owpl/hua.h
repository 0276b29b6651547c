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
#ifndef OWPL_HUA_H_
#define OWPL_HUA_H_

#include <cstdint>
#include <vector>

#include "owpl/matrix.h"
#include "owpl/pointset.h"
#include "owpl/spatial_index.h"
#include "owpl/uncertainty.h"

namespace owpl {

// Similarity uses a per-row normalized squared-distance term plus a score
// closeness term. The distance term has two forms:
//  - kRatio: d^2 / max_row d^2, which grows with distance (so "similarity"
//    rewards the farthest neighbor in each row);
//  - kInverted: 1 - d^2 / max_row d^2, which rewards near neighbors and is
//    the default used by region growing.
enum class DistanceSimilarityMode { kRatio, kInverted };

struct HuaConfig {
  std::size_t seed_count = 20;       // seeds sampled per region (m)
  double seed_pool_fraction = 0.02;  // pool = lowest ceil(fraction * N) scores
  double stop_lambda = 1.0;          // stop margin in population stddevs
  std::size_t k = 16;                // neighbors per member when growing
  std::size_t max_iterations = 64;
  DistanceSimilarityMode sim_mode = DistanceSimilarityMode::kInverted;
  std::uint64_t rng_seed = 1;
  int threads = 1;
};

enum class StopReason { kStopCondition, kExhausted, kMaxIterations };

// One grown low-confidence region. `members` is sorted and always contains
// the seeds; `mean_score_history[0]` is the seed mean and each later entry
// is the mean after an accepted growth step, all of which satisfy
// mean < global_mean - lambda * global_stddev (the batch that first violates
// it is rolled back before returning).
struct RegionState {
  std::vector<std::uint32_t> members;
  std::vector<std::uint32_t> seeds;
  std::size_t iterations = 0;
  std::vector<double> mean_score_history;
  StopReason stopped_reason = StopReason::kStopCondition;
};

// Deterministically samples config.seed_count distinct points from the pool
// of the ceil(seed_pool_fraction * N) lowest scores (ties broken by point
// index). Requires low-means-unknown polarity. Result is sorted.
std::vector<std::uint32_t> select_seeds(const ScoreField& scores,
                                        const HuaConfig& config);

// Pairwise similarity between each row point and its listed neighbors:
// distance term (see DistanceSimilarityMode, per-row max normalization;
// an all-zero row maxes to similarity 1) plus exp(-|score_i - score_j|).
// Entries lie in [0, 2]. Neighbor indices refer to the same cloud as
// `scores`.
Matrix similarity(const std::vector<std::uint32_t>& points,
                  const NeighborList& neighbors, const ScoreField& scores,
                  DistanceSimilarityMode mode, int threads = 1);

// Grows a region outward from low-score seeds. Each iteration queries the k
// nearest non-members of every member, admits the candidates whose best
// similarity reaches the global median of the similarity matrix, and accepts
// the batch only while the region mean score stays below
// global_mean - lambda * global_stddev. Stops on the first violating batch
// (rolled back), when candidates run out, or at max_iterations.
RegionState grow_region(const PointProbabilityCloud& cloud,
                        const ScoreField& scores, const HuaConfig& config);

}  // namespace owpl

#endif  // OWPL_HUA_H_
