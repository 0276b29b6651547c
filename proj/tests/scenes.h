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
#ifndef OWPL_TESTS_SCENES_H_
#define OWPL_TESTS_SCENES_H_

// Hand-built fixtures shared by the unit and acceptance suites. The margins
// in both scenes are engineered, not incidental; see the comments on each
// constant before changing anything.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "owpl/gbd.h"
#include "owpl/hua.h"
#include "owpl/matrix.h"
#include "owpl/pointset.h"
#include "owpl/rng.h"
#include "owpl/uncertainty.h"

namespace owpl::scenes {

// Minimal valid cloud around a coordinate block; logits are a zero N x 2
// placeholder for callers that score points externally.
inline PointProbabilityCloud cloud_from_coords(Matrix coords) {
  PointProbabilityCloud cloud;
  cloud.n_points = coords.rows();
  cloud.n_classes = 2;
  cloud.coords = std::move(coords);
  cloud.logits = Matrix(cloud.n_points, 2);
  cloud.validate();
  return cloud;
}

inline ScoreField external_scores(std::vector<double> values) {
  ScoreField field;
  field.values = std::move(values);
  field.polarity = ScorePolarity::kLowMeansUnknown;
  field.method = ScoreMethod::kExternal;
  return field;
}

// A low-score line of 30 points next to a high-score ball of 170 points,
// far apart. All scores are exact constants, so the region-growing margins
// below are plain arithmetic, not tuning:
//   global mean  = (30 * 0.1 + 170 * 1.1) / 200          = 0.95
//   population s = sqrt(30 * 0.85^2 + 170 * 0.15^2) / ...= 0.357071...
//   strict_lambda = 2.3 puts the stop bound at 0.128737, which sits
//   strictly between the full low-cluster mean (0.1) and the mean after
//   admitting even one high point ((3 + 1.1) / 31 = 0.132264). Growth
//   therefore absorbs the low cluster and rolls back the first batch that
//   touches the high one.
struct TwoClusterScene {
  PointProbabilityCloud cloud;
  ScoreField scores;
  std::vector<std::uint32_t> low_indices;
  std::vector<std::uint32_t> high_indices;
  HuaConfig config;      // stop_lambda left at the caller's choice
  double strict_lambda = 2.3;
  double global_mean = 0.0;
  double global_stddev = 0.0;
};

inline TwoClusterScene two_cluster_scene() {
  constexpr std::size_t kLow = 30;
  constexpr std::size_t kHigh = 170;
  constexpr double kLowScore = 0.1;
  constexpr double kHighScore = 1.1;

  TwoClusterScene scene;
  Matrix coords(kLow + kHigh, 3);
  for (std::size_t i = 0; i < kLow; ++i) {
    coords(i, 0) = 0.15 * static_cast<double>(i);
    scene.low_indices.push_back(static_cast<std::uint32_t>(i));
    scene.scores.values.push_back(kLowScore);
  }
  Rng rng(41);
  for (std::size_t i = kLow; i < kLow + kHigh; ++i) {
    double g[3] = {rng.normal(), rng.normal(), rng.normal()};
    const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    const double r = 0.5 * std::cbrt(rng.uniform());
    coords(i, 0) = 20.0 + r * g[0] / norm;
    coords(i, 1) = r * g[1] / norm;
    coords(i, 2) = r * g[2] / norm;
    scene.high_indices.push_back(static_cast<std::uint32_t>(i));
    scene.scores.values.push_back(kHighScore);
  }
  scene.cloud = cloud_from_coords(std::move(coords));
  scene.scores.polarity = ScorePolarity::kLowMeansUnknown;
  scene.scores.method = ScoreMethod::kExternal;

  scene.config.seed_count = 5;
  scene.config.seed_pool_fraction = 0.05;  // pool = the 10 lowest scores
  scene.config.k = 4;
  scene.config.max_iterations = 100;
  scene.config.rng_seed = 1;
  scene.config.threads = 1;

  const double n = static_cast<double>(kLow + kHigh);
  scene.global_mean = (kLow * kLowScore + kHigh * kHighScore) / n;
  const double dl = kLowScore - scene.global_mean;
  const double dh = kHighScore - scene.global_mean;
  scene.global_stddev = std::sqrt((kLow * dl * dl + kHigh * dh * dh) / n);
  return scene;
}

// A 150-point jittered lattice (the planted unknown object) plus three
// far-away 9-point clumps standing in for absorbed high-confidence points.
// The geometry pins the outcome structurally:
//   - clumps sit 40 apart from everything with 9 > k points each, so every
//     neighbor list stays inside its own group and no edge links a clump to
//     the lattice: the pre-cut forest always has exactly 4 trees;
//   - 9 < min_object_points, so clumps (or any fragment of one) are always
//     rejected no matter where the edge cut lands;
//   - clump scores tie exactly and each clump point's farthest in-clump
//     neighbor yields a zero distance term, so clump tree edges all weigh
//     exactly 1.0: a zero-spread spike the mixture's high component locks
//     onto (its stddev bottoms out at the EM variance floor);
//   - k = 6 keeps interior lattice neighbor lists on the six axis
//     neighbors, whose score gaps under the (73 i + 11) mod 150 permutation
//     are 25..125 steps; boundary lists add diagonals at >= 8 steps. With a
//     0.004 step every lattice edge weighs between exp(-0.5) = 0.61 and
//     exp(-0.032) = 0.97, a single broad band with no stray weights between
//     it and the spike. The cut threshold lands a hair under 1.0, severing
//     exactly the clump edges: the object survives whole and the clumps
//     shatter into rejected singletons.
struct RimScene {
  PointProbabilityCloud cloud;
  ScoreField scores;
  RegionState region;                          // the full scene, pre-sorted
  std::vector<std::uint32_t> object_indices;   // planted unknown lattice
  std::vector<std::uint32_t> rim_indices;      // 27 clump points
  GbdConfig config;
};

inline RimScene rim_scene() {
  constexpr std::size_t kNx = 5, kNy = 5, kNz = 6;
  constexpr std::size_t kLattice = kNx * kNy * kNz;
  constexpr std::size_t kClumps = 3;
  constexpr std::size_t kClumpSize = 9;
  constexpr double kScoreStep = 0.004;
  const double centers[kClumps][3] = {
      {40.0, 0.0, 0.0}, {0.0, 40.0, 0.0}, {0.0, 0.0, 40.0}};

  RimScene scene;
  Matrix coords(kLattice + kClumps * kClumpSize, 3);
  Rng rng(7);
  std::size_t row = 0;
  for (std::size_t iz = 0; iz < kNz; ++iz) {
    for (std::size_t iy = 0; iy < kNy; ++iy) {
      for (std::size_t ix = 0; ix < kNx; ++ix, ++row) {
        coords(row, 0) = static_cast<double>(ix) + rng.uniform(-0.05, 0.05);
        coords(row, 1) = static_cast<double>(iy) + rng.uniform(-0.05, 0.05);
        coords(row, 2) = static_cast<double>(iz) + rng.uniform(-0.05, 0.05);
        // (73 i + 11) mod 150 is a permutation (gcd(73, 150) = 1), so all
        // lattice scores are distinct with pairwise gaps >= kScoreStep.
        scene.scores.values.push_back(kScoreStep *
                                      static_cast<double>((73 * row + 11) %
                                                          kLattice));
        scene.object_indices.push_back(static_cast<std::uint32_t>(row));
      }
    }
  }
  for (std::size_t c = 0; c < kClumps; ++c) {
    for (std::size_t p = 0; p < kClumpSize; ++p, ++row) {
      for (std::size_t d = 0; d < 3; ++d) {
        coords(row, d) = centers[c][d] + rng.uniform(-0.2, 0.2);
      }
      scene.scores.values.push_back(1000.0 + static_cast<double>(c));
      scene.rim_indices.push_back(static_cast<std::uint32_t>(row));
    }
  }
  scene.cloud = cloud_from_coords(std::move(coords));
  scene.scores.polarity = ScorePolarity::kLowMeansUnknown;
  scene.scores.method = ScoreMethod::kExternal;

  scene.region.members.resize(scene.cloud.n_points);
  std::iota(scene.region.members.begin(), scene.region.members.end(), 0u);
  scene.region.seeds = {0};
  scene.region.mean_score_history = {0.0};

  scene.config.k = 6;
  scene.config.threads = 1;
  return scene;
}

}  // namespace owpl::scenes

#endif  // OWPL_TESTS_SCENES_H_
