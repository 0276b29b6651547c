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
#ifndef OWPL_SYNTH_H_
#define OWPL_SYNTH_H_

#include <array>
#include <cstdint>
#include <vector>

#include "owpl/pointset.h"

namespace owpl {

struct ClusterSpec {
  std::array<double, 3> center = {0.0, 0.0, 0.0};
  double radius = 1.0;
  std::int32_t point_count = 1;
  std::int32_t class_id = 0;  // kUnknownLabel for unknown clusters
};

// How logits are synthesized. Points of known clusters get
// known_peak * onehot(class) plus N(0, noise_sigma^2) per entry; points of
// unknown clusters get unknown_flatness * N(0, noise_sigma^2) per entry, so
// they carry no class peak at all.
struct LogitModel {
  double known_peak = 6.0;
  double unknown_flatness = 3.0;
  double noise_sigma = 0.5;
};

struct SceneSpec {
  std::uint64_t rng_seed = 42;
  std::int32_t n_classes = 13;
  std::vector<ClusterSpec> known_clusters;
  std::vector<ClusterSpec> unknown_clusters;
  LogitModel logit_model;
};

// Two known balls of 400 points (classes 0 and 1) and one unknown ball of
// 200 points, spatially separated, with the default logit model.
SceneSpec default_scene_spec();

struct Scene {
  PointProbabilityCloud cloud;  // labels set; kUnknownLabel on unknown points
  std::vector<std::uint8_t> unknown_mask;  // 1 where the point is unknown
};

// Samples every cluster uniformly inside its ball and synthesizes logits per
// the spec's logit model. Single-threaded; output is a pure function of spec.
Scene generate_scene(const SceneSpec& spec);

}  // namespace owpl

#endif  // OWPL_SYNTH_H_
