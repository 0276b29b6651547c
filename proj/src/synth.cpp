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
#include "owpl/synth.h"

#include <cmath>
#include <cstddef>
#include <string>

#include "owpl/common.h"
#include "owpl/rng.h"

namespace owpl {
namespace {

void check_cluster(const ClusterSpec& cluster, std::int32_t n_classes,
                   bool known, std::size_t index, const char* scope) {
  const std::string where =
      (known ? "known cluster " : "unknown cluster ") + std::to_string(index);
  require(cluster.point_count >= 1, ErrorKind::kInvalidSpec, scope,
          where + ": point_count must be >= 1");
  require(std::isfinite(cluster.radius) && cluster.radius >= 0.0,
          ErrorKind::kInvalidSpec, scope,
          where + ": radius must be finite and >= 0");
  for (double c : cluster.center) {
    require(std::isfinite(c), ErrorKind::kInvalidSpec, scope,
            where + ": non-finite center");
  }
  if (known) {
    require(cluster.class_id >= 0 && cluster.class_id < n_classes,
            ErrorKind::kInvalidSpec, scope,
            where + ": class_id " + std::to_string(cluster.class_id) +
                " outside [0, " + std::to_string(n_classes) + ")");
  } else {
    require(cluster.class_id == kUnknownLabel, ErrorKind::kInvalidSpec, scope,
            where + ": class_id must be " + std::to_string(kUnknownLabel));
  }
}

void check_spec(const SceneSpec& spec, const char* scope) {
  require(spec.n_classes >= 2, ErrorKind::kInvalidSpec, scope,
          "n_classes must be >= 2, got " + std::to_string(spec.n_classes));
  require(!spec.known_clusters.empty() || !spec.unknown_clusters.empty(),
          ErrorKind::kInvalidSpec, scope, "no clusters");
  for (std::size_t i = 0; i < spec.known_clusters.size(); ++i) {
    check_cluster(spec.known_clusters[i], spec.n_classes, true, i, scope);
  }
  for (std::size_t i = 0; i < spec.unknown_clusters.size(); ++i) {
    check_cluster(spec.unknown_clusters[i], spec.n_classes, false, i, scope);
  }
  const LogitModel& lm = spec.logit_model;
  require(std::isfinite(lm.known_peak), ErrorKind::kInvalidSpec, scope,
          "non-finite known_peak");
  require(std::isfinite(lm.unknown_flatness), ErrorKind::kInvalidSpec, scope,
          "non-finite unknown_flatness");
  require(std::isfinite(lm.noise_sigma) && lm.noise_sigma >= 0.0,
          ErrorKind::kInvalidSpec, scope,
          "noise_sigma must be finite and >= 0");
}

// Uniform inside the ball: isotropic direction from three normals, radius
// from the cube root of a uniform draw. Draw order is fixed so the output
// is a pure function of the RNG stream.
void sample_in_ball(Rng& rng, const ClusterSpec& cluster, double* xyz) {
  double g[3] = {rng.normal(), rng.normal(), rng.normal()};
  double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  if (norm == 0.0) {
    g[0] = 1.0;
    norm = 1.0;
  }
  const double r = cluster.radius * std::cbrt(rng.uniform());
  for (int d = 0; d < 3; ++d) {
    xyz[d] = cluster.center[static_cast<std::size_t>(d)] + r * g[d] / norm;
  }
}

}  // namespace

SceneSpec default_scene_spec() {
  SceneSpec spec;
  spec.known_clusters.push_back({{0.0, 0.0, 0.0}, 2.0, 400, 0});
  spec.known_clusters.push_back({{8.0, 0.0, 0.0}, 2.0, 400, 1});
  spec.unknown_clusters.push_back({{4.0, 6.0, 0.0}, 2.0, 200, kUnknownLabel});
  return spec;
}

Scene generate_scene(const SceneSpec& spec) {
  const char* scope = "synth.generate_scene";
  check_spec(spec, scope);

  std::size_t n = 0;
  for (const ClusterSpec& c : spec.known_clusters) {
    n += static_cast<std::size_t>(c.point_count);
  }
  for (const ClusterSpec& c : spec.unknown_clusters) {
    n += static_cast<std::size_t>(c.point_count);
  }
  const auto c_classes = static_cast<std::size_t>(spec.n_classes);

  Scene scene;
  scene.cloud.n_points = n;
  scene.cloud.n_classes = c_classes;
  scene.cloud.coords = Matrix(n, 3);
  scene.cloud.logits = Matrix(n, c_classes);
  scene.cloud.labels.assign(n, 0);
  scene.unknown_mask.assign(n, 0);

  Rng rng(spec.rng_seed);
  std::size_t row = 0;
  auto emit_cluster = [&](const ClusterSpec& cluster, bool known) {
    const LogitModel& lm = spec.logit_model;
    for (std::int32_t p = 0; p < cluster.point_count; ++p, ++row) {
      sample_in_ball(rng, cluster, &scene.cloud.coords(row, 0));
      auto logits = scene.cloud.logits.row(row);
      for (std::size_t j = 0; j < c_classes; ++j) {
        const double noise = lm.noise_sigma * rng.normal();
        if (known) {
          const bool peak = j == static_cast<std::size_t>(cluster.class_id);
          logits[j] = (peak ? lm.known_peak : 0.0) + noise;
        } else {
          logits[j] = lm.unknown_flatness * noise;
        }
      }
      scene.cloud.labels[row] = cluster.class_id;
      scene.unknown_mask[row] = known ? 0 : 1;
    }
  };
  for (const ClusterSpec& cluster : spec.known_clusters) {
    emit_cluster(cluster, true);
  }
  for (const ClusterSpec& cluster : spec.unknown_clusters) {
    emit_cluster(cluster, false);
  }
  scene.cloud.validate();
  return scene;
}

}  // namespace owpl
