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
#ifndef OWPL_CONFIG_H_
#define OWPL_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "owpl/distillation.h"
#include "owpl/gbd.h"
#include "owpl/hua.h"
#include "owpl/losses.h"
#include "owpl/synth.h"
#include "owpl/uncertainty.h"

namespace owpl {

// Run settings backed by a flat `section.key = value` table with a fixed
// key registry. Sources layer in the order they are applied: built-in
// defaults, then preset, then config file, then --set overrides.
//
// File syntax: UTF-8 text, `key = value` lines, `[section]` headers, `#`
// comment lines. A `[cluster]` section may repeat; each occurrence declares
// one synthetic cluster with keys center (three reals), radius, count and
// class (-1 for an unknown cluster).
class Settings {
 public:
  Settings();

  // `s3dis` keeps the built-in region-growing defaults (m=20, p=0.02,
  // lambda=1.0); `scannet` switches them to m=200, p=0.15, lambda=2.0.
  void apply_preset(const std::string& name);

  void load_file(const std::filesystem::path& path);
  void apply_text(const std::string& text, const std::string& source_name);

  // `assignment` is `key=value`; the key must exist in the registry.
  void set_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  const std::string& get_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;

  // All effective values, sorted by key, clusters flattened as
  // cluster.<i>.<key>.
  std::vector<std::pair<std::string, std::string>> echo() const;

  ScoreMethod score_method() const;
  double predict_lambda() const;
  HuaConfig hua_config() const;
  GbdConfig gbd_config() const;
  LossConfig loss_config() const;
  // `teacher_width` resolves distill.novel_label_offset = auto to
  // width - novel_count.
  DistillConfig distill_config(std::size_t teacher_width) const;
  SceneSpec scene_spec() const;

 private:
  DistanceSimilarityMode sim_mode(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::vector<std::map<std::string, std::string>> clusters_;
};

}  // namespace owpl

#endif  // OWPL_CONFIG_H_
