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
#include "owpl/config.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "owpl/common.h"

namespace owpl {
namespace {

constexpr const char* kScope = "config.parse";

struct KeyDefault {
  const char* key;
  const char* value;
};

// Every recognized key with its built-in default. Values are kept as text
// and converted on access so override errors can name the offending key.
constexpr std::array<KeyDefault, 27> kRegistry = {{
    {"score.method", "msp"},
    {"predict.lambda", "0.5"},
    {"hua.m", "20"},
    {"hua.p", "0.02"},
    {"hua.lambda", "1.0"},
    {"hua.k", "16"},
    {"hua.max_iterations", "64"},
    {"hua.sim_d_mode", "inverted"},
    {"hua.rng_seed", "1"},
    {"gbd.k", "16"},
    {"gbd.epsilon", "3.0"},
    {"gbd.sim_d_mode", "inverted"},
    {"gbd.min_object_points", "10"},
    {"gbd.mad_multiplier", "3.0"},
    {"gmm.max_iterations", "200"},
    {"gmm.tolerance", "1e-8"},
    {"gmm.rng_seed", "7"},
    {"gmm.restarts", "4"},
    {"loss.alpha", "0.001"},
    {"distill.temperature", "2.0"},
    {"distill.novel_count", "1"},
    {"distill.novel_label_offset", "auto"},
    {"synth.rng_seed", "42"},
    {"synth.n_classes", "13"},
    {"synth.known_peak", "6.0"},
    {"synth.unknown_flatness", "3.0"},
    {"synth.noise_sigma", "0.5"},
}};

constexpr std::array<const char*, 4> kClusterKeys = {
    "center", "radius", "count", "class"};

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line,
                          const std::string& msg) {
  fail(ErrorKind::kConfigError, kScope,
       source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double_value(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    fail(ErrorKind::kConfigError, "config.get",
         "key '" + key + "': expected a finite real, got '" + value + "'");
  }
  return out;
}

template <typename Int>
Int parse_int_value(const std::string& key, const std::string& value) {
  Int out = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    fail(ErrorKind::kConfigError, "config.get",
         "key '" + key + "': expected an integer, got '" + value + "'");
  }
  return out;
}

std::array<double, 3> parse_triple(const std::string& key,
                                   const std::string& value) {
  std::string spaced = value;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::array<double, 3> out{};
  std::string token;
  for (double& slot : out) {
    if (!(in >> token)) {
      fail(ErrorKind::kConfigError, "config.get",
           "key '" + key + "': expected three reals, got '" + value + "'");
    }
    slot = parse_double_value(key, token);
  }
  if (in >> token) {
    fail(ErrorKind::kConfigError, "config.get",
         "key '" + key + "': expected three reals, got '" + value + "'");
  }
  return out;
}

}  // namespace

Settings::Settings() {
  for (const KeyDefault& kd : kRegistry) values_[kd.key] = kd.value;
}

void Settings::apply_preset(const std::string& name) {
  if (name == "s3dis") {
    values_["hua.m"] = "20";
    values_["hua.p"] = "0.02";
    values_["hua.lambda"] = "1.0";
  } else if (name == "scannet") {
    values_["hua.m"] = "200";
    values_["hua.p"] = "0.15";
    values_["hua.lambda"] = "2.0";
  } else {
    fail(ErrorKind::kConfigError, "config.preset",
         "unknown preset '" + name + "' (expected s3dis or scannet)");
  }
}

void Settings::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::kIoFailure, "config.load",
          "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_text(buffer.str(), path.string());
}

void Settings::apply_text(const std::string& text,
                          const std::string& source_name) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::string section;
  std::map<std::string, std::string>* cluster = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail_at(source_name, line_no, "unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        fail_at(source_name, line_no, "empty section name");
      }
      if (section == "cluster") {
        clusters_.emplace_back();
        cluster = &clusters_.back();
      } else {
        cluster = nullptr;
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail_at(source_name, line_no, "expected 'key = value', got '" + line +
                                        "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(source_name, line_no, "empty key");
    if (cluster != nullptr) {
      if (std::find(kClusterKeys.begin(), kClusterKeys.end(), key) ==
          kClusterKeys.end()) {
        fail_at(source_name, line_no, "unknown cluster key '" + key + "'");
      }
      if (!cluster->emplace(key, value).second) {
        fail_at(source_name, line_no,
                "duplicate cluster key '" + key + "'");
      }
      continue;
    }
    const std::string full =
        section.empty() ? key : section + "." + key;
    const auto it = values_.find(full);
    if (it == values_.end()) {
      fail_at(source_name, line_no, "unknown key '" + full + "'");
    }
    it->second = value;
  }
}

void Settings::set_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    fail(ErrorKind::kConfigError, "config.set",
         "expected key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Settings::set(const std::string& key, const std::string& value) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    fail(ErrorKind::kConfigError, "config.set", "unknown key '" + key + "'");
  }
  it->second = value;
}

const std::string& Settings::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    fail(ErrorKind::kConfigError, "config.get", "unknown key '" + key + "'");
  }
  return it->second;
}

std::int64_t Settings::get_int(const std::string& key) const {
  return parse_int_value<std::int64_t>(key, get_string(key));
}

std::uint64_t Settings::get_u64(const std::string& key) const {
  return parse_int_value<std::uint64_t>(key, get_string(key));
}

double Settings::get_double(const std::string& key) const {
  return parse_double_value(key, get_string(key));
}

std::vector<std::pair<std::string, std::string>> Settings::echo() const {
  std::vector<std::pair<std::string, std::string>> out(values_.begin(),
                                                       values_.end());
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    for (const auto& [key, value] : clusters_[i]) {
      out.emplace_back("cluster." + std::to_string(i) + "." + key, value);
    }
  }
  return out;
}

ScoreMethod Settings::score_method() const {
  const std::string& value = get_string("score.method");
  if (value == "msp") return ScoreMethod::kMsp;
  if (value == "maxlogit") return ScoreMethod::kMaxLogit;
  fail(ErrorKind::kConfigError, "config.get",
       "key 'score.method': expected msp or maxlogit, got '" + value + "'");
}

double Settings::predict_lambda() const { return get_double("predict.lambda"); }

DistanceSimilarityMode Settings::sim_mode(const std::string& key) const {
  const std::string& value = get_string(key);
  if (value == "inverted") return DistanceSimilarityMode::kInverted;
  if (value == "ratio") return DistanceSimilarityMode::kRatio;
  fail(ErrorKind::kConfigError, "config.get",
       "key '" + key + "': expected inverted or ratio, got '" + value + "'");
}

namespace {

std::size_t to_count(const std::string& key, std::int64_t v) {
  if (v < 0) {
    fail(ErrorKind::kConfigError, "config.get",
         "key '" + key + "': must be >= 0, got " + std::to_string(v));
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

HuaConfig Settings::hua_config() const {
  HuaConfig out;
  out.seed_count = to_count("hua.m", get_int("hua.m"));
  out.seed_pool_fraction = get_double("hua.p");
  out.stop_lambda = get_double("hua.lambda");
  out.k = to_count("hua.k", get_int("hua.k"));
  out.max_iterations =
      to_count("hua.max_iterations", get_int("hua.max_iterations"));
  out.sim_mode = sim_mode("hua.sim_d_mode");
  out.rng_seed = get_u64("hua.rng_seed");
  return out;
}

GbdConfig Settings::gbd_config() const {
  GbdConfig out;
  out.k = to_count("gbd.k", get_int("gbd.k"));
  out.epsilon = get_double("gbd.epsilon");
  out.sim_mode = sim_mode("gbd.sim_d_mode");
  out.gmm.max_iterations =
      to_count("gmm.max_iterations", get_int("gmm.max_iterations"));
  out.gmm.tolerance = get_double("gmm.tolerance");
  out.gmm.rng_seed = get_u64("gmm.rng_seed");
  out.gmm.restarts = to_count("gmm.restarts", get_int("gmm.restarts"));
  out.merge.min_object_points =
      to_count("gbd.min_object_points", get_int("gbd.min_object_points"));
  out.merge.mad_multiplier = get_double("gbd.mad_multiplier");
  return out;
}

LossConfig Settings::loss_config() const {
  LossConfig out;
  out.alpha = get_double("loss.alpha");
  return out;
}

DistillConfig Settings::distill_config(std::size_t teacher_width) const {
  DistillConfig out;
  out.temperature = get_double("distill.temperature");
  const std::int64_t count = get_int("distill.novel_count");
  require(count >= 1, ErrorKind::kConfigError, "config.get",
          "key 'distill.novel_count': must be >= 1, got " +
              std::to_string(count));
  out.novel_count = static_cast<std::int32_t>(count);
  const std::string& offset = get_string("distill.novel_label_offset");
  if (offset == "auto") {
    require(teacher_width > static_cast<std::size_t>(count),
            ErrorKind::kConfigError, "config.get",
            "distill.novel_label_offset = auto needs teacher width > "
            "novel_count");
    out.novel_label_offset =
        static_cast<std::int32_t>(teacher_width) - out.novel_count;
  } else {
    out.novel_label_offset =
        parse_int_value<std::int32_t>("distill.novel_label_offset", offset);
  }
  return out;
}

SceneSpec Settings::scene_spec() const {
  SceneSpec spec = default_scene_spec();
  spec.rng_seed = get_u64("synth.rng_seed");
  const std::int64_t classes = get_int("synth.n_classes");
  require(classes >= 2, ErrorKind::kConfigError, "config.get",
          "key 'synth.n_classes': must be >= 2, got " +
              std::to_string(classes));
  spec.n_classes = static_cast<std::int32_t>(classes);
  spec.logit_model.known_peak = get_double("synth.known_peak");
  spec.logit_model.unknown_flatness = get_double("synth.unknown_flatness");
  spec.logit_model.noise_sigma = get_double("synth.noise_sigma");
  if (clusters_.empty()) return spec;

  spec.known_clusters.clear();
  spec.unknown_clusters.clear();
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    const auto& fields = clusters_[i];
    const std::string where = "cluster." + std::to_string(i);
    auto field = [&](const char* name) -> const std::string& {
      const auto it = fields.find(name);
      if (it == fields.end()) {
        fail(ErrorKind::kConfigError, "config.get",
             where + ": missing key '" + std::string(name) + "'");
      }
      return it->second;
    };
    ClusterSpec cluster;
    cluster.center = parse_triple(where + ".center", field("center"));
    cluster.radius = parse_double_value(where + ".radius", field("radius"));
    cluster.point_count =
        parse_int_value<std::int32_t>(where + ".count", field("count"));
    cluster.class_id =
        parse_int_value<std::int32_t>(where + ".class", field("class"));
    if (cluster.class_id == kUnknownLabel) {
      spec.unknown_clusters.push_back(cluster);
    } else {
      spec.known_clusters.push_back(cluster);
    }
  }
  return spec;
}

}  // namespace owpl
