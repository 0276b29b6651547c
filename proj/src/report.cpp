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
#include "owpl/report.h"

#include <fstream>

#include "owpl/common.h"

namespace owpl {

void Report::add(const std::string& key, const std::string& value) {
  entries_.push_back({key, value, false});
}

void Report::add(const std::string& key, const char* value) {
  entries_.push_back({key, std::string(value), false});
}

void Report::add(const std::string& key, double value) {
  entries_.push_back({key, format_double(value), false});
}

void Report::add(const std::string& key, std::int64_t value) {
  entries_.push_back({key, std::to_string(value), false});
}

void Report::add(const std::string& key, std::size_t value) {
  entries_.push_back({key, std::to_string(value), false});
}

void Report::add_timing(const std::string& key, double seconds) {
  entries_.push_back({"timing." + key, format_double(seconds), true});
}

std::string Report::render(bool include_timings) const {
  std::string out;
  for (const Entry& entry : entries_) {
    if (entry.timing && !include_timings) continue;
    out += entry.key;
    out += " = ";
    out += entry.value;
    out += '\n';
  }
  return out;
}

void Report::write(const std::filesystem::path& path,
                   bool include_timings) const {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kIoFailure, "report.write",
          "cannot open " + path.string());
  out << render(include_timings);
  out.flush();
  require(out.good(), ErrorKind::kIoFailure, "report.write",
          "write failed for " + path.string());
}

}  // namespace owpl
