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
#ifndef OWPL_REPORT_H_
#define OWPL_REPORT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace owpl {

// Line-oriented `key = value` run report. Entries keep insertion order.
// Timing entries are tagged so they can be left out entirely, which makes
// the remaining bytes a pure function of inputs and config.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value);
  void add(const std::string& key, double value);
  void add(const std::string& key, std::int64_t value);
  void add(const std::string& key, std::size_t value);
  void add_timing(const std::string& key, double seconds);

  std::string render(bool include_timings) const;
  void write(const std::filesystem::path& path, bool include_timings) const;

 private:
  struct Entry {
    std::string key;
    std::string value;
    bool timing = false;
  };
  std::vector<Entry> entries_;
};

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace owpl

#endif  // OWPL_REPORT_H_
