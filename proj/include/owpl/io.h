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
#ifndef OWPL_IO_H_
#define OWPL_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "owpl/matrix.h"
#include "owpl/uncertainty.h"

namespace owpl {

// Text artifacts passed between CLI stages. All files are LF-terminated
// UTF-8 with reals in shortest round-trip form, so a load after a save is
// exact and reruns produce identical bytes. Loaders report structural
// problems as malformed-header with file:line context and value problems
// with their specific kind.

// One score per line after a `# method=<m> polarity=<p>` header line.
void save_score_field(const std::filesystem::path& path,
                      const ScoreField& scores);
ScoreField load_score_field(const std::filesystem::path& path);

// One signed integer label per line.
void save_labels(const std::filesystem::path& path,
                 std::span<const std::int32_t> labels);
std::vector<std::int32_t> load_labels(const std::filesystem::path& path);

// One point index per line, ascending.
void save_indices(const std::filesystem::path& path,
                  std::span<const std::uint32_t> indices);
std::vector<std::uint32_t> load_indices(const std::filesystem::path& path);

// One 0/1 flag per line.
void save_mask(const std::filesystem::path& path,
               std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> load_mask(const std::filesystem::path& path);

// Region-to-object assignment: `<point_index> <object_id>` per line with
// object_id -1 for rejected points. Rows ascend by point index.
struct ObjectLabels {
  std::vector<std::uint32_t> point_indices;
  std::vector<std::int32_t> object_ids;
};
void save_object_labels(const std::filesystem::path& path,
                        const ObjectLabels& labels);
ObjectLabels load_object_labels(const std::filesystem::path& path);

// Per-point distributions as CSV with header y_0,..,y_{K-1}.
void save_soft_labels(const std::filesystem::path& path, const Matrix& soft);
Matrix load_soft_labels(const std::filesystem::path& path);

}  // namespace owpl

#endif  // OWPL_IO_H_
