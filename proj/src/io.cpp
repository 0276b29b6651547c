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
#include "owpl/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "owpl/common.h"

namespace owpl {
namespace {

std::string read_text(const std::filesystem::path& path, const char* scope) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::kIoFailure, scope,
          "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  require(!in.bad(), ErrorKind::kIoFailure, scope,
          "read failed for " + path.string());
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text,
                const char* scope) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kIoFailure, scope,
          "cannot open " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  require(out.good(), ErrorKind::kIoFailure, scope,
          "write failed for " + path.string());
}

[[noreturn]] void fail_line(const char* scope, ErrorKind kind,
                            const std::filesystem::path& path,
                            std::size_t line, const std::string& msg) {
  fail(kind, scope, path.string() + ":" + std::to_string(line) + ": " + msg);
}

// Walks lines of `text`, stripping one trailing '\r' per line, and calls
// fn(line_number, line). Line numbers are 1-based.
template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::size_t len = end - pos;
    if (len > 0 && text[pos + len - 1] == '\r') --len;
    ++line_no;
    fn(line_no, std::string_view(text.data() + pos, len));
    pos = end + 1;
  }
}

double parse_double_token(std::string_view token, const char* scope,
                          const std::filesystem::path& path,
                          std::size_t line) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(),
                                   out);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      !std::isfinite(out)) {
    fail_line(scope, ErrorKind::kNonFiniteValue, path, line,
              "expected a finite real, got '" + std::string(token) + "'");
  }
  return out;
}

template <typename Int>
Int parse_int_token(std::string_view token, const char* scope,
                    const std::filesystem::path& path, std::size_t line) {
  Int out = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(),
                                   out);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail_line(scope, ErrorKind::kMalformedHeader, path, line,
              "expected an integer, got '" + std::string(token) + "'");
  }
  return out;
}

const char* method_name(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::kMsp: return "msp";
    case ScoreMethod::kMaxLogit: return "maxlogit";
    case ScoreMethod::kExternal: return "external";
  }
  return "external";
}

const char* polarity_name(ScorePolarity polarity) {
  return polarity == ScorePolarity::kLowMeansUnknown ? "low_means_unknown"
                                                     : "high_means_unknown";
}

}  // namespace

void save_score_field(const std::filesystem::path& path,
                      const ScoreField& scores) {
  std::string out = "# method=";
  out += method_name(scores.method);
  out += " polarity=";
  out += polarity_name(scores.polarity);
  out += '\n';
  for (double v : scores.values) {
    out += format_double(v);
    out += '\n';
  }
  write_text(path, out, "io.save_score_field");
}

ScoreField load_score_field(const std::filesystem::path& path) {
  const char* scope = "io.load_score_field";
  const std::string text = read_text(path, scope);
  ScoreField out;
  bool have_header = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line_no == 1) {
      std::istringstream header{std::string(line)};
      std::string hash;
      std::string method_field;
      std::string polarity_field;
      header >> hash >> method_field >> polarity_field;
      if (hash != "#" || method_field.rfind("method=", 0) != 0 ||
          polarity_field.rfind("polarity=", 0) != 0) {
        fail_line(scope, ErrorKind::kMalformedHeader, path, line_no,
                  "expected '# method=<m> polarity=<p>'");
      }
      const std::string method = method_field.substr(7);
      if (method == "msp") {
        out.method = ScoreMethod::kMsp;
      } else if (method == "maxlogit") {
        out.method = ScoreMethod::kMaxLogit;
      } else if (method == "external") {
        out.method = ScoreMethod::kExternal;
      } else {
        fail_line(scope, ErrorKind::kMalformedHeader, path, line_no,
                  "unknown method '" + method + "'");
      }
      const std::string polarity = polarity_field.substr(9);
      if (polarity == "low_means_unknown") {
        out.polarity = ScorePolarity::kLowMeansUnknown;
      } else if (polarity == "high_means_unknown") {
        out.polarity = ScorePolarity::kHighMeansUnknown;
      } else {
        fail_line(scope, ErrorKind::kMalformedHeader, path, line_no,
                  "unknown polarity '" + polarity + "'");
      }
      have_header = true;
      return;
    }
    if (line.empty()) return;
    out.values.push_back(parse_double_token(line, scope, path, line_no));
  });
  require(have_header, ErrorKind::kMalformedHeader, scope,
          path.string() + ":1: missing score header");
  require(!out.values.empty(), ErrorKind::kEmptyInput, scope,
          path.string() + ": no scores");
  return out;
}

void save_labels(const std::filesystem::path& path,
                 std::span<const std::int32_t> labels) {
  std::string out;
  for (std::int32_t v : labels) {
    out += std::to_string(v);
    out += '\n';
  }
  write_text(path, out, "io.save_labels");
}

std::vector<std::int32_t> load_labels(const std::filesystem::path& path) {
  const char* scope = "io.load_labels";
  const std::string text = read_text(path, scope);
  std::vector<std::int32_t> out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    out.push_back(parse_int_token<std::int32_t>(line, scope, path, line_no));
  });
  require(!out.empty(), ErrorKind::kEmptyInput, scope,
          path.string() + ": no labels");
  return out;
}

void save_indices(const std::filesystem::path& path,
                  std::span<const std::uint32_t> indices) {
  std::string out;
  for (std::uint32_t v : indices) {
    out += std::to_string(v);
    out += '\n';
  }
  write_text(path, out, "io.save_indices");
}

std::vector<std::uint32_t> load_indices(const std::filesystem::path& path) {
  const char* scope = "io.load_indices";
  const std::string text = read_text(path, scope);
  std::vector<std::uint32_t> out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    out.push_back(parse_int_token<std::uint32_t>(line, scope, path, line_no));
  });
  require(!out.empty(), ErrorKind::kEmptyInput, scope,
          path.string() + ": no indices");
  return out;
}

void save_mask(const std::filesystem::path& path,
               std::span<const std::uint8_t> mask) {
  std::string out;
  for (std::uint8_t v : mask) {
    out += v ? '1' : '0';
    out += '\n';
  }
  write_text(path, out, "io.save_mask");
}

std::vector<std::uint8_t> load_mask(const std::filesystem::path& path) {
  const char* scope = "io.load_mask";
  const std::string text = read_text(path, scope);
  std::vector<std::uint8_t> out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    if (line == "0") {
      out.push_back(0);
    } else if (line == "1") {
      out.push_back(1);
    } else {
      fail_line(scope, ErrorKind::kMalformedHeader, path, line_no,
                "expected 0 or 1, got '" + std::string(line) + "'");
    }
  });
  require(!out.empty(), ErrorKind::kEmptyInput, scope,
          path.string() + ": empty mask");
  return out;
}

void save_object_labels(const std::filesystem::path& path,
                        const ObjectLabels& labels) {
  require(labels.point_indices.size() == labels.object_ids.size(),
          ErrorKind::kDimensionMismatch, "io.save_object_labels",
          "index and id counts differ");
  std::string out;
  for (std::size_t i = 0; i < labels.point_indices.size(); ++i) {
    out += std::to_string(labels.point_indices[i]);
    out += ' ';
    out += std::to_string(labels.object_ids[i]);
    out += '\n';
  }
  write_text(path, out, "io.save_object_labels");
}

ObjectLabels load_object_labels(const std::filesystem::path& path) {
  const char* scope = "io.load_object_labels";
  const std::string text = read_text(path, scope);
  ObjectLabels out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos) {
      fail_line(scope, ErrorKind::kMalformedHeader, path, line_no,
                "expected '<point_index> <object_id>'");
    }
    out.point_indices.push_back(parse_int_token<std::uint32_t>(
        line.substr(0, space), scope, path, line_no));
    out.object_ids.push_back(parse_int_token<std::int32_t>(
        line.substr(space + 1), scope, path, line_no));
  });
  require(!out.point_indices.empty(), ErrorKind::kEmptyInput, scope,
          path.string() + ": no rows");
  return out;
}

void save_soft_labels(const std::filesystem::path& path, const Matrix& soft) {
  require(soft.rows() > 0 && soft.cols() > 0, ErrorKind::kEmptyInput,
          "io.save_soft_labels", "empty matrix");
  std::string out;
  for (std::size_t j = 0; j < soft.cols(); ++j) {
    if (j > 0) out += ',';
    out += "y_" + std::to_string(j);
  }
  out += '\n';
  for (std::size_t i = 0; i < soft.rows(); ++i) {
    for (std::size_t j = 0; j < soft.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(soft(i, j));
    }
    out += '\n';
  }
  write_text(path, out, "io.save_soft_labels");
}

Matrix load_soft_labels(const std::filesystem::path& path) {
  const char* scope = "io.load_soft_labels";
  const std::string text = read_text(path, scope);
  std::size_t cols = 0;
  std::vector<double> values;
  std::size_t rows = 0;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    if (line_no == 1) {
      std::size_t count = 0;
      std::size_t pos = 0;
      while (true) {
        std::size_t comma = line.find(',', pos);
        std::string_view field = line.substr(
            pos, comma == std::string_view::npos ? line.size() - pos
                                                 : comma - pos);
        if (field != "y_" + std::to_string(count)) {
          fail_line(scope, ErrorKind::kMalformedHeader, path, line_no,
                    "expected column 'y_" + std::to_string(count) +
                        "', got '" + std::string(field) + "'");
        }
        ++count;
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
      cols = count;
      return;
    }
    std::size_t count = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string_view field = line.substr(
          pos, comma == std::string_view::npos ? line.size() - pos
                                               : comma - pos);
      values.push_back(parse_double_token(field, scope, path, line_no));
      ++count;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (count != cols) {
      fail_line(scope, ErrorKind::kDimensionMismatch, path, line_no,
                "expected " + std::to_string(cols) + " fields, got " +
                    std::to_string(count));
    }
    ++rows;
  });
  require(cols > 0, ErrorKind::kMalformedHeader, scope,
          path.string() + ":1: missing header");
  require(rows > 0, ErrorKind::kEmptyInput, scope,
          path.string() + ": no data rows");
  Matrix out(rows, cols);
  std::copy(values.begin(), values.end(), out.data().begin());
  return out;
}

}  // namespace owpl
