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
#include "owpl/pointset.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "owpl/common.h"

namespace owpl {
namespace {

constexpr char kMagic[8] = {'O', 'W', 'P', 'C', '0', '0', '0', '1'};
constexpr std::uint32_t kFlagLabels = 1u << 0;
constexpr std::uint32_t kFlagFeatures = 1u << 1;
constexpr std::uint32_t kFlagFeatureCount = 1u << 2;
constexpr std::uint32_t kKnownFlags =
    kFlagLabels | kFlagFeatures | kFlagFeatureCount;

std::string at_offset(std::size_t offset) {
  return " at byte offset " + std::to_string(offset);
}

std::string at_line(std::size_t line) {
  return " at line " + std::to_string(line);
}

// ---- little-endian primitives ----------------------------------------------

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_f32(std::string& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_i32(std::string& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}

class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string scope)
      : bytes_(bytes), scope_(std::move(scope)) {}

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }

  void need(std::size_t n, const std::string& what) {
    if (remaining() < n) {
      fail(ErrorKind::kDimensionMismatch, scope_,
           "truncated " + what + ": need " + std::to_string(n) +
               " bytes, have " + std::to_string(remaining()) +
               at_offset(offset_));
    }
  }

  std::uint32_t u32(const std::string& what) {
    need(4, what);
    const unsigned char* p =
        reinterpret_cast<const unsigned char*>(bytes_.data()) + offset_;
    offset_ += 4;
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
  }

  std::int32_t i32(const std::string& what) {
    return static_cast<std::int32_t>(u32(what));
  }

  float f32(const std::string& what) {
    return std::bit_cast<float>(u32(what));
  }

 private:
  std::string_view bytes_;
  std::string scope_;
  std::size_t offset_ = 0;
};

void read_f32_block(ByteReader& reader, Matrix& out, std::size_t rows,
                    std::size_t cols, const std::string& what,
                    const std::string& scope) {
  out = Matrix(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::size_t value_offset = reader.offset();
      float v = reader.f32(what);
      if (!std::isfinite(v)) {
        fail(ErrorKind::kNonFiniteValue, scope,
             "non-finite " + what + at_offset(value_offset));
      }
      out(i, j) = static_cast<double>(v);
    }
  }
}

// ---- file helpers -----------------------------------------------------------

std::string read_file(const std::filesystem::path& path,
                      const std::string& scope) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::kIoFailure, scope, "cannot open " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    fail(ErrorKind::kIoFailure, scope, "read failed for " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes,
                const std::string& scope) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorKind::kIoFailure, scope, "cannot create " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    fail(ErrorKind::kIoFailure, scope, "write failed for " + path.string());
  }
}

// ---- OWPC -------------------------------------------------------------------

PointProbabilityCloud load_owpc(const std::filesystem::path& path) {
  const std::string scope = "pointset.load_cloud";
  std::string bytes = read_file(path, scope);
  ByteReader reader(bytes, scope);

  reader.need(sizeof kMagic, "magic");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    fail(ErrorKind::kMalformedHeader, scope,
         "bad magic, expected OWPC0001" + at_offset(0));
  }
  reader.u32("magic");
  reader.u32("magic");

  std::uint32_t n = reader.u32("point count");
  std::uint32_t c = reader.u32("class count");
  std::size_t flags_offset = reader.offset();
  std::uint32_t flags = reader.u32("flags");

  if ((flags & ~kKnownFlags) != 0) {
    fail(ErrorKind::kMalformedHeader, scope,
         "unknown flag bits " + std::to_string(flags & ~kKnownFlags) +
             at_offset(flags_offset));
  }
  if ((flags & kFlagFeatures) && !(flags & kFlagFeatureCount)) {
    fail(ErrorKind::kMalformedHeader, scope,
         "feature block present but channel count flag unset" +
             at_offset(flags_offset));
  }
  if (n == 0) {
    fail(ErrorKind::kMalformedHeader, scope,
         "point count must be >= 1" + at_offset(8));
  }
  if (c < 2) {
    fail(ErrorKind::kMalformedHeader, scope,
         "class count must be >= 2" + at_offset(12));
  }

  std::uint32_t feature_channels = 0;
  if (flags & kFlagFeatureCount) {
    feature_channels = reader.u32("feature channel count");
  }

  PointProbabilityCloud cloud;
  cloud.n_points = n;
  cloud.n_classes = c;
  read_f32_block(reader, cloud.coords, n, 3, "coordinate", scope);
  read_f32_block(reader, cloud.logits, n, c, "logit", scope);

  if (flags & kFlagLabels) {
    cloud.labels.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::size_t value_offset = reader.offset();
      std::int32_t label = reader.i32("label");
      if (label < kUnknownLabel) {
        fail(ErrorKind::kLabelOutOfRange, scope,
             "label " + std::to_string(label) + " below -1" +
                 at_offset(value_offset));
      }
      cloud.labels[i] = label;
    }
  }
  if (flags & kFlagFeatures) {
    read_f32_block(reader, cloud.features, n, feature_channels, "feature",
                   scope);
  }
  if (reader.remaining() != 0) {
    fail(ErrorKind::kDimensionMismatch, scope,
         std::to_string(reader.remaining()) +
             " trailing bytes beyond declared blocks" +
             at_offset(reader.offset()));
  }
  cloud.validate();
  return cloud;
}

void save_owpc(const PointProbabilityCloud& cloud,
               const std::filesystem::path& path) {
  const std::string scope = "pointset.save_cloud";
  std::string out;
  out.reserve(24 + cloud.n_points * (3 + cloud.n_classes) * 4);
  out.append(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(cloud.n_points));
  put_u32(out, static_cast<std::uint32_t>(cloud.n_classes));
  std::uint32_t flags = 0;
  if (cloud.has_labels()) flags |= kFlagLabels;
  if (cloud.has_features()) flags |= kFlagFeatures | kFlagFeatureCount;
  put_u32(out, flags);
  if (cloud.has_features()) {
    put_u32(out, static_cast<std::uint32_t>(cloud.feature_channels()));
  }
  for (double v : cloud.coords.data()) put_f32(out, static_cast<float>(v));
  for (double v : cloud.logits.data()) put_f32(out, static_cast<float>(v));
  if (cloud.has_labels()) {
    for (std::int32_t v : cloud.labels) put_i32(out, v);
  }
  if (cloud.has_features()) {
    for (double v : cloud.features.data()) put_f32(out, static_cast<float>(v));
  }
  write_file(path, out, scope);
}

// ---- CSV --------------------------------------------------------------------

std::string csv_header(std::size_t n_classes, bool with_label) {
  std::string h = "x,y,z";
  for (std::size_t j = 0; j < n_classes; ++j) {
    h += ",logit_" + std::to_string(j);
  }
  if (with_label) h += ",label";
  return h;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double_field(std::string_view token, std::size_t line_no,
                          const std::string& scope) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() ||
      !std::isfinite(v)) {
    fail(ErrorKind::kNonFiniteValue, scope,
         "invalid numeric field '" + std::string(token) + "'" +
             at_line(line_no));
  }
  return v;
}

std::int32_t parse_label_field(std::string_view token, std::size_t line_no,
                               const std::string& scope) {
  std::int32_t v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    fail(ErrorKind::kLabelOutOfRange, scope,
         "invalid label field '" + std::string(token) + "'" + at_line(line_no));
  }
  if (v < kUnknownLabel) {
    fail(ErrorKind::kLabelOutOfRange, scope,
         "label " + std::to_string(v) + " below -1" + at_line(line_no));
  }
  return v;
}

PointProbabilityCloud load_csv(const std::filesystem::path& path) {
  const std::string scope = "pointset.load_cloud";
  std::string text = read_file(path, scope);

  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    std::size_t nl = rest.find('\n');
    std::string_view line =
        nl == std::string_view::npos ? rest : rest.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    rest = rest.substr(nl + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.empty()) {
    fail(ErrorKind::kMalformedHeader, scope, "empty file" + at_line(1));
  }

  auto header = split_csv_line(lines[0]);
  if (header.size() < 5 || header[0] != "x" || header[1] != "y" ||
      header[2] != "z") {
    fail(ErrorKind::kMalformedHeader, scope,
         "expected header x,y,z,logit_0,..." + at_line(1));
  }
  bool with_label = header.back() == "label";
  std::size_t n_classes = header.size() - 3 - (with_label ? 1 : 0);
  if (n_classes < 2) {
    fail(ErrorKind::kMalformedHeader, scope,
         "class count must be >= 2" + at_line(1));
  }
  for (std::size_t j = 0; j < n_classes; ++j) {
    if (header[3 + j] != "logit_" + std::to_string(j)) {
      fail(ErrorKind::kMalformedHeader, scope,
           "expected column logit_" + std::to_string(j) + ", got '" +
               std::string(header[3 + j]) + "'" + at_line(1));
    }
  }

  std::size_t n = lines.size() - 1;
  if (n == 0) {
    fail(ErrorKind::kDimensionMismatch, scope, "no data rows" + at_line(2));
  }

  PointProbabilityCloud cloud;
  cloud.n_points = n;
  cloud.n_classes = n_classes;
  cloud.coords = Matrix(n, 3);
  cloud.logits = Matrix(n, n_classes);
  if (with_label) cloud.labels.resize(n);

  std::size_t expected_fields = 3 + n_classes + (with_label ? 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t line_no = i + 2;
    auto fields = split_csv_line(lines[i + 1]);
    if (fields.size() != expected_fields) {
      fail(ErrorKind::kDimensionMismatch, scope,
           "expected " + std::to_string(expected_fields) + " fields, got " +
               std::to_string(fields.size()) + at_line(line_no));
    }
    for (std::size_t j = 0; j < 3; ++j) {
      cloud.coords(i, j) = parse_double_field(fields[j], line_no, scope);
    }
    for (std::size_t j = 0; j < n_classes; ++j) {
      cloud.logits(i, j) = parse_double_field(fields[3 + j], line_no, scope);
    }
    if (with_label) {
      cloud.labels[i] = parse_label_field(fields.back(), line_no, scope);
    }
  }
  cloud.validate();
  return cloud;
}

void save_csv(const PointProbabilityCloud& cloud,
              const std::filesystem::path& path) {
  const std::string scope = "pointset.save_cloud";
  if (cloud.has_features()) {
    fail(ErrorKind::kUnsupported, scope,
         "the CSV table has no feature columns; use the binary format");
  }
  std::string out = csv_header(cloud.n_classes, cloud.has_labels());
  out += '\n';
  for (std::size_t i = 0; i < cloud.n_points; ++i) {
    out += format_double(cloud.coords(i, 0));
    out += ',';
    out += format_double(cloud.coords(i, 1));
    out += ',';
    out += format_double(cloud.coords(i, 2));
    for (std::size_t j = 0; j < cloud.n_classes; ++j) {
      out += ',';
      out += format_double(cloud.logits(i, j));
    }
    if (cloud.has_labels()) {
      out += ',';
      out += std::to_string(cloud.labels[i]);
    }
    out += '\n';
  }
  write_file(path, out, scope);
}

void check_finite_matrix(const Matrix& m, const std::string& what,
                         const std::string& scope) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::kNonFiniteValue, scope, "non-finite " + what);
    }
  }
}

}  // namespace

void PointProbabilityCloud::validate() const {
  const std::string scope = "pointset.validate";
  require(n_points >= 1, ErrorKind::kEmptyInput, scope,
          "cloud must contain at least one point");
  require(n_classes >= 2, ErrorKind::kInvalidArgument, scope,
          "cloud must declare at least two closed classes");
  require(coords.rows() == n_points && coords.cols() == 3,
          ErrorKind::kDimensionMismatch, scope, "coords must be n_points x 3");
  require(logits.rows() == n_points && logits.cols() == n_classes,
          ErrorKind::kDimensionMismatch, scope,
          "logits must be n_points x n_classes");
  require(labels.empty() || labels.size() == n_points,
          ErrorKind::kDimensionMismatch, scope,
          "label block must cover every point");
  require(features.empty() || features.rows() == n_points,
          ErrorKind::kDimensionMismatch, scope,
          "feature block must cover every point");
  check_finite_matrix(coords, "coordinate", scope);
  check_finite_matrix(logits, "logit", scope);
  check_finite_matrix(features, "feature", scope);
  for (std::int32_t label : labels) {
    // Labels above n_classes-1 are legal: incremental inputs carry novel ids.
    require(label >= kUnknownLabel, ErrorKind::kLabelOutOfRange, scope,
            "label " + std::to_string(label) + " below -1");
  }
}

LabelSet LabelSet::closed_set(std::vector<std::int32_t> labels) {
  LabelSet s;
  s.kind = LabelKind::kClosedSet;
  s.hard = std::move(labels);
  s.validate();
  return s;
}

LabelSet LabelSet::pseudo(std::vector<std::int32_t> labels) {
  LabelSet s;
  s.kind = LabelKind::kPseudo;
  s.hard = std::move(labels);
  s.validate();
  return s;
}

LabelSet LabelSet::novel_one_hot(std::vector<std::int32_t> labels) {
  LabelSet s;
  s.kind = LabelKind::kNovelOneHot;
  s.hard = std::move(labels);
  s.validate();
  return s;
}

LabelSet LabelSet::distilled(Matrix soft_rows) {
  LabelSet s;
  s.kind = LabelKind::kDistilled;
  s.soft = std::move(soft_rows);
  s.validate();
  return s;
}

void LabelSet::validate() const {
  const std::string scope = "pointset.label_set";
  if (kind == LabelKind::kDistilled) {
    require(!soft.empty(), ErrorKind::kEmptyInput, scope,
            "distilled label set has no rows");
    for (std::size_t i = 0; i < soft.rows(); ++i) {
      double sum = 0.0;
      for (double v : soft.row(i)) {
        require(std::isfinite(v) && v >= 0.0, ErrorKind::kInvalidSimplexRow,
                scope, "row " + std::to_string(i) + " has a negative or "
                "non-finite entry");
        sum += v;
      }
      require(std::abs(sum - 1.0) <= 1e-9, ErrorKind::kInvalidSimplexRow,
              scope, "row " + std::to_string(i) + " sums to " +
              std::to_string(sum));
    }
    return;
  }
  require(!hard.empty(), ErrorKind::kEmptyInput, scope,
          "hard label set has no entries");
  for (std::int32_t v : hard) {
    require(v >= kUnknownLabel, ErrorKind::kLabelOutOfRange, scope,
            "label " + std::to_string(v) + " below -1");
  }
}

PointProbabilityCloud load_cloud(const std::filesystem::path& path,
                                 CloudFormat format) {
  return format == CloudFormat::kOwpc ? load_owpc(path) : load_csv(path);
}

void save_cloud(const PointProbabilityCloud& cloud,
                const std::filesystem::path& path, CloudFormat format) {
  cloud.validate();
  if (format == CloudFormat::kOwpc) {
    save_owpc(cloud, path);
  } else {
    save_csv(cloud, path);
  }
}

CloudFormat guess_format(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CloudFormat::kCsv : CloudFormat::kOwpc;
}

}  // namespace owpl
