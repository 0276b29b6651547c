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

#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "checks.h"
#include "owpl/rng.h"

using namespace owpl;
using testutil::TempDir;
using testutil::expect_error;

TEST_CASE("score fields round trip with method and polarity intact") {
  TempDir dir;
  Rng rng(51);
  const ScoreMethod methods[] = {ScoreMethod::kMsp, ScoreMethod::kMaxLogit,
                                 ScoreMethod::kExternal};
  const ScorePolarity polarities[] = {ScorePolarity::kLowMeansUnknown,
                                      ScorePolarity::kHighMeansUnknown};
  int file_id = 0;
  for (ScoreMethod method : methods) {
    for (ScorePolarity polarity : polarities) {
      ScoreField field;
      field.method = method;
      field.polarity = polarity;
      field.values.resize(13);
      for (double& v : field.values) v = rng.uniform(-5.0, 5.0);

      const auto path = dir.file("s" + std::to_string(file_id++) + ".txt");
      save_score_field(path, field);
      ScoreField loaded = load_score_field(path);
      CHECK(loaded.values == field.values);
      CHECK(loaded.method == field.method);
      CHECK(loaded.polarity == field.polarity);
    }
  }
}

TEST_CASE("the score header is a single annotated line") {
  TempDir dir;
  ScoreField field;
  field.method = ScoreMethod::kMaxLogit;
  field.polarity = ScorePolarity::kHighMeansUnknown;
  field.values = {1.5};
  const auto path = dir.file("scores.txt");
  save_score_field(path, field);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "# method=maxlogit polarity=high_means_unknown");
}

TEST_CASE("score loading pins the header and value grammar") {
  TempDir dir;
  const auto path = dir.file("scores.txt");
  auto write = [&](const std::string& text) {
    std::ofstream(path) << text;
  };
  write("0.5\n0.25\n");
  expect_error(ErrorKind::kMalformedHeader, [&] { load_score_field(path); });
  write("# method=msp polarity=sideways\n0.5\n");
  expect_error(ErrorKind::kMalformedHeader, [&] { load_score_field(path); });
  write("# method=magic polarity=low_means_unknown\n0.5\n");
  expect_error(ErrorKind::kMalformedHeader, [&] { load_score_field(path); });
  write("# method=msp polarity=low_means_unknown\n");
  expect_error(ErrorKind::kEmptyInput, [&] { load_score_field(path); });
  write("# method=msp polarity=low_means_unknown\nnan\n");
  expect_error(ErrorKind::kNonFiniteValue, [&] { load_score_field(path); });
  expect_error(ErrorKind::kIoFailure,
               [&] { load_score_field(dir.file("missing.txt")); });
}

TEST_CASE("labels, indices, and masks round trip") {
  TempDir dir;
  const std::vector<std::int32_t> labels = {-1, 0, 7, 13};
  save_labels(dir.file("labels.txt"), labels);
  CHECK(load_labels(dir.file("labels.txt")) == labels);

  const std::vector<std::uint32_t> indices = {0, 5, 4294967295u};
  save_indices(dir.file("indices.txt"), indices);
  CHECK(load_indices(dir.file("indices.txt")) == indices);

  const std::vector<std::uint8_t> mask = {1, 0, 0, 1, 1};
  save_mask(dir.file("mask.txt"), mask);
  CHECK(load_mask(dir.file("mask.txt")) == mask);
}

TEST_CASE("mask and label parsing reject junk lines") {
  TempDir dir;
  const auto path = dir.file("bad.txt");
  std::ofstream(path) << "1\n2\n";
  expect_error(ErrorKind::kMalformedHeader, [&] { load_mask(path); });
  std::ofstream(path) << "1\nx\n";
  expect_error(ErrorKind::kMalformedHeader, [&] { load_labels(path); });
  std::ofstream(path) << "-3\n";
  expect_error(ErrorKind::kMalformedHeader, [&] { load_indices(path); });
  std::ofstream(path) << "";
  expect_error(ErrorKind::kEmptyInput, [&] { load_labels(path); });
}

TEST_CASE("object labels round trip as index-id pairs") {
  TempDir dir;
  ObjectLabels labels;
  labels.point_indices = {4, 9, 11};
  labels.object_ids = {0, 0, 1};
  const auto path = dir.file("objects.txt");
  save_object_labels(path, labels);
  ObjectLabels loaded = load_object_labels(path);
  CHECK(loaded.point_indices == labels.point_indices);
  CHECK(loaded.object_ids == labels.object_ids);

  labels.object_ids.pop_back();
  expect_error(ErrorKind::kDimensionMismatch,
               [&] { save_object_labels(path, labels); });
  std::ofstream(path) << "12\n";
  expect_error(ErrorKind::kMalformedHeader,
               [&] { load_object_labels(path); });
}

TEST_CASE("soft labels round trip through the csv table") {
  TempDir dir;
  Rng rng(52);
  Matrix soft(6, 4);
  for (std::size_t i = 0; i < 6; ++i) {
    double rest = 1.0;
    for (std::size_t j = 0; j + 1 < 4; ++j) {
      soft(i, j) = rest * 0.5 * rng.uniform();
      rest -= soft(i, j);
    }
    soft(i, 3) = rest;
  }
  const auto path = dir.file("soft.csv");
  save_soft_labels(path, soft);
  CHECK(load_soft_labels(path) == soft);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "y_0,y_1,y_2,y_3");

  expect_error(ErrorKind::kEmptyInput,
               [&] { save_soft_labels(dir.file("e.csv"), Matrix()); });
}
