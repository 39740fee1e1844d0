/*
 * Copyright 2026 The coshrem Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coshrem/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace coshrem {
namespace {

DetectorSpec sobel_only() {
  DetectorSpec d;
  d.name = "sobel";
  d.type = DetectorSpec::Type::Sobel;
  return d;
}

std::string field_of(const std::string& text) {
  try {
    parse_bench_config(text);
  } catch (const ParameterError& e) {
    return e.field();
  }
  return "<none>";
}

TEST(Bench, DefaultRosterPerMode) {
  const auto edge = default_roster(PhantomMode::Edge);
  ASSERT_EQ(edge.size(), 4u);
  EXPECT_EQ(edge[0].name, "coshrem-edge");
  EXPECT_EQ(edge[0].coshrem.mode, MeasureKind::Edge);
  EXPECT_EQ(edge[1].name, "canny-tuned");
  EXPECT_EQ(edge[1].canny.sigma, tuned_canny().sigma);
  EXPECT_EQ(edge[2].canny.sigma, CannyParams::defaults().sigma);
  EXPECT_EQ(edge[3].type, DetectorSpec::Type::Sobel);
  EXPECT_EQ(default_roster(PhantomMode::Ridge)[0].coshrem.mode, MeasureKind::Ridge);
}

TEST(Bench, ParseDefaultsToFullGrid) {
  const BenchConfig c = parse_bench_config("{}");
  EXPECT_EQ(c.blur.size(), 4u);
  EXPECT_EQ(c.noise.size(), 5u);
  EXPECT_EQ(c.detectors.size(), 4u);
  EXPECT_FALSE(c.timing);
  const BenchConfig r = parse_bench_config(R"({"phantom":"ridge512","detectors":[{"type":"coshrem"}]})");
  EXPECT_EQ(r.phantom.mode, PhantomMode::Ridge);
  EXPECT_EQ(r.detectors[0].coshrem.mode, MeasureKind::Ridge);
  EXPECT_EQ(r.detectors[0].name, "coshrem");
}

TEST(Bench, ParseErrorsNameField) {
  EXPECT_EQ(field_of("{"), "config");
  EXPECT_EQ(field_of("3"), "config");
  EXPECT_EQ(field_of(R"({"phantom":"square"})"), "phantom");
  EXPECT_EQ(field_of(R"({"grid":{"blur":[]}})"), "grid");
  EXPECT_EQ(field_of(R"({"grid":{"noise":[-1]}})"), "noise");
  EXPECT_EQ(field_of(R"({"detectors":[]})"), "detectors");
  EXPECT_EQ(field_of(R"({"detectors":[{"type":"laplace"}]})"), "type");
  EXPECT_EQ(field_of(R"({"detectors":[{"type":"coshrem","system":{"alpha":4}}]})"), "alpha");
}

TEST(Bench, GridCellIsDeterministicPerCell) {
  const GrayImage p = generate(edge512()).image;
  const GrayImage a = grid_cell_image(p, 1.0, 20.0, true, 7, 3);
  EXPECT_TRUE((a == grid_cell_image(p, 1.0, 20.0, true, 7, 3)).all());
  EXPECT_FALSE((a == grid_cell_image(p, 1.0, 20.0, true, 7, 4)).all());
  EXPECT_TRUE((grid_cell_image(p, 0.0, 0.0, false, 7, 0) == p).all());
}

TEST(Bench, RowsCoverEveryCellInOrder) {
  BenchConfig c;
  c.detectors = {sobel_only()};
  c.poisson = {false, true};
  SystemCache cache;
  const BenchReport report = run_grid(c, cache);
  ASSERT_EQ(report.rows.size(), 40u);
  EXPECT_FALSE(report.rows[0].poisson);
  EXPECT_TRUE(report.rows[20].poisson);
  EXPECT_EQ(report.rows[1].noise, 20.0);
  EXPECT_EQ(report.rows[5].blur, 0.5);
  for (const auto& r : report.rows) {
    EXPECT_TRUE(r.error.empty());
    EXPECT_GE(r.pfom, 0.0);
    EXPECT_LE(r.pfom, 1.0);
  }
}

TEST(Bench, ReportsAreByteIdenticalOnRerun) {
  BenchConfig c;
  c.detectors = {sobel_only()};
  c.blur = {1.0};
  c.noise = {0.0, 50.0};
  c.poisson = {false, true};
  SystemCache cache;
  const BenchReport a = run_grid(c, cache);
  const BenchReport b = run_grid(c, cache);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.to_json(), b.to_json());

  std::istringstream csv(a.to_csv());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "detector,blur,noise,poisson,pfom,ms");
  std::getline(csv, line);
  EXPECT_EQ(line.back(), ',');
  EXPECT_NE(a.to_json().find("\"fftw\""), std::string::npos);
  EXPECT_EQ(a.to_json().find("\"ms\""), std::string::npos);
}

TEST(Bench, TimingFillsMilliseconds) {
  BenchConfig c;
  c.detectors = {sobel_only()};
  c.blur = {0.0};
  c.noise = {0.0};
  c.timing = true;
  SystemCache cache;
  const BenchReport r = run_grid(c, cache);
  EXPECT_GT(r.rows[0].ms, 0.0);
  EXPECT_NE(r.to_csv().back(), ',');
}

TEST(Bench, ShearletDetectorScoresCleanEdgePhantom) {
  BenchConfig c;
  c.detectors = {default_roster(PhantomMode::Edge)[0]};
  c.blur = {0.0};
  c.noise = {0.0};
  SystemCache cache;
  const BenchReport r = run_grid(c, cache);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_GE(r.rows[0].pfom, 0.9);
}

}  // namespace
}  // namespace coshrem
