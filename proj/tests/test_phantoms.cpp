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

#include "coshrem/phantoms.hpp"
#include "coshrem/postprocess.hpp"

#include "support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <numbers>

namespace coshrem {
namespace {

PhantomSpec single(Primitive p, PhantomMode mode, int size = 256) {
  PhantomSpec spec;
  spec.width = spec.height = size;
  spec.mode = mode;
  spec.primitives = {std::move(p)};
  return spec;
}

TEST(Generate, CircleGroundTruthCurvatureIsOneOverRadius) {
  const Phantom ph = generate(single(Circle{{128.3, 127.6}, 100.0}, PhantomMode::Edge));
  const double expected = 180.0 / std::numbers::pi / 100.0;
  long n = 0;
  for (int y = 0; y < 256; ++y) {
    for (int x = 0; x < 256; ++x) {
      if (!ph.truth.curve(y, x)) continue;
      EXPECT_NEAR(ph.truth.curvature(y, x), expected, 1e-9);
      EXPECT_NEAR(std::hypot(x - 128.3, y - 127.6), 100.0, 1.0);
      ++n;
    }
  }
  EXPECT_GT(n, 500);
  EXPECT_NEAR(ph.image(128, 128), 200.0, 1e-9);
  EXPECT_NEAR(ph.image(2, 2), 20.0, 1e-9);
}

TEST(Generate, HorizontalStrokeHasZeroTangentAndCurvature) {
  const Phantom ph = generate(single(Segment{{20, 64}, {100, 64}}, PhantomMode::Ridge, 128));
  EXPECT_EQ(ph.truth.curve.count(), 81);
  for (int x = 20; x <= 100; ++x) {
    ASSERT_TRUE(ph.truth.curve(64, x));
    EXPECT_NEAR(ph.truth.tangentDegrees(64, x), 0.0, 1e-9);
    EXPECT_NEAR(ph.truth.curvature(64, x), 0.0, 1e-9);
  }
  // 3 px stroke centred on the row.
  EXPECT_NEAR(ph.image(63, 60), 200.0, 1e-9);
  EXPECT_NEAR(ph.image(65, 60), 200.0, 1e-9);
  EXPECT_NEAR(ph.image(66, 60), 20.0, 1e-9);
}

TEST(Generate, EmptySpecIsConstantBackground) {
  PhantomSpec spec;
  spec.width = 32;
  spec.height = 24;
  const Phantom ph = generate(spec);
  EXPECT_TRUE((ph.image == 20.0).all());
  EXPECT_EQ(ph.truth.curve.count(), 0);
  EXPECT_EQ(ph.image.rows(), 24);
  EXPECT_EQ(ph.image.cols(), 32);
}

TEST(Generate, EdgeCoverageIsAreaWeighted) {
  // Half-plane through pixel centres x = 16: that column is half covered.
  PhantomSpec spec;
  spec.width = spec.height = 32;
  spec.primitives = {Polyline{{{16, -1}, {32, -1}, {32, 32}, {16, 32}}, true}};
  const Phantom ph = generate(spec);
  EXPECT_NEAR(ph.image(10, 15), 20.0, 1e-9);
  EXPECT_NEAR(ph.image(10, 16), 110.0, 1e-9);
  EXPECT_NEAR(ph.image(10, 17), 200.0, 1e-9);
}

TEST(Generate, GroundTruthIsMinimallyConnected) {
  std::vector<PhantomSpec> specs = {single(Circle{{128, 128}, 60}, PhantomMode::Edge),
                                    single(Arc{{128, 128}, 90, 10, 250}, PhantomMode::Ridge),
                                    line_phantom(128, 30.0, PhantomMode::Ridge),
                                    line_phantom(128, 60.0, PhantomMode::Edge)};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const BinaryMap gt = generate(specs[i]).truth.curve;
    EXPECT_EQ(test::redundant_pixels(gt), 0) << i;
    for (int y = 0; y < gt.rows(); ++y) {
      for (int x = 0; x < gt.cols(); ++x) {
        if (gt(y, x)) {
          EXPECT_LE(neighbour_count(gt, x, y), 2) << i;
        }
      }
    }
  }
  for (const PhantomSpec& spec : {edge512(), ridge512()}) {
    // Away from crossings every pixel has at most two neighbours and none is
    // redundant; crossings are allowed small clusters.
    const BinaryMap gt = generate(spec).truth.curve;
    long branching = 0;
    for (int y = 0; y < gt.rows(); ++y) {
      for (int x = 0; x < gt.cols(); ++x) {
        if (!gt(y, x)) continue;
        const int n = neighbour_count(gt, x, y);
        branching += n > 2;
        if (n == 2) {
          EXPECT_EQ(test::ring_groups(gt, x, y), 2) << x << "," << y;
        }
      }
    }
    EXPECT_LT(branching, gt.count() / 100);
  }
}

TEST(Generate, PolylineCornersHaveUndefinedCurvature) {
  const Phantom ph = generate(single(Polyline{{{40, 40}, {200, 40}, {200, 200}, {40, 200}}, true},
                                     PhantomMode::Edge));
  EXPECT_TRUE(std::isnan(ph.truth.curvature(40, 40)));
  EXPECT_NEAR(ph.truth.curvature(40, 120), 0.0, 1e-9);
  EXPECT_NEAR(ph.truth.tangentDegrees(120, 40), 90.0, 1e-9);
}

TEST(PhantomSpec, Validation) {
  PhantomSpec spec = single(Segment{{1, 1}, {5, 5}}, PhantomMode::Edge);
  EXPECT_THROW(generate(spec), ParameterError);
  spec = single(Circle{{10, 10}, -1}, PhantomMode::Ridge);
  EXPECT_THROW(generate(spec), ParameterError);
  spec = single(Circle{{10, 10}, 4}, PhantomMode::Ridge);
  spec.width = 4;
  EXPECT_THROW(generate(spec), ParameterError);
  EXPECT_THROW(parse_phantom_spec("{"), ParameterError);
  EXPECT_THROW(parse_phantom_spec(R"({"primitives":[{"type":"blob"}]})"), ParameterError);
}

TEST(PhantomSpec, JsonRoundTrip) {
  const PhantomSpec spec = edge512();
  const std::string text = to_json(spec);
  const PhantomSpec back = parse_phantom_spec(text);
  EXPECT_EQ(to_json(back), text);
  EXPECT_TRUE((generate(back).image == generate(spec).image).all());
  const auto gt = nlohmann::json::parse(to_json(generate(single(Circle{{20, 20}, 8}, PhantomMode::Edge, 40)).truth));
  EXPECT_EQ(gt["schema"], "coshrem.groundtruth/1");
}

TEST(Corrupt, ZeroLevelsAreIdentity) {
  const GrayImage f = test::shapes_image(50, 40, 1);
  EXPECT_TRUE((corrupt(f, 0.0, 0.0, 123) == f).all());
}

TEST(Corrupt, ImpulseBlurMatchesKernelCentre) {
  GrayImage f = GrayImage::Zero(21, 21);
  f(10, 10) = 1.0;
  double sum = 0.0;
  for (int i = -4; i <= 4; ++i) sum += std::exp(-0.5 * i * i);
  const double centre = 1.0 / (sum * sum);  // (0,0) entry of the separable 9x9 kernel
  EXPECT_NEAR(corrupt(f, 1.0, 0.0, 1)(10, 10), centre, 1e-15);
}

TEST(Corrupt, NoiseStatistics) {
  const GrayImage f = GrayImage::Constant(512, 512, 100.0);
  const GrayImage d = corrupt(f, 0.0, 50.0, 7) - f;
  const double mean = d.mean();
  const double sd = std::sqrt((d - mean).square().sum() / (d.size() - 1));
  EXPECT_GE(mean, -0.5);
  EXPECT_LE(mean, 0.5);
  EXPECT_GE(sd, 49.0);
  EXPECT_LE(sd, 51.0);
  EXPECT_LT(corrupt(f, 0.0, 50.0, 7).minCoeff(), 0.0);  // not clamped
}

TEST(Corrupt, SeededAndReproducible) {
  const GrayImage f = test::shapes_image(64, 64, 2);
  EXPECT_TRUE((corrupt(f, 1.0, 20.0, 5) == corrupt(f, 1.0, 20.0, 5)).all());
  EXPECT_FALSE((corrupt(f, 1.0, 20.0, 5) == corrupt(f, 1.0, 20.0, 6)).all());
}

TEST(Poissonize, ZeroImageStaysZero) {
  EXPECT_TRUE((poissonize(GrayImage::Zero(30, 30), 3) == 0.0).all());
}

TEST(Poissonize, MomentsOfConstantImage) {
  const GrayImage out = poissonize(GrayImage::Constant(512, 512, 100.0), 11);
  EXPECT_TRUE((out == 10.0 * (out / 10.0).round()).all());
  const double mean = out.mean();
  const double var = (out - mean).square().sum() / (out.size() - 1);
  EXPECT_GE(mean, 98.5);
  EXPECT_LE(mean, 101.5);
  EXPECT_GE(var, 900.0);
  EXPECT_LE(var, 1100.0);
}

TEST(Poissonize, MeanPreservingAtFullScale) {
  const GrayImage out = poissonize(GrayImage::Constant(256, 256, 255.0), 12);
  EXPECT_NEAR(out.mean(), 255.0, 1.0);
}

TEST(Poissonize, NegativesFlooredAndCounted) {
  GrayImage f = GrayImage::Constant(10, 10, 50.0);
  f(0, 0) = -30.0;
  f(5, 5) = -1.0;
  long floored = 0;
  const GrayImage out = poissonize(f, 1, &floored);
  EXPECT_EQ(floored, 2);
  EXPECT_EQ(out(0, 0), 0.0);
  EXPECT_GE(out.minCoeff(), 0.0);
  EXPECT_TRUE((poissonize(f, 99) == poissonize(f, 99)).all());
}

TEST(Grid, PaperLevels) {
  EXPECT_EQ(kBlurLevels, (std::array<double, 4>{0.0, 0.5, 1.0, 1.5}));
  EXPECT_EQ(kNoiseLevels, (std::array<double, 5>{0.0, 20.0, 50.0, 80.0, 100.0}));
  EXPECT_NE(cell_seed(1, 0), cell_seed(1, 1));
}

}  // namespace
}  // namespace coshrem
