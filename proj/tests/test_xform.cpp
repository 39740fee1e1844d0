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

#include "coshrem/xform.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

namespace coshrem {
namespace {

using test::small_params;

const ShearletSystem& system64() {
  static const ShearletSystem s = build_system(small_params(), 64, 64);
  return s;
}

double volume_max(const CoefficientVolume& v) {
  double m = 0.0;
  for (const auto& p : v.planes) m = std::max(m, p.abs().maxCoeff());
  return m;
}

TEST(Analyze, ShapeAndKey) {
  const CoefficientVolume v = analyze(system64(), test::noise_image(64, 64, 1));
  EXPECT_EQ(v.width, 64);
  EXPECT_EQ(v.height, 64);
  EXPECT_EQ(static_cast<int>(v.planes.size()), system64().filter_count());
  EXPECT_EQ(v.systemKey, system64().cache_key());
  for (const auto& p : v.planes) {
    EXPECT_EQ(p.rows(), 64);
    EXPECT_EQ(p.cols(), 64);
  }
}

TEST(Analyze, ConstantImageHasZeroCoefficients) {
  const CoefficientVolume v = analyze(system64(), GrayImage::Constant(64, 64, 173.0));
  EXPECT_LE(volume_max(v), 1e-9 * 173.0);
}

TEST(Analyze, Linear) {
  const GrayImage f = test::shapes_image(64, 64, 3), g = test::noise_image(64, 64, 4);
  const double alpha = -2.75;
  const CoefficientVolume vf = analyze(system64(), f), vg = analyze(system64(), g);
  const CoefficientVolume vs = analyze(system64(), alpha * f + g);
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < vs.planes.size(); ++i) {
    scale = std::max(scale, vs.planes[i].abs().maxCoeff());
    err = std::max(err, (vs.planes[i] - (alpha * vf.planes[i] + vg.planes[i])).abs().maxCoeff());
  }
  EXPECT_LE(err, 1e-10 * scale);
}

TEST(Analyze, CircularShiftCovariance) {
  const GrayImage f = test::shapes_image(64, 64, 5);
  const CoefficientVolume v = analyze(system64(), f);
  const CoefficientVolume w = analyze(system64(), test::circshift(f, 13, -7));
  const double scale = volume_max(v);
  for (std::size_t i = 0; i < v.planes.size(); ++i) {
    const ComplexPlane shifted = test::circshift(v.planes[i], 13, -7);
    EXPECT_LE((shifted - w.planes[i]).abs().maxCoeff(), 1e-11 * scale) << i;
  }
}

TEST(Analyze, NegationNegates) {
  const GrayImage f = test::noise_image(64, 64, 6);
  const CoefficientVolume v = analyze(system64(), f), w = analyze(system64(), -f);
  for (std::size_t i = 0; i < v.planes.size(); ++i) {
    EXPECT_TRUE(((v.planes[i] + w.planes[i]).abs() <= 1e-12 * volume_max(v)).all());
  }
}

TEST(Analyze, EvenPartOfUnshearedResponseToSymmetricInputIsSymmetric) {
  GrayImage f = GrayImage::Zero(64, 64);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) f(y, x) = std::hypot(x - 32, y - 32) < 12 ? 200.0 : 10.0;
  }
  const ShearletSystem& s = system64();
  const CoefficientVolume v = analyze(s, f);
  for (int k = 0; k < s.orientation_count(); ++k) {
    if (s.orientation(k).shear != 0) continue;
    const ComplexPlane& p = v.planes[s.filter_index(2, k)];
    const double scale = p.abs().maxCoeff();
    for (int y = 1; y < 64; ++y) {
      for (int x = 1; x < 64; ++x) EXPECT_NEAR(p(y, x).real(), p(64 - y, 64 - x).real(), 1e-10 * scale);
    }
  }
}

TEST(Analyze, RejectsBadInput) {
  EXPECT_THROW(analyze(system64(), GrayImage::Zero(64, 63)), ParameterError);
  GrayImage f = GrayImage::Zero(64, 64);
  f(3, 3) = std::nan("");
  EXPECT_THROW(analyze(system64(), f), ParameterError);
  f(3, 3) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Analyzer(system64(), f), ParameterError);
}

TEST(CoefficientsAt, MatchesPlanes) {
  const CoefficientVolume v = analyze(system64(), test::noise_image(64, 64, 8));
  const auto c = coefficients_at(v, 17, 41);
  ASSERT_EQ(static_cast<int>(c.size()), system64().filter_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c[i].first, static_cast<int>(i));
    EXPECT_EQ(c[i].second, v.planes[i](41, 17));
  }
  EXPECT_THROW(coefficients_at(v, 64, 0), ParameterError);
  EXPECT_THROW(coefficients_at(v, 0, -1), ParameterError);
}

TEST(CoefficientsAt, IdealStepGivesUnitOddAtEdgeColumn) {
  const ShearletSystem& s = system64();
  const CoefficientVolume v = analyze(s, calibration_step(64, 64));
  const auto c = coefficients_at(v, 32, 20);
  for (int k = 0; k < s.orientation_count(); ++k) {
    const Orientation& o = s.orientation(k);
    if (o.cone != Cone::Horizontal || o.shear != 0) continue;
    for (int j = 0; j < s.scale_count(); ++j) {
      EXPECT_NEAR(c[s.filter_index(j, k)].second.imag(), 1.0, 1e-6);
    }
  }
}

TEST(Analyzer, AgreesWithFullVolume) {
  const GrayImage f = test::shapes_image(64, 64, 9);
  const CoefficientVolume v = analyze(system64(), f);
  const Analyzer a(system64(), f);
  for (int i = 0; i < system64().filter_count(); i += 7) {
    EXPECT_LE((a.response(i) - v.planes[i]).abs().maxCoeff(), 1e-12 * volume_max(v));
    EXPECT_LE((a.response(i, 3.0) - 3.0 * v.planes[i]).abs().maxCoeff(), 1e-12 * volume_max(v));
  }
}

}  // namespace
}  // namespace coshrem
