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

#include "coshrem/baselines.hpp"

#include "coshrem/metrics.hpp"
#include "coshrem/postprocess.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace coshrem {
namespace {

/// Gradient components of the image minus its minimum, so that results do not
/// depend on an intensity offset.
void sobel_gradient(const GrayImage& image, Image<double>& gx, Image<double>& gy) {
  const Eigen::Index rows = image.rows(), cols = image.cols();
  const GrayImage f = image - image.minCoeff();
  gx.resize(rows, cols);
  gy.resize(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    const Eigen::Index ym = reflect_index(y - 1, rows), yp = reflect_index(y + 1, rows);
    for (Eigen::Index x = 0; x < cols; ++x) {
      const Eigen::Index xm = reflect_index(x - 1, cols), xp = reflect_index(x + 1, cols);
      gx(y, x) = (f(ym, xp) + 2.0 * f(y, xp) + f(yp, xp)) - (f(ym, xm) + 2.0 * f(y, xm) + f(yp, xm));
      gy(y, x) = (f(yp, xm) + 2.0 * f(yp, x) + f(yp, xp)) - (f(ym, xm) + 2.0 * f(ym, x) + f(ym, xp));
    }
  }
}

Image<double> magnitude(const Image<double>& gx, const Image<double>& gy) {
  Image<double> mag = (gx.square() + gy.square()).sqrt();
  const double cutoff = 1e-12 * mag.maxCoeff();
  mag = (mag <= cutoff).select(0.0, mag);
  return mag;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  const double pos = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(values.size() - 1, lo + 1);
  std::nth_element(values.begin(), values.begin() + lo, values.end());
  const double a = values[lo];
  std::nth_element(values.begin(), values.begin() + hi, values.end());
  const double b = values[hi];
  return a + (pos - lo) * (b - a);
}

}  // namespace

CannyParams CannyParams::defaults() {
  CannyParams p;
  p.automatic = true;
  p.sigma = std::numbers::sqrt2;
  return p;
}

void CannyParams::validate() const {
  if (!(sigma >= 0.0)) throw ParameterError("Canny sigma must be >= 0", "sigma");
  if (!automatic) {
    if (!(lowFrac >= 0.0 && highFrac <= 1.0 && lowFrac <= highFrac)) {
      throw ParameterError("Canny needs 0 <= lowFrac <= highFrac <= 1", "lowFrac");
    }
  }
}

Image<double> sobel_magnitude(const GrayImage& image) {
  Image<double> gx, gy;
  sobel_gradient(image, gx, gy);
  return magnitude(gx, gy);
}

double otsu_threshold(const Image<double>& values) {
  const double max = values.maxCoeff();
  if (!(max > 0.0)) return 0.0;
  constexpr int kBins = 256;
  std::array<double, kBins> hist{};
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const int b = std::min(kBins - 1, static_cast<int>(values.data()[i] / max * kBins));
    hist[b] += 1.0;
  }
  const double total = static_cast<double>(values.size());
  double sumAll = 0.0;
  for (int b = 0; b < kBins; ++b) sumAll += b * hist[b];
  double weightBelow = 0.0, sumBelow = 0.0, bestVar = -1.0;
  int best = 0;
  for (int b = 0; b < kBins; ++b) {
    weightBelow += hist[b];
    sumBelow += b * hist[b];
    const double weightAbove = total - weightBelow;
    if (weightBelow == 0.0 || weightAbove == 0.0) continue;
    const double m0 = sumBelow / weightBelow;
    const double m1 = (sumAll - sumBelow) / weightAbove;
    const double var = weightBelow * weightAbove * (m0 - m1) * (m0 - m1);
    if (var > bestVar) {
      bestVar = var;
      best = b;
    }
  }
  return (best + 1) * max / kBins;
}

BinaryMap canny(const GrayImage& image, const CannyParams& params) {
  params.validate();
  const double sigma = params.automatic ? std::numbers::sqrt2 : params.sigma;
  Image<double> gx, gy;
  sobel_gradient(gaussian_blur(image, sigma), gx, gy);
  const Image<double> mag = magnitude(gx, gy);
  const Eigen::Index rows = mag.rows(), cols = mag.cols();

  double low, high;
  if (params.automatic) {
    high = otsu_threshold(mag);
    low = 0.4 * high;
  } else {
    std::vector<double> nonzero;
    for (Eigen::Index i = 0; i < mag.size(); ++i) {
      if (mag.data()[i] > 0.0) nonzero.push_back(mag.data()[i]);
    }
    low = quantile(nonzero, params.lowFrac);
    high = quantile(nonzero, params.highFrac);
  }

  Image<double> suppressed = Image<double>::Zero(rows, cols);
  auto at = [&](Eigen::Index y, Eigen::Index x) {
    return (y < 0 || x < 0 || y >= rows || x >= cols) ? 0.0 : mag(y, x);
  };
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      const double m = mag(y, x);
      if (m <= 0.0) continue;
      // Gradient direction quantised to 0, 45, 90, 135 degrees (row axis down).
      double angle = std::atan2(gy(y, x), gx(y, x)) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      int dx, dy;
      if (angle < 22.5 || angle >= 157.5) {
        dx = 1, dy = 0;
      } else if (angle < 67.5) {
        dx = 1, dy = 1;
      } else if (angle < 112.5) {
        dx = 0, dy = 1;
      } else {
        dx = -1, dy = 1;
      }
      if (m > at(y - dy, x - dx) && m >= at(y + dy, x + dx)) suppressed(y, x) = m;
    }
  }
  if (!(high > 0.0)) return BinaryMap::Constant(rows, cols, false);
  BinaryMap out = hysteresis(suppressed, std::max(low, 1e-300), high);
  return out;
}

BinaryMap sobel(const GrayImage& image, double threshold, bool thinned) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ParameterError("Sobel threshold must be in [0, 1]", "threshold");
  }
  const Image<double> mag = sobel_magnitude(image);
  const BinaryMap on = mag > threshold * mag.maxCoeff();
  return thinned ? thin(on) : on;
}

std::vector<CannyParams> canny_candidates() {
  std::vector<CannyParams> out;
  for (double sigma : {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
    for (double high : {0.7, 0.75, 0.8, 0.85, 0.9, 0.93, 0.95}) {
      for (double ratio : {0.4, 0.6, 0.8}) {
        CannyParams p;
        p.sigma = sigma;
        p.highFrac = high;
        p.lowFrac = high * ratio;
        out.push_back(p);
      }
    }
  }
  return out;
}

std::pair<CannyParams, double> tune_canny(const std::vector<std::pair<GrayImage, BinaryMap>>& cases,
                                          const std::vector<CannyParams>& candidates) {
  if (candidates.empty()) throw ParameterError("no Canny candidates to tune over", "candidates");
  std::vector<double> worst(candidates.size(), 1.0);
  detail::parallel_for(static_cast<int>(candidates.size()), [&](int, int i) {
    for (const auto& [image, truth] : cases) {
      worst[i] = std::min(worst[i], pfom(thin(canny(image, candidates[i])), truth));
    }
  });
  const auto best = std::max_element(worst.begin(), worst.end()) - worst.begin();
  return {candidates[best], worst[best]};
}

}  // namespace coshrem
