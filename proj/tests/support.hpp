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

#ifndef COSHREM_TESTS_SUPPORT_HPP_
#define COSHREM_TESTS_SUPPORT_HPP_

#include "coshrem/image.hpp"
#include "coshrem/shearlets.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace coshrem::test {

// Small bank for fast unit tests: J = 4 scales, 32 orientations.
inline SystemParams small_params() {
  SystemParams p;
  p.waveletSupport = 24.0;
  p.gaussianSupport = 12.0;
  p.scalesPerOctave = 2;
  p.octaves = 2.0;
  p.shearLevel = 3;
  p.alpha = 0.5;
  return p;
}

inline GrayImage noise_image(int width, int height, std::uint64_t seed, double scale = 255.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, scale);
  GrayImage image(height, width);
  for (Eigen::Index i = 0; i < image.size(); ++i) image.data()[i] = u(rng);
  return image;
}

// Filled discs and rectangles at random positions, lightly blurred.
inline GrayImage shapes_image(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayImage image = GrayImage::Constant(height, width, 20.0);
  for (int s = 0; s < 4; ++s) {
    const double cx = u(rng) * width, cy = u(rng) * height, r = 4 + u(rng) * width / 5.0;
    const double level = 60 + 180 * u(rng);
    const bool disc = s % 2 == 0;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const bool in = disc ? std::hypot(x - cx, y - cy) < r
                             : std::abs(x - cx) < r && std::abs(y - cy) < r / 2;
        if (in) image(y, x) = level;
      }
    }
  }
  return gaussian_blur(image, 0.7);
}

template <typename T>
Image<T> circshift(const Image<T>& image, int dx, int dy) {
  const Eigen::Index h = image.rows(), w = image.cols();
  Image<T> out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      out(((y + dy) % h + h) % h, ((x + dx) % w + w) % w) = image(y, x);
    }
  }
  return out;
}

// Rotates the raster by 90 degrees counter-clockwise as seen on screen.
template <typename T>
Image<T> rot90(const Image<T>& image) {
  const Eigen::Index h = image.rows(), w = image.cols();
  Image<T> out(w, h);
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) out(w - 1 - x, y) = image(y, x);
  }
  return out;
}

inline double max_abs(const Image<double>& a) { return a.size() ? a.abs().maxCoeff() : 0.0; }

inline double brute_distance(const BinaryMap& ref, int x, int y) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < ref.rows(); ++r) {
    for (Eigen::Index c = 0; c < ref.cols(); ++c) {
      if (ref(r, c)) best = std::min(best, std::hypot(double(c - x), double(r - y)));
    }
  }
  return best;
}

inline BinaryMap random_map(int width, int height, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(density);
  BinaryMap map(height, width);
  for (Eigen::Index i = 0; i < map.size(); ++i) map.data()[i] = b(rng);
  return map;
}

// Number of 8-connected groups formed by the on-neighbours of (x, y) inside
// its 3x3 ring. A pixel of a minimally connected curve that is not an
// endpoint separates its neighbours into at least two groups.
inline int ring_groups(const BinaryMap& map, int x, int y) {
  static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static constexpr int dy[8] = {0, -1, -1, -1, 0, 1, 1, 1};
  bool on[8];
  for (int k = 0; k < 8; ++k) {
    const int xx = x + dx[k], yy = y + dy[k];
    on[k] = xx >= 0 && yy >= 0 && xx < map.cols() && yy < map.rows() && map(yy, xx);
  }
  int label[8];
  std::fill(label, label + 8, -1);
  int groups = 0;
  for (int k = 0; k < 8; ++k) {
    if (!on[k] || label[k] >= 0) continue;
    std::vector<int> stack{k};
    label[k] = groups;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < 8; ++b) {
        if (on[b] && label[b] < 0 && std::abs(dx[a] - dx[b]) <= 1 && std::abs(dy[a] - dy[b]) <= 1) {
          label[b] = groups;
          stack.push_back(b);
        }
      }
    }
    ++groups;
  }
  return groups;
}

// Count of on-pixels that could be deleted without splitting their
// neighbourhood or opening a hole (and are not endpoints).
inline int redundant_pixels(const BinaryMap& map) {
  int count = 0;
  for (int y = 0; y < map.rows(); ++y) {
    for (int x = 0; x < map.cols(); ++x) {
      if (!map(y, x)) continue;
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          n += (dx || dy) && xx >= 0 && yy >= 0 && xx < map.cols() && yy < map.rows() && map(yy, xx);
        }
      }
      const auto off = [&](int xx, int yy) {
        return xx < 0 || yy < 0 || xx >= map.cols() || yy >= map.rows() || !map(yy, xx);
      };
      const bool touchesBackground = off(x + 1, y) || off(x - 1, y) || off(x, y + 1) || off(x, y - 1);
      if (n >= 2 && touchesBackground && ring_groups(map, x, y) == 1) ++count;
    }
  }
  return count;
}

}  // namespace coshrem::test

#endif  // COSHREM_TESTS_SUPPORT_HPP_
