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

#ifndef COSHREM_PHANTOMS_HPP_
#define COSHREM_PHANTOMS_HPP_

#include "coshrem/image.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace coshrem {

/// Geometry is in pixel coordinates: pixel (x, y) is centred on the integer
/// point (x, y), y grows downwards. Angles of arcs are in degrees,
/// counter-clockwise as seen on screen (y up).
struct Circle {
  Eigen::Vector2d center;
  double radius = 0.0;
};
struct Segment {
  Eigen::Vector2d p0, p1;
};
struct Arc {
  Eigen::Vector2d center;
  double radius = 0.0;
  double startDegrees = 0.0;
  double endDegrees = 0.0;  ///< end > start
};
struct Polyline {
  std::vector<Eigen::Vector2d> points;
  bool closed = false;
};
using Primitive = std::variant<Circle, Segment, Arc, Polyline>;

enum class PhantomMode { Edge, Ridge };

/// Edge mode fills the union of the closed primitives (circles, closed
/// polylines) with `foreground` over `background`; ridge mode strokes every
/// primitive with width `strokeWidth`.
struct PhantomSpec {
  int width = 512;
  int height = 512;
  PhantomMode mode = PhantomMode::Edge;
  double foreground = 200.0;
  double background = 20.0;
  double strokeWidth = 3.0;
  std::vector<Primitive> primitives;

  void validate() const;
};

/// Analytic ground truth rasterised to a thinned curve map. Tangent angles
/// follow the OrientationMap convention; curvature is in degrees per pixel
/// and NaN at corners. Both are NaN off the curve.
struct GroundTruth {
  BinaryMap curve;
  Image<double> tangentDegrees;
  Image<double> curvature;
};

struct Phantom {
  GrayImage image;
  GroundTruth truth;
};

Phantom generate(const PhantomSpec& spec);

/// Standard 512x512 phantoms: two overlapping discs, a rectangle and a
/// sinusoidal band; filled (edge) or stroked 3 px wide (ridge).
PhantomSpec edge512();
PhantomSpec ridge512();
/// A straight step (edge) or line (ridge) of the given tangent angle through
/// the image centre.
PhantomSpec line_phantom(int size, double tangentDegrees, PhantomMode mode);

/// JSON (schema "coshrem.phantom/1"). parse throws ParameterError.
PhantomSpec parse_phantom_spec(const std::string& json);
std::string to_json(const PhantomSpec& spec);
PhantomSpec load_phantom_spec(const std::filesystem::path& path);
/// Sidecar JSON (schema "coshrem.groundtruth/1") with tangent and curvature
/// lists for every curve pixel.
std::string to_json(const GroundTruth& truth);

/// Gaussian blur (4 sigma, reflective) then additive N(0, sigmaNoise^2)
/// noise from std::mt19937_64 seeded with `seed`. No clamping.
GrayImage corrupt(const GrayImage& image, double sigmaBlur, double sigmaNoise, std::uint64_t seed);

/// v' = 10 * Poisson(v / 10) per pixel, seeded. Negative inputs are floored
/// to 0 first; their count is written to `floored` when given.
GrayImage poissonize(const GrayImage& image, std::uint64_t seed, long* floored = nullptr);

inline constexpr std::array<double, 4> kBlurLevels = {0.0, 0.5, 1.0, 1.5};
inline constexpr std::array<double, 5> kNoiseLevels = {0.0, 20.0, 50.0, 80.0, 100.0};

/// Seed of grid cell `index` derived from the master seed.
inline std::uint64_t cell_seed(std::uint64_t master, std::uint64_t index) { return master ^ index; }

}  // namespace coshrem

#endif  // COSHREM_PHANTOMS_HPP_
