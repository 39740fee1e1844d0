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

#ifndef COSHREM_IMAGE_HPP_
#define COSHREM_IMAGE_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace coshrem {

/// Dense raster, indexed (row, column) = (y, x). Row-major so that the
/// memory layout matches the DFT and file layouts.
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Real intensities, nominal range [0,255], never clamped inside the pipeline.
using GrayImage = Image<double>;
using BinaryMap = Image<bool>;
using ByteImage = Image<std::uint8_t>;

/// Raised when a caller-supplied argument violates a documented precondition.
/// `field` names the offending parameter when there is one.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& message, std::string field = {})
      : std::invalid_argument(message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// File I/O failures (unreadable, unsupported format, unwritable).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RgbImage {
  ByteImage r, g, b;

  RgbImage() = default;
  RgbImage(Eigen::Index height, Eigen::Index width)
      : r(ByteImage::Zero(height, width)),
        g(ByteImage::Zero(height, width)),
        b(ByteImage::Zero(height, width)) {}

  Eigen::Index width() const { return r.cols(); }
  Eigen::Index height() const { return r.rows(); }
  Rgb at(Eigen::Index y, Eigen::Index x) const { return {r(y, x), g(y, x), b(y, x)}; }
  void set(Eigen::Index y, Eigen::Index x, Rgb c) {
    r(y, x) = c.r;
    g(y, x) = c.g;
    b(y, x) = c.b;
  }
};

/// Kind of structure a measure map responds to.
enum class MeasureKind { Edge, Ridge };

/// Per-pixel edge or ridge likelihood in [0,1].
struct MeasureMap {
  Image<double> values;
  MeasureKind kind = MeasureKind::Edge;
};

/// Tangent angle in degrees, [0,180), counter-clockwise from the +x axis with
/// y pointing up (row index decreasing). NaN where undefined.
struct OrientationMap {
  Image<double> degrees;
};

/// |d theta / ds| in degrees per pixel of arclength on traced curves; NaN
/// elsewhere. `skipped` lists curve pixels whose orientation was undefined.
struct CurvatureMap {
  Image<double> degreesPerPixel;
  std::vector<Pixel> skipped;
};

template <typename A, typename B>
void require_same_size(const Eigen::ArrayBase<A>& a, const Eigen::ArrayBase<B>& b,
                       const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ParameterError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.cols()) + "x" + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.cols()) + "x" + std::to_string(b.rows()) + ")");
  }
}

// ---------------------------------------------------------------------------
// File I/O

/// Reads an 8- or 16-bit grayscale PGM (P5) or PNG. Values are rescaled to
/// [0,255] by 255/maxval, so 16-bit data is divided by 257.
GrayImage load_gray(const std::filesystem::path& path);

/// Writes an 8-bit PGM or PNG chosen by extension; values are clamped to
/// [0,255] and rounded half up.
void save_gray(const GrayImage& image, const std::filesystem::path& path);

/// 16-bit big-endian PGM of values in [0,1] scaled to [0,65535].
void save_unit_pgm16(const Image<double>& values, const std::filesystem::path& path);

/// Binary map as an 8-bit PGM/PNG (0 or 255).
void save_binary(const BinaryMap& map, const std::filesystem::path& path);

/// 8-bit RGB PNG.
void save_rgb(const RgbImage& image, const std::filesystem::path& path);

/// In-memory PNG encoders used by the HTTP service.
std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_png(const ByteImage& image);

/// Decodes a PGM or PNG held in memory (same rules as load_gray).
GrayImage decode_gray(const std::vector<std::uint8_t>& bytes);

// ---------------------------------------------------------------------------
// Filtering shared by the corruption pipeline and the baseline detectors

/// Normalized sampled Gaussian truncated at 4 sigma; {1} for sigma == 0.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with half-sample symmetric (reflective) boundary.
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// Reflective index for a half-sample symmetric extension of [0, n).
inline Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n) {
  if (n == 1) return 0;
  const Eigen::Index period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

/// Mirror-pads by `border` pixels on every side (half-sample symmetric).
GrayImage pad_reflect(const GrayImage& image, int border);

// ---------------------------------------------------------------------------
// Rendering

inline constexpr Rgb kDarkRed{139, 0, 0};
inline constexpr Rgb kLightBlue{173, 216, 230};

/// Linear light-blue -> dark-red colour map for t in [0,1] (clamped).
Rgb ramp_color(double t);

/// Background is the base image brightened by 1.5 (clamped); detections are
/// painted dark red.
RgbImage render_overlay(const GrayImage& base, const BinaryMap& detection);
/// Measure values alpha-blend dark red over the brightened background.
RgbImage render_overlay(const GrayImage& base, const MeasureMap& detection);

/// Orientation as deviation from horizontal over [0,90] degrees: 0 light blue,
/// 90 dark red. Undefined pixels are white.
RgbImage render_anglemap(const OrientationMap& orientation);
/// Curvature over [0, range] degrees/pixel, saturating at range.
RgbImage render_anglemap(const CurvatureMap& curvature, double rangeDegrees);

/// Grayscale rendering of a [0,1] map (measure layers).
ByteImage to_bytes_unit(const Image<double>& values);
ByteImage to_bytes(const BinaryMap& map);

}  // namespace coshrem

#endif  // COSHREM_IMAGE_HPP_
