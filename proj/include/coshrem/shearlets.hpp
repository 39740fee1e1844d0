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

#ifndef COSHREM_SHEARLETS_HPP_
#define COSHREM_SHEARLETS_HPP_

#include "coshrem/image.hpp"

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace coshrem {

/// The six numbers that define a complex shearlet system.
///
/// Scale j in [0, J) dilates the generator by a_j = 2^(-j / scalesPerOctave):
/// j = 0 is the coarsest scale, where the Mexican-hat profile spans
/// `waveletSupport` pixels across the edge (+-4 sigma) and the Gaussian window
/// spans `gaussianSupport` pixels along it (+-3 sigma). Across-edge extent
/// shrinks like a_j, along-edge extent like a_j^alpha.
struct SystemParams {
  double waveletSupport = 80.0;
  double gaussianSupport = 40.0;
  int scalesPerOctave = 2;
  double octaves = 3.5;
  int shearLevel = 3;
  double alpha = 0.5;

  /// J = round(octaves * scalesPerOctave).
  int scale_count() const;
  /// 2 * (2^(L+1) + 1) - 2 distinct orientations per scale.
  int orientation_count() const;
  /// Throws ParameterError naming the offending field.
  void validate() const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

enum class Cone { Horizontal, Vertical };

/// One orientation of the bank, shared by every scale.
struct Orientation {
  Cone cone = Cone::Horizontal;
  int shear = 0;              ///< integer in [-2^L, 2^L]
  bool diagonal = false;      ///< |shear| == 2^L: glued across both cones
  double nominalAngle = 0.0;  ///< tangent direction of maximal response, [0,180)
};

/// Frequency-domain filter, DFT layout (row = vertical frequency index, col =
/// horizontal frequency index, zero frequency at (0,0)). Only the real, even,
/// nonnegative spectrum is stored; the odd partner is -i * sign * even.
struct ShearletFilter {
  Image<float> even;
  int scale = 0;
  int orientation = 0;
};

/// Complete, calibrated, immutable filter bank for one image size.
class ShearletSystem {
 public:
  const SystemParams& params() const { return params_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int scale_count() const { return scaleCount_; }
  int orientation_count() const { return static_cast<int>(orientations_.size()); }
  int filter_count() const { return static_cast<int>(filters_.size()); }

  /// Filter index = scale * orientation_count() + orientation.
  int filter_index(int scale, int orientation) const {
    return scale * orientation_count() + orientation;
  }
  const ShearletFilter& filter(int index) const { return filters_.at(index); }
  const ShearletFilter& filter(int scale, int orientation) const {
    return filters_.at(filter_index(scale, orientation));
  }
  std::span<const ShearletFilter> filters() const { return filters_; }

  /// Orientations sorted by ascending nominal angle.
  std::span<const Orientation> orientations() const { return orientations_; }
  const Orientation& orientation(int k) const { return orientations_.at(k); }

  /// Per-scale gains making the odd step response exactly 1 (edges).
  const std::vector<double>& scale_gain() const { return scaleGain_; }
  /// Per-scale gains making the even response to a unit line exactly 1
  /// (ridges).
  const std::vector<double>& ridge_gain() const { return ridgeGain_; }

  const std::string& cache_key() const { return cacheKey_; }

  /// Angular frequency of a DFT column / row index (rows measured with y up).
  double omega_x(Eigen::Index col) const { return omegaX_[col]; }
  double omega_y(Eigen::Index row) const { return omegaY_[row]; }

  /// sign(xi_axis) of the Hilbert pairing for a filter orientation at a
  /// frequency sample: -1, 0 or +1.
  int hilbert_sign(int orientation, Eigen::Index row, Eigen::Index col) const;

  /// Complex odd partner spectrum -i * sign * even (for inspection/tests).
  Image<std::complex<double>> odd_spectrum(int filterIndex) const;

  /// Bytes held by the filter spectra.
  std::size_t spectrum_bytes() const;

 private:
  friend ShearletSystem build_uncalibrated_system(const SystemParams&, int, int);
  friend ShearletSystem calibrate_scales(ShearletSystem);
  friend ShearletSystem load_system(const std::filesystem::path&);
  friend void save_system(const ShearletSystem&, const std::filesystem::path&);

  ShearletSystem() = default;
  void init_frequency_grid();

  SystemParams params_;
  int width_ = 0;
  int height_ = 0;
  int scaleCount_ = 0;
  std::vector<Orientation> orientations_;
  std::vector<ShearletFilter> filters_;
  std::vector<double> scaleGain_;
  std::vector<double> ridgeGain_;
  std::vector<double> omegaX_;
  std::vector<double> omegaY_;
  std::string cacheKey_;
};

/// Builds and calibrates the system for a width x height image.
ShearletSystem build_system(const SystemParams& params, int width, int height);

/// Filters with unit gains (calibration not yet applied).
ShearletSystem build_uncalibrated_system(const SystemParams& params, int width, int height);

/// Recomputes the per-scale gains from the raw spectra. Idempotent.
ShearletSystem calibrate_scales(ShearletSystem system);

/// SHA-256 hex digest of the canonical (params, width, height) encoding.
std::string cache_key(const SystemParams& params, int width, int height);

/// Synthetic calibration targets, constant along y. The step rises 0 -> 1 in
/// +x with half-value pixels at the two jump columns (0 and width/2), so an
/// even filter centred on a jump column sees an antisymmetric signal. The line
/// is a unit impulse column at width/2.
GrayImage calibration_step(int width, int height);
GrayImage calibration_line(int width, int height);

/// Versioned binary cache file. load_system throws IoError on a version or
/// integrity mismatch.
void save_system(const ShearletSystem& system, const std::filesystem::path& file);
ShearletSystem load_system(const std::filesystem::path& file);

}  // namespace coshrem

#endif  // COSHREM_SHEARLETS_HPP_
