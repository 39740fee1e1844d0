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

#include "coshrem/shearlets.hpp"

#include "fft.hpp"
#include "kernel.hpp"
#include "parallel.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>

namespace coshrem {
namespace {

constexpr double kPi = std::numbers::pi;

int signum(double v) { return (v > 0.0) - (v < 0.0); }

/// Mexican-hat spectrum (second derivative of a Gaussian), peak 2/e at u = sqrt(2).
double band_profile(double u) {
  const double u2 = u * u;
  return u2 * std::exp(-0.5 * u2);
}

/// Slope num/den with the denominator kept at least `guard` away from zero.
double guarded_slope(double num, double den, double guard) {
  return num / (den >= 0.0 ? std::max(den, guard) : std::min(den, -guard));
}

struct ScaleGeometry {
  double profileSigma;  // across-edge Gaussian sigma of the Mexican hat, pixels
  double windowWidth;   // Gaussian slope-window precision kappa
};

ScaleGeometry scale_geometry(const SystemParams& p, int j) {
  const double a = std::pow(2.0, -static_cast<double>(j) / p.scalesPerOctave);
  const double sigma = p.waveletSupport / 8.0 * a;
  const double along = p.gaussianSupport / 6.0 * std::pow(a, p.alpha);
  // Angular precision chosen so that, at the profile's peak frequency
  // sqrt(2)/sigma, the slope window has the width of an along-edge Gaussian of
  // standard deviation `along` pixels.
  return {sigma, along * std::numbers::sqrt2 / sigma};
}

std::vector<Orientation> make_orientations(int shearLevel) {
  const int span = 1 << shearLevel;
  std::vector<Orientation> out;
  for (int s = -span; s <= span; ++s) {
    const double t = static_cast<double>(s) / span;
    const bool diagonal = std::abs(s) == span;
    out.push_back({Cone::Horizontal, s, diagonal, 90.0 + std::atan(t) * 180.0 / kPi});
    if (!diagonal) {
      double angle = -std::atan(t) * 180.0 / kPi;
      if (angle < 0.0) angle += 180.0;
      out.push_back({Cone::Vertical, s, false, angle});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Orientation& a, const Orientation& b) { return a.nominalAngle < b.nominalAngle; });
  return out;
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

// --- binary cache helpers ---------------------------------------------------

constexpr char kMagic[16] = "COSHREM-SYSTEM";
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated shearlet cache file");
  return v;
}

}  // namespace

int SystemParams::scale_count() const {
  return static_cast<int>(std::lround(octaves * scalesPerOctave));
}

int SystemParams::orientation_count() const { return 2 * ((1 << (shearLevel + 1)) + 1) - 2; }

void SystemParams::validate() const {
  if (!(waveletSupport > 0.0) || !std::isfinite(waveletSupport)) {
    throw ParameterError("waveletSupport must be a positive number of pixels", "waveletSupport");
  }
  if (!(gaussianSupport > 0.0) || !std::isfinite(gaussianSupport)) {
    throw ParameterError("gaussianSupport must be a positive number of pixels", "gaussianSupport");
  }
  if (scalesPerOctave < 1) throw ParameterError("scalesPerOctave must be >= 1", "scalesPerOctave");
  if (!(octaves > 0.0) || !std::isfinite(octaves)) {
    throw ParameterError("octaves must be > 0", "octaves");
  }
  if (scale_count() < 1) {
    throw ParameterError("octaves * scalesPerOctave must round to at least one scale", "octaves");
  }
  if (shearLevel < 0 || shearLevel > 6) {
    throw ParameterError("shearLevel must be in [0, 6]", "shearLevel");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must be in [0, 1]", "alpha");
  const double finestSigma =
      waveletSupport / 8.0 * std::pow(2.0, -static_cast<double>(scale_count() - 1) / scalesPerOctave);
  if (std::numbers::sqrt2 / finestSigma >= 0.9 * kPi) {
    throw ParameterError(
        "finest scale is below the sampling limit; increase waveletSupport or reduce octaves",
        "waveletSupport");
  }
}

void ShearletSystem::init_frequency_grid() {
  omegaX_.resize(width_);
  omegaY_.resize(height_);
  for (int c = 0; c < width_; ++c) {
    const int f = 2 * c < width_ ? c : c - width_;
    omegaX_[c] = 2.0 * kPi * f / width_;
  }
  for (int r = 0; r < height_; ++r) {
    const int f = 2 * r < height_ ? r : r - height_;
    omegaY_[r] = -(2.0 * kPi * f / height_);  // rows grow downwards, y grows upwards
  }
}

int ShearletSystem::hilbert_sign(int orientation, Eigen::Index row, Eigen::Index col) const {
  const Orientation& o = orientations_.at(orientation);
  const double wx = omegaX_[col];
  const double wy = omegaY_[row];
  if (o.diagonal) return signum(wx + signum(o.shear) * wy);
  return o.cone == Cone::Horizontal ? signum(wx) : signum(wy);
}

Image<std::complex<double>> ShearletSystem::odd_spectrum(int filterIndex) const {
  const ShearletFilter& f = filters_.at(filterIndex);
  Image<std::complex<double>> out(height_, width_);
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      out(r, c) = {0.0, -hilbert_sign(f.orientation, r, c) * static_cast<double>(f.even(r, c))};
    }
  }
  return out;
}

std::size_t ShearletSystem::spectrum_bytes() const {
  return filters_.size() * static_cast<std::size_t>(width_) * height_ * sizeof(float);
}

std::string cache_key(const SystemParams& params, int width, int height) {
  const std::string canonical =
      "coshrem-system/2|waveletSupport=" + hex_double(params.waveletSupport) +
      "|gaussianSupport=" + hex_double(params.gaussianSupport) +
      "|scalesPerOctave=" + std::to_string(params.scalesPerOctave) +
      "|octaves=" + hex_double(params.octaves) + "|shearLevel=" + std::to_string(params.shearLevel) +
      "|alpha=" + hex_double(params.alpha) + "|width=" + std::to_string(width) +
      "|height=" + std::to_string(height);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

GrayImage calibration_step(int width, int height) {
  GrayImage step(height, width);
  const int jump = width / 2;
  for (int c = 0; c < width; ++c) {
    const double v = (c == 0 || c == jump) ? 0.5 : (c > jump ? 1.0 : 0.0);
    step.col(c).setConstant(v);
  }
  return step;
}

GrayImage calibration_line(int width, int height) {
  GrayImage line = GrayImage::Zero(height, width);
  line.col(width / 2).setConstant(1.0);
  return line;
}

ShearletSystem build_uncalibrated_system(const SystemParams& params, int width, int height) {
  params.validate();
  if (width < 8 || height < 8) {
    throw ParameterError("image must be at least 8x8 pixels for a shearlet transform", "size");
  }
  if (std::min(width, height) < params.waveletSupport / 2.0) {
    throw ParameterError("image too small for requested waveletSupport (" +
                             std::to_string(width) + "x" + std::to_string(height) + ")",
                         "waveletSupport");
  }

  ShearletSystem system;
  system.params_ = params;
  system.width_ = width;
  system.height_ = height;
  system.scaleCount_ = params.scale_count();
  system.orientations_ = make_orientations(params.shearLevel);
  system.cacheKey_ = cache_key(params, width, height);
  system.init_frequency_grid();
  system.scaleGain_.assign(system.scaleCount_, 1.0);
  system.ridgeGain_.assign(system.scaleCount_, 1.0);

  const int orientations = system.orientation_count();
  const int count = system.scaleCount_ * orientations;
  system.filters_.resize(count);

  const double guardX = 2.0 * kPi / width;
  const double guardY = 2.0 * kPi / height;
  const int span = 1 << params.shearLevel;

  detail::parallel_for(count, [&](int, int index) {
    const int j = index / orientations;
    const int k = index % orientations;
    const Orientation& o = system.orientations_[k];
    const ScaleGeometry g = scale_geometry(params, j);
    const double t = static_cast<double>(o.shear) / span;
    const double halfPrecision = 0.5 * g.windowWidth * g.windowWidth;

    auto horizontal = [&](double wx, double wy) {
      const double d = guarded_slope(wy, wx, guardX) - t;
      return band_profile(g.profileSigma * wx) * std::exp(-halfPrecision * d * d);
    };
    auto vertical = [&](double wx, double wy) {
      const double d = guarded_slope(wx, wy, guardY) - t;
      return band_profile(g.profileSigma * wy) * std::exp(-halfPrecision * d * d);
    };

    ShearletFilter& f = system.filters_[index];
    f.scale = j;
    f.orientation = k;
    f.even.resize(height, width);
    for (int r = 0; r < height; ++r) {
      const bool nyquistRow = 2 * r == height;
      const double wy = system.omegaY_[r];
      for (int c = 0; c < width; ++c) {
        const double wx = system.omegaX_[c];
        double v = 0.0;
        if (!nyquistRow && 2 * c != width) {
          if (o.diagonal) {
            v = std::abs(wy) <= std::abs(wx) ? horizontal(wx, wy) : vertical(wx, wy);
          } else {
            v = o.cone == Cone::Horizontal ? horizontal(wx, wy) : vertical(wx, wy);
          }
        }
        f.even(r, c) = static_cast<float>(v);
      }
    }
  });
  return system;
}

ShearletSystem calibrate_scales(ShearletSystem system) {
  const int width = system.width_;
  const int height = system.height_;
  const detail::Fft2d fft(height, width);
  const auto stepSpectrum = detail::image_spectrum(calibration_step(width, height), fft);
  const auto lineSpectrum = detail::image_spectrum(calibration_line(width, height), fft);

  int vertical = -1;  // horizontal-cone, unsheared orientation
  for (int k = 0; k < system.orientation_count(); ++k) {
    const Orientation& o = system.orientations_[k];
    if (o.cone == Cone::Horizontal && o.shear == 0) vertical = k;
  }

  std::vector<double> stepGain(system.scaleCount_), lineGain(system.scaleCount_);
  detail::parallel_for(system.scaleCount_, [&](int, int j) {
    Image<std::complex<double>> response(height, width);
    const int index = system.filter_index(j, vertical);
    detail::filter_response(system, index, 1.0, stepSpectrum, fft, response);
    const double stepPeak = response.imag().abs().maxCoeff();
    detail::filter_response(system, index, 1.0, lineSpectrum, fft, response);
    const double linePeak = response.real().abs().maxCoeff();
    if (!(stepPeak > 1e-12) || !(linePeak > 1e-12)) {
      throw ParameterError("degenerate filter at scale " + std::to_string(j) +
                               ": zero response to the calibration target",
                           "waveletSupport");
    }
    stepGain[j] = 1.0 / stepPeak;
    lineGain[j] = 1.0 / linePeak;
  });
  system.scaleGain_ = std::move(stepGain);
  system.ridgeGain_ = std::move(lineGain);
  return system;
}

ShearletSystem build_system(const SystemParams& params, int width, int height) {
  return calibrate_scales(build_uncalibrated_system(params, width, height));
}

void save_system(const ShearletSystem& system, const std::filesystem::path& file) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write shearlet cache '" + tmp.string() + "'");
    out.write(kMagic, sizeof kMagic);
    put(out, kCacheVersion);
    const SystemParams& p = system.params_;
    put(out, p.waveletSupport);
    put(out, p.gaussianSupport);
    put(out, static_cast<std::int32_t>(p.scalesPerOctave));
    put(out, p.octaves);
    put(out, static_cast<std::int32_t>(p.shearLevel));
    put(out, p.alpha);
    put(out, static_cast<std::int32_t>(system.width_));
    put(out, static_cast<std::int32_t>(system.height_));
    for (double g : system.scaleGain_) put(out, g);
    for (double g : system.ridgeGain_) put(out, g);
    for (const ShearletFilter& f : system.filters_) {
      out.write(reinterpret_cast<const char*>(f.even.data()),
                static_cast<std::streamsize>(f.even.size() * sizeof(float)));
    }
    if (!out) throw IoError("error writing shearlet cache '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, file);
}

ShearletSystem load_system(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open shearlet cache '" + file.string() + "'");
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IoError("'" + file.string() + "' is not a shearlet cache file");
  }
  if (get<std::uint32_t>(in) != kCacheVersion) {
    throw IoError("shearlet cache '" + file.string() + "' has an unsupported version");
  }
  ShearletSystem system;
  SystemParams& p = system.params_;
  p.waveletSupport = get<double>(in);
  p.gaussianSupport = get<double>(in);
  p.scalesPerOctave = get<std::int32_t>(in);
  p.octaves = get<double>(in);
  p.shearLevel = get<std::int32_t>(in);
  p.alpha = get<double>(in);
  system.width_ = get<std::int32_t>(in);
  system.height_ = get<std::int32_t>(in);
  p.validate();
  if (system.width_ < 8 || system.height_ < 8) throw IoError("corrupt shearlet cache dimensions");
  system.scaleCount_ = p.scale_count();
  system.orientations_ = make_orientations(p.shearLevel);
  system.cacheKey_ = cache_key(p, system.width_, system.height_);
  system.init_frequency_grid();
  system.scaleGain_.resize(system.scaleCount_);
  system.ridgeGain_.resize(system.scaleCount_);
  for (double& g : system.scaleGain_) g = get<double>(in);
  for (double& g : system.ridgeGain_) g = get<double>(in);
  const int count = system.scaleCount_ * system.orientation_count();
  system.filters_.resize(count);
  for (int i = 0; i < count; ++i) {
    ShearletFilter& f = system.filters_[i];
    f.scale = i / system.orientation_count();
    f.orientation = i % system.orientation_count();
    f.even.resize(system.height_, system.width_);
    in.read(reinterpret_cast<char*>(f.even.data()),
            static_cast<std::streamsize>(f.even.size() * sizeof(float)));
    if (!in) throw IoError("truncated shearlet cache file");
  }
  return system;
}

}  // namespace coshrem
