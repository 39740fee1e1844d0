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

#ifndef COSHREM_XFORM_HPP_
#define COSHREM_XFORM_HPP_

#include "coshrem/shearlets.hpp"

#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace coshrem {

using ComplexPlane = Image<std::complex<double>>;

/// Calibrated coefficients of one image: plane i holds filter i, real part
/// even-symmetric and imaginary part odd-symmetric coefficients.
struct CoefficientVolume {
  int width = 0;
  int height = 0;
  std::vector<ComplexPlane> planes;
  std::string systemKey;
};

/// Full transform (circular convolution). Needs filter_count() planes of
/// complex doubles, so prefer Analyzer when only a few planes are live at once.
CoefficientVolume analyze(const ShearletSystem& system, const GrayImage& image);

/// All coefficients at (x, y) in filter-index order.
std::vector<std::pair<int, std::complex<double>>> coefficients_at(const CoefficientVolume& volume,
                                                                   int x, int y);

/// Holds the spectrum of one image and evaluates calibrated filter responses
/// on demand. Thread-safe for concurrent response() calls.
class Analyzer {
 public:
  Analyzer(const ShearletSystem& system, const GrayImage& image);
  ~Analyzer();
  Analyzer(Analyzer&&) noexcept;

  const ShearletSystem& system() const { return system_; }

  /// Coefficients of filter `index` scaled by scale_gain()[scale] * extraGain.
  void response(int index, ComplexPlane& out, double extraGain = 1.0) const;
  ComplexPlane response(int index, double extraGain = 1.0) const;

 private:
  struct Impl;
  const ShearletSystem& system_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace coshrem

#endif  // COSHREM_XFORM_HPP_
