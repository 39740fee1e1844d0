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

#include "fft.hpp"
#include "kernel.hpp"
#include "parallel.hpp"

#include <cmath>

namespace coshrem {

struct Analyzer::Impl {
  detail::Fft2d fft;
  ComplexPlane spectrum;
};

Analyzer::Analyzer(const ShearletSystem& system, const GrayImage& image) : system_(system) {
  if (image.cols() != system.width() || image.rows() != system.height()) {
    throw ParameterError("image is " + std::to_string(image.cols()) + "x" +
                             std::to_string(image.rows()) + " but the shearlet system was built for " +
                             std::to_string(system.width()) + "x" + std::to_string(system.height()),
                         "image");
  }
  if (!image.isFinite().all()) throw ParameterError("image contains non-finite values", "image");
  detail::Fft2d fft(system.height(), system.width());
  ComplexPlane spectrum = detail::image_spectrum(image, fft);
  impl_ = std::make_unique<Impl>(Impl{fft, std::move(spectrum)});
}

Analyzer::~Analyzer() = default;
Analyzer::Analyzer(Analyzer&&) noexcept = default;

void Analyzer::response(int index, ComplexPlane& out, double extraGain) const {
  const int scale = system_.filter(index).scale;
  out.resize(system_.height(), system_.width());
  detail::filter_response(system_, index, system_.scale_gain()[scale] * extraGain, impl_->spectrum,
                          impl_->fft, out);
}

ComplexPlane Analyzer::response(int index, double extraGain) const {
  ComplexPlane out;
  response(index, out, extraGain);
  return out;
}

CoefficientVolume analyze(const ShearletSystem& system, const GrayImage& image) {
  const Analyzer analyzer(system, image);
  CoefficientVolume volume;
  volume.width = system.width();
  volume.height = system.height();
  volume.systemKey = system.cache_key();
  volume.planes.resize(system.filter_count());
  detail::parallel_for(system.filter_count(),
                       [&](int, int i) { analyzer.response(i, volume.planes[i]); });
  return volume;
}

std::vector<std::pair<int, std::complex<double>>> coefficients_at(const CoefficientVolume& volume,
                                                                   int x, int y) {
  if (x < 0 || y < 0 || x >= volume.width || y >= volume.height) {
    throw ParameterError("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                             ") outside the coefficient volume",
                         "pixel");
  }
  std::vector<std::pair<int, std::complex<double>>> out;
  out.reserve(volume.planes.size());
  for (std::size_t i = 0; i < volume.planes.size(); ++i) {
    out.emplace_back(static_cast<int>(i), volume.planes[i](y, x));
  }
  return out;
}

}  // namespace coshrem
