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

#include "kernel.hpp"

#include <cmath>

namespace coshrem::detail {

Image<std::complex<double>> image_spectrum(const GrayImage& image, const Fft2d& fft) {
  Image<std::complex<double>> spectrum = image.cast<std::complex<double>>();
  fft.forward(spectrum.data());
  return spectrum;
}

void filter_response(const ShearletSystem& system, int filterIndex, double gain,
                     const Image<std::complex<double>>& spectrum, const Fft2d& fft,
                     Image<std::complex<double>>& out) {
  const ShearletFilter& f = system.filter(filterIndex);
  const Orientation& o = system.orientation(f.orientation);
  const Eigen::Index rows = spectrum.rows();
  const Eigen::Index cols = spectrum.cols();
  const double scale = gain / static_cast<double>(rows * cols);
  const int shearSign = (o.shear > 0) - (o.shear < 0);

  for (Eigen::Index r = 0; r < rows; ++r) {
    const double wy = system.omega_y(r);
    const int rowSign = (wy > 0.0) - (wy < 0.0);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const float e = f.even(r, c);
      if (e == 0.0f) {
        out(r, c) = 0.0;
        continue;
      }
      const double wx = system.omega_x(c);
      const int colSign = (wx > 0.0) - (wx < 0.0);
      int sign;
      if (o.diagonal) {
        const double axis = wx + shearSign * wy;
        sign = (axis > 0.0) - (axis < 0.0);
      } else {
        sign = o.cone == Cone::Horizontal ? colSign : rowSign;
      }
      out(r, c) = spectrum(r, c) * (scale * e * (1 - sign));
    }
  }
  fft.inverse(out.data());
}

}  // namespace coshrem::detail
