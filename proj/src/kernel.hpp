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

#ifndef COSHREM_SRC_KERNEL_HPP_
#define COSHREM_SRC_KERNEL_HPP_

#include "coshrem/shearlets.hpp"
#include "fft.hpp"

#include <complex>

namespace coshrem::detail {

/// DFT of a real image laid out for multiplication with filter spectra.
Image<std::complex<double>> image_spectrum(const GrayImage& image, const Fft2d& fft);

/// Coefficients of one filter: out = IDFT(spectrum * gain * even * (1 - sign)).
///
/// Real part is the even-symmetric coefficient <f, psi_e(. - y)>, imaginary
/// part the odd-symmetric coefficient <f, psi_o(. - y)>. `out` must already
/// have the image dimensions.
void filter_response(const ShearletSystem& system, int filterIndex, double gain,
                     const Image<std::complex<double>>& spectrum, const Fft2d& fft,
                     Image<std::complex<double>>& out);

}  // namespace coshrem::detail

#endif  // COSHREM_SRC_KERNEL_HPP_
