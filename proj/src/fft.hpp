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

#ifndef COSHREM_SRC_FFT_HPP_
#define COSHREM_SRC_FFT_HPP_

#include <complex>

namespace coshrem::detail {

/// In-place 2D complex DFT of a row-major rows x cols buffer. Plans are
/// created once per size (FFTW_ESTIMATE, so results are reproducible run to
/// run) and shared; executing them is thread-safe. The inverse is
/// unnormalised.
class Fft2d {
 public:
  Fft2d(int rows, int cols);

  void forward(std::complex<double>* data) const;
  void inverse(std::complex<double>* data) const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  void* forward_;
  void* inverse_;
};

}  // namespace coshrem::detail

#endif  // COSHREM_SRC_FFT_HPP_
