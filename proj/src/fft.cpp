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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace coshrem::detail {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW's planner is not re-entrant; every plan is created under this lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(int rows, int cols) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find({rows, cols});
  if (it != cache.end()) return it->second;

  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair pair{
      fftw_plan_dft_2d(rows, cols, scratch, scratch, FFTW_FORWARD, flags),
      fftw_plan_dft_2d(rows, cols, scratch, scratch, FFTW_BACKWARD, flags),
  };
  fftw_free(scratch);
  cache.emplace(std::make_pair(rows, cols), pair);
  return pair;
}

}  // namespace

Fft2d::Fft2d(int rows, int cols) : rows_(rows), cols_(cols) {
  const PlanPair pair = plans_for(rows, cols);
  forward_ = pair.forward;
  inverse_ = pair.inverse;
}

void Fft2d::forward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

void Fft2d::inverse(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(inverse_), p, p);
}

}  // namespace coshrem::detail
