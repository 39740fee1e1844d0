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

#ifndef COSHREM_METRICS_HPP_
#define COSHREM_METRICS_HPP_

#include "coshrem/image.hpp"

namespace coshrem {

/// Exact Euclidean distance from every pixel to the nearest on-pixel of
/// `reference` (separable lower-envelope algorithm). Throws ParameterError on
/// an empty reference.
Image<double> distance_transform(const BinaryMap& reference);

/// Pratt's figure of merit of `detected` against `truth` with scaling
/// constant a. Both empty gives 1, detected empty gives 0.
double pfom(const BinaryMap& detected, const BinaryMap& truth, double a = 1.0 / 9.0);

}  // namespace coshrem

#endif  // COSHREM_METRICS_HPP_
