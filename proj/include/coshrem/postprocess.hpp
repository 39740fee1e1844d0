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

#ifndef COSHREM_POSTPROCESS_HPP_
#define COSHREM_POSTPROCESS_HPP_

#include "coshrem/image.hpp"

#include <vector>

namespace coshrem {

/// Ordered 8-connected pixel path. A closed chain lists every pixel once; its
/// last pixel is adjacent to the first.
struct CurveChain {
  std::vector<Pixel> pixels;
  bool closed = false;
};

/// Two-level hysteresis on absolute values: pixels >= high seed, pixels >= low
/// 8-connected to a seed are kept.
BinaryMap hysteresis(const Image<double>& values, double low, double high);

/// Hysteresis with thresholds given as fractions of the measure's maximum
/// possible value (1). Throws ParameterError when low > high or low < 0.
BinaryMap hysteresis_threshold(const MeasureMap& measure, double low, double high);

/// Guo-Hall thinning followed by removal of staircase and blunt-tip pixels,
/// giving a one-pixel-wide 8-connected skeleton with the topology of the
/// input. Branch ends are then re-grown along their direction inside the
/// input, so a bar keeps its length.
BinaryMap thin(const BinaryMap& binary);

/// Number of on 8-neighbours of (x, y).
int neighbour_count(const BinaryMap& map, int x, int y);

/// Splits a thinned skeleton into chains. Pixels with three or more neighbours
/// are junctions; each junction pixel is appended to one adjacent chain end
/// (or forms its own chain), so the chains partition the skeleton. Throws
/// ParameterError when a pixel has all eight neighbours on (not thinned).
std::vector<CurveChain> trace_curves(const BinaryMap& skeleton);

}  // namespace coshrem

#endif  // COSHREM_POSTPROCESS_HPP_
