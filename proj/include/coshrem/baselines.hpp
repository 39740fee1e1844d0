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

#ifndef COSHREM_BASELINES_HPP_
#define COSHREM_BASELINES_HPP_

#include "coshrem/image.hpp"

#include <utility>
#include <vector>

namespace coshrem {

/// Explicit mode: hysteresis thresholds at the lowFrac / highFrac quantiles
/// of the nonzero gradient magnitudes. Automatic mode: sigma = sqrt(2),
/// high = Otsu threshold of the magnitudes, low = 0.4 * high.
struct CannyParams {
  double sigma = 2.0;
  double lowFrac = 0.7;
  double highFrac = 0.9;
  bool automatic = false;

  static CannyParams defaults();
  void validate() const;
};

BinaryMap canny(const GrayImage& image, const CannyParams& params);

/// 3x3 Sobel magnitude above threshold * max (strictly), optionally thinned.
BinaryMap sobel(const GrayImage& image, double threshold, bool thinned = true);

/// Sobel gradient magnitude with reflective borders.
Image<double> sobel_magnitude(const GrayImage& image);

/// Otsu threshold of the values (256-bin histogram over [0, max]).
double otsu_threshold(const Image<double>& values);

/// Candidate explicit parameters tried by tune_canny.
std::vector<CannyParams> canny_candidates();

/// Minimax tuning: the candidate whose worst PFOM over the (image, truth)
/// cases is largest. Returns the parameters and that worst score.
std::pair<CannyParams, double> tune_canny(const std::vector<std::pair<GrayImage, BinaryMap>>& cases,
                                          const std::vector<CannyParams>& candidates);

}  // namespace coshrem

#endif  // COSHREM_BASELINES_HPP_
