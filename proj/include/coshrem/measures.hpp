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

#ifndef COSHREM_MEASURES_HPP_
#define COSHREM_MEASURES_HPP_

#include "coshrem/xform.hpp"

#include <string>
#include <vector>

namespace coshrem {

enum class Polarity { Positive, Negative, Both };

Polarity parse_polarity(const std::string& name);
std::string to_string(Polarity polarity);

/// The four numbers configuring a detection on top of a shearlet system.
struct DetectionParams {
  /// Coefficient floor (intensity units): the measure is 0 wherever the
  /// largest primary coefficient across scales is below it.
  double minContrast = 100.0;
  /// Denominator stabilizer as a multiple of minContrast.
  double epsilonFactor = 0.5;
  /// Scales whose primary magnitudes are summed to choose the pivot
  /// orientation. Empty selects every scale.
  std::vector<int> pivotScales;
  /// Edges: sign of the summed odd coefficient along the pivot normal.
  /// Ridges: Positive keeps bright ridges, Negative dark ones.
  Polarity polarity = Polarity::Both;

  double epsilon() const { return epsilonFactor * minContrast; }
  /// Throws ParameterError; scaleCount bounds pivotScales.
  void validate(int scaleCount) const;
};

/// Winning orientation per pixel with its objective and the objectives of the
/// two cyclically adjacent orientations (for sub-shear refinement).
struct PivotMap {
  Image<int> orientation;
  Image<double> objective;
  Image<double> previous;
  Image<double> next;
};

struct MeasureResult {
  MeasureMap measure;
  PivotMap pivot;
};

/// Edge measure from odd/even coefficients across all scales at the pivot
/// orientation (pivot: largest summed |odd| over pivotScales).
MeasureResult edge_measure(const CoefficientVolume& volume, const ShearletSystem& system,
                           const DetectionParams& params);
MeasureResult edge_measure(const Analyzer& analyzer, const DetectionParams& params);

/// Ridge measure: even and odd roles exchanged. Coefficients of scale j are
/// rescaled by ridge_gain/scale_gain so that a unit line gives even response 1
/// at every scale.
MeasureResult ridge_measure(const CoefficientVolume& volume, const ShearletSystem& system,
                            const DetectionParams& params);
MeasureResult ridge_measure(const Analyzer& analyzer, const DetectionParams& params);

/// Tangent orientation where measure > 0: pivot nominal angle moved to the
/// vertex of the parabola through the pivot and its two neighbours.
OrientationMap orientation_map(const MeasureMap& measure, const PivotMap& pivot,
                               const ShearletSystem& system);

/// Wraps an orientation difference in degrees into (-90, 90].
double wrap180(double degrees);

/// Central-difference curvature along the chains of a thinned skeleton.
CurvatureMap curvature_along(const BinaryMap& skeleton, const OrientationMap& orientation);

}  // namespace coshrem

#endif  // COSHREM_MEASURES_HPP_
