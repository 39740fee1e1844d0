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

#include "coshrem/measures.hpp"

#include "coshrem/postprocess.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace coshrem {
namespace {

struct Planes {
  std::vector<Image<double>> objective;  // per orientation
  std::vector<Image<double>> value;      // per orientation
};

/// Evaluates objective and measure at every orientation. `fetch(worker, j, k)`
/// returns the calibrated coefficient plane of scale j, orientation k.
template <typename Fetch>
MeasureResult compute(const ShearletSystem& system, const DetectionParams& params, MeasureKind kind,
                      Fetch&& fetch) {
  const int scales = system.scale_count();
  const int orientations = system.orientation_count();
  params.validate(scales);
  const int rows = system.height(), cols = system.width();

  std::vector<int> pivotScales = params.pivotScales;
  if (pivotScales.empty()) {
    for (int j = 0; j < scales; ++j) pivotScales.push_back(j);
  }
  std::vector<bool> inPivot(scales, false);
  for (int j : pivotScales) inPivot[j] = true;

  std::vector<double> factor(scales, 1.0);
  if (kind == MeasureKind::Ridge) {
    for (int j = 0; j < scales; ++j) factor[j] = system.ridge_gain()[j] / system.scale_gain()[j];
  }
  const bool edge = kind == MeasureKind::Edge;
  const double epsilon = params.epsilon();
  const double floor = params.minContrast;

  Planes planes;
  planes.objective.resize(orientations);
  planes.value.resize(orientations);
  detail::parallel_for(orientations, [&](int worker, int k) {
    Image<double> objective = Image<double>::Zero(rows, cols);
    Image<double> sumPrimary = Image<double>::Zero(rows, cols);
    Image<double> sumOther = Image<double>::Zero(rows, cols);
    Image<double> maxPrimary = Image<double>::Zero(rows, cols);
    for (int j = 0; j < scales; ++j) {
      const ComplexPlane& c = fetch(worker, j, k);
      const double f = factor[j];
      for (int y = 0; y < rows; ++y) {
        for (int x = 0; x < cols; ++x) {
          const double p = f * (edge ? c(y, x).imag() : c(y, x).real());
          const double q = f * (edge ? c(y, x).real() : c(y, x).imag());
          const double ap = std::abs(p);
          if (inPivot[j]) objective(y, x) += ap;
          sumPrimary(y, x) += p;
          sumOther(y, x) += std::abs(q);
          maxPrimary(y, x) = std::max(maxPrimary(y, x), ap);
        }
      }
    }
    Image<double> value(rows, cols);
    for (int y = 0; y < rows; ++y) {
      for (int x = 0; x < cols; ++x) {
        const double s = sumPrimary(y, x);
        double v = 0.0;
        if (maxPrimary(y, x) >= floor &&
            !(params.polarity == Polarity::Positive && s < 0.0) &&
            !(params.polarity == Polarity::Negative && s > 0.0)) {
          v = (std::abs(s) - sumOther(y, x)) / (scales * maxPrimary(y, x) + epsilon);
          v = std::clamp(v, 0.0, 1.0);
        }
        value(y, x) = v;
      }
    }
    planes.objective[k] = std::move(objective);
    planes.value[k] = std::move(value);
  });

  MeasureResult result;
  result.measure.kind = kind;
  result.measure.values.resize(rows, cols);
  PivotMap& pivot = result.pivot;
  pivot.orientation.resize(rows, cols);
  pivot.objective.resize(rows, cols);
  pivot.previous.resize(rows, cols);
  pivot.next.resize(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      int best = 0;
      double bestObjective = planes.objective[0](y, x);
      for (int k = 1; k < orientations; ++k) {
        if (planes.objective[k](y, x) > bestObjective) {
          bestObjective = planes.objective[k](y, x);
          best = k;
        }
      }
      result.measure.values(y, x) = planes.value[best](y, x);
      pivot.orientation(y, x) = best;
      pivot.objective(y, x) = bestObjective;
      pivot.previous(y, x) = planes.objective[(best + orientations - 1) % orientations](y, x);
      pivot.next(y, x) = planes.objective[(best + 1) % orientations](y, x);
    }
  }
  return result;
}

void require_match(const CoefficientVolume& volume, const ShearletSystem& system) {
  if (volume.systemKey != system.cache_key() || volume.width != system.width() ||
      volume.height != system.height() ||
      static_cast<int>(volume.planes.size()) != system.filter_count()) {
    throw ParameterError("coefficient volume was not produced by this shearlet system", "volume");
  }
}

MeasureResult from_volume(const CoefficientVolume& volume, const ShearletSystem& system,
                          const DetectionParams& params, MeasureKind kind) {
  require_match(volume, system);
  return compute(system, params, kind, [&](int, int j, int k) -> const ComplexPlane& {
    return volume.planes[system.filter_index(j, k)];
  });
}

MeasureResult from_analyzer(const Analyzer& analyzer, const DetectionParams& params,
                            MeasureKind kind) {
  const ShearletSystem& system = analyzer.system();
  std::vector<ComplexPlane> scratch(detail::worker_count(system.orientation_count()));
  return compute(system, params, kind, [&](int worker, int j, int k) -> const ComplexPlane& {
    analyzer.response(system.filter_index(j, k), scratch[worker]);
    return scratch[worker];
  });
}

}  // namespace

Polarity parse_polarity(const std::string& name) {
  if (name == "positive") return Polarity::Positive;
  if (name == "negative") return Polarity::Negative;
  if (name == "both") return Polarity::Both;
  throw ParameterError("polarity must be positive, negative or both (got '" + name + "')",
                       "polarity");
}

std::string to_string(Polarity polarity) {
  switch (polarity) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Both: return "both";
  }
  return "both";
}

void DetectionParams::validate(int scaleCount) const {
  if (!(minContrast > 0.0) || !std::isfinite(minContrast)) {
    throw ParameterError("minContrast must be > 0", "minContrast");
  }
  if (!(epsilonFactor > 0.0) || !std::isfinite(epsilonFactor)) {
    throw ParameterError("epsilonFactor must be > 0", "epsilonFactor");
  }
  for (int j : pivotScales) {
    if (j < 0 || j >= scaleCount) {
      throw ParameterError("pivot scale " + std::to_string(j) + " outside [0, " +
                               std::to_string(scaleCount) + ")",
                           "pivotScales");
    }
  }
}

MeasureResult edge_measure(const CoefficientVolume& volume, const ShearletSystem& system,
                           const DetectionParams& params) {
  return from_volume(volume, system, params, MeasureKind::Edge);
}

MeasureResult edge_measure(const Analyzer& analyzer, const DetectionParams& params) {
  return from_analyzer(analyzer, params, MeasureKind::Edge);
}

MeasureResult ridge_measure(const CoefficientVolume& volume, const ShearletSystem& system,
                            const DetectionParams& params) {
  return from_volume(volume, system, params, MeasureKind::Ridge);
}

MeasureResult ridge_measure(const Analyzer& analyzer, const DetectionParams& params) {
  return from_analyzer(analyzer, params, MeasureKind::Ridge);
}

double wrap180(double degrees) {
  double d = std::fmod(degrees, 180.0);
  if (d <= -90.0) d += 180.0;
  if (d > 90.0) d -= 180.0;
  return d;
}

OrientationMap orientation_map(const MeasureMap& measure, const PivotMap& pivot,
                               const ShearletSystem& system) {
  require_same_size(measure.values, pivot.orientation, "orientation_map");
  const int n = system.orientation_count();
  OrientationMap out;
  out.degrees = Image<double>::Constant(measure.values.rows(), measure.values.cols(),
                                        std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index y = 0; y < measure.values.rows(); ++y) {
    for (Eigen::Index x = 0; x < measure.values.cols(); ++x) {
      if (!(measure.values(y, x) > 0.0)) continue;
      const int k = pivot.orientation(y, x);
      const double t1 = system.orientation(k).nominalAngle;
      double t0 = system.orientation((k + n - 1) % n).nominalAngle;
      double t2 = system.orientation((k + 1) % n).nominalAngle;
      if (t0 > t1) t0 -= 180.0;
      if (t2 < t1) t2 += 180.0;
      const double f0 = pivot.previous(y, x), f1 = pivot.objective(y, x), f2 = pivot.next(y, x);
      // Vertex of the parabola through (t0,f0), (t1,f1), (t2,f2).
      const double a = (t1 - t0) * (f1 - f2);
      const double b = (t1 - t2) * (f1 - f0);
      const double denominator = a - b;
      double angle = t1;
      if (std::abs(denominator) > 1e-12 * (std::abs(a) + std::abs(b))) {
        angle = t1 - 0.5 * ((t1 - t0) * a - (t1 - t2) * b) / denominator;
        angle = std::clamp(angle, t0, t2);
      }
      angle = std::fmod(angle, 180.0);
      if (angle < 0.0) angle += 180.0;
      out.degrees(y, x) = angle;
    }
  }
  return out;
}

CurvatureMap curvature_along(const BinaryMap& skeleton, const OrientationMap& orientation) {
  require_same_size(skeleton, orientation.degrees, "curvature_along");
  CurvatureMap out;
  out.degreesPerPixel = Image<double>::Constant(skeleton.rows(), skeleton.cols(),
                                                std::numeric_limits<double>::quiet_NaN());
  auto theta = [&](const Pixel& p) { return orientation.degrees(p.y, p.x); };
  auto step = [](const Pixel& a, const Pixel& b) {
    return (a.x != b.x && a.y != b.y) ? std::numbers::sqrt2 : 1.0;
  };
  for (const CurveChain& chain : trace_curves(skeleton)) {
    const auto& px = chain.pixels;
    const int n = static_cast<int>(px.size());
    for (const Pixel& p : px) {
      if (std::isnan(theta(p))) out.skipped.push_back(p);
    }
    for (int i = 0; i < n; ++i) {
      if (!chain.closed && (i == 0 || i == n - 1)) continue;
      if (chain.closed && n < 3) continue;
      const Pixel& prev = px[(i + n - 1) % n];
      const Pixel& cur = px[i];
      const Pixel& next = px[(i + 1) % n];
      if (neighbour_count(skeleton, cur.x, cur.y) > 2) continue;
      const double a = theta(prev), b = theta(next);
      if (std::isnan(a) || std::isnan(b) || std::isnan(theta(cur))) continue;
      out.degreesPerPixel(cur.y, cur.x) = std::abs(wrap180(b - a)) / (step(prev, cur) + step(cur, next));
    }
  }
  return out;
}

}  // namespace coshrem
