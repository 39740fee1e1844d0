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

#include "coshrem/phantoms.hpp"

#include "coshrem/postprocess.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace coshrem {
namespace {

using Eigen::Vector2d;
using json = nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kSub = 16;               // sub-rows / sub-columns per pixel
constexpr double kSampleStep = 0.05;   // ground-truth sampling step, pixels
constexpr double kCornerTurn = 20.0;   // polyline turns above this are corners

double degrees(double radians) { return radians * 180.0 / kPi; }

/// Tangent angle of an image-space direction in the y-up convention.
double tangent_of(const Vector2d& d) {
  double a = degrees(std::atan2(-d.y(), d.x()));
  a = std::fmod(a, 180.0);
  if (a < 0.0) a += 180.0;
  if (a >= 180.0) a -= 180.0;
  return a;
}

/// Point on a circle at screen angle t (radians, counter-clockwise, y up).
Vector2d on_circle(const Vector2d& c, double r, double t) {
  return {c.x() + r * std::cos(t), c.y() - r * std::sin(t)};
}

std::vector<Vector2d> arc_points(const Arc& arc) {
  const double span = arc.endDegrees - arc.startDegrees;
  const int n = std::max(2, static_cast<int>(std::ceil(arc.radius * span * kPi / 180.0 / 0.5)) + 1);
  std::vector<Vector2d> pts;
  for (int i = 0; i < n; ++i) {
    const double t = (arc.startDegrees + span * i / (n - 1)) * kPi / 180.0;
    pts.push_back(on_circle(arc.center, arc.radius, t));
  }
  return pts;
}

double segment_distance(const Vector2d& p, const Vector2d& a, const Vector2d& b) {
  const Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

bool inside_polygon(const std::vector<Vector2d>& poly, const Vector2d& p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vector2d& a = poly[i];
    const Vector2d& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

double polygon_boundary_distance(const std::vector<Vector2d>& poly, const Vector2d& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  }
  return d;
}

/// Strictly inside a filled primitive, at least `tol` from its boundary.
bool strictly_inside(const Primitive& prim, const Vector2d& p, double tol) {
  if (const auto* c = std::get_if<Circle>(&prim)) return (p - c->center).norm() < c->radius - tol;
  if (const auto* pl = std::get_if<Polyline>(&prim)) {
    return pl->closed && inside_polygon(pl->points, p) &&
           polygon_boundary_distance(pl->points, p) > tol;
  }
  return false;
}

bool fillable(const Primitive& prim) {
  if (std::holds_alternative<Circle>(prim)) return true;
  const auto* pl = std::get_if<Polyline>(&prim);
  return pl && pl->closed;
}

// --- edge-mode fill ----------------------------------------------------------

/// Intervals [x0, x1) inside the primitive along the horizontal line y.
void row_intervals(const Primitive& prim, double y, std::vector<std::pair<double, double>>& out) {
  if (const auto* c = std::get_if<Circle>(&prim)) {
    const double dy = y - c->center.y();
    if (std::abs(dy) < c->radius) {
      const double h = std::sqrt(c->radius * c->radius - dy * dy);
      out.emplace_back(c->center.x() - h, c->center.x() + h);
    }
    return;
  }
  const auto& poly = std::get<Polyline>(prim).points;
  std::vector<double> xs;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vector2d& a = poly[i];
    const Vector2d& b = poly[j];
    if ((a.y() > y) != (b.y() > y)) {
      xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
    }
  }
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) out.emplace_back(xs[i], xs[i + 1]);
}

Image<double> fill_coverage(const PhantomSpec& spec) {
  Image<double> cover = Image<double>::Zero(spec.height, spec.width);
  std::vector<std::pair<double, double>> spans;
  for (int y = 0; y < spec.height; ++y) {
    for (int s = 0; s < kSub; ++s) {
      const double ys = y - 0.5 + (s + 0.5) / kSub;
      spans.clear();
      for (const Primitive& prim : spec.primitives) row_intervals(prim, ys, spans);
      std::sort(spans.begin(), spans.end());
      std::vector<std::pair<double, double>> merged;
      for (const auto& span : spans) {
        if (!merged.empty() && span.first <= merged.back().second) {
          merged.back().second = std::max(merged.back().second, span.second);
        } else {
          merged.push_back(span);
        }
      }
      for (const auto& [a, b] : merged) {
        const int x0 = std::max(0, static_cast<int>(std::floor(a + 0.5)));
        const int x1 = std::min(spec.width - 1, static_cast<int>(std::floor(b + 0.5)));
        for (int x = x0; x <= x1; ++x) {
          const double overlap = std::min(b, x + 0.5) - std::max(a, x - 0.5);
          if (overlap > 0.0) cover(y, x) += overlap / kSub;
        }
      }
    }
  }
  return cover;
}

// --- ridge-mode stroke ---------------------------------------------------------

class StrokeMask {
 public:
  StrokeMask(int width, int height) : width_(width), height_(height), bits_(std::size_t(width) * height) {}

  /// Marks sub-samples within `radius` of the segment ab.
  void segment(const Vector2d& a, const Vector2d& b, double radius) {
    paint(std::min(a.x(), b.x()) - radius, std::max(a.x(), b.x()) + radius,
          std::min(a.y(), b.y()) - radius, std::max(a.y(), b.y()) + radius,
          [&](const Vector2d& p) { return segment_distance(p, a, b) <= radius; });
  }

  void annulus(const Vector2d& c, double r, double radius) {
    const double outer = r + radius;
    paint(c.x() - outer, c.x() + outer, c.y() - outer, c.y() + outer,
          [&](const Vector2d& p) { return std::abs((p - c).norm() - r) <= radius; });
  }

  Image<double> coverage() const {
    Image<double> out(height_, width_);
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        int count = 0;
        for (std::uint64_t w : bits_[std::size_t(y) * width_ + x]) count += std::popcount(w);
        out(y, x) = static_cast<double>(count) / (kSub * kSub);
      }
    }
    return out;
  }

 private:
  template <typename Inside>
  void paint(double x0, double x1, double y0, double y1, Inside&& inside) {
    const int px0 = std::max(0, static_cast<int>(std::floor(x0 + 0.5)));
    const int px1 = std::min(width_ - 1, static_cast<int>(std::floor(x1 + 0.5)));
    const int py0 = std::max(0, static_cast<int>(std::floor(y0 + 0.5)));
    const int py1 = std::min(height_ - 1, static_cast<int>(std::floor(y1 + 0.5)));
    for (int y = py0; y <= py1; ++y) {
      for (int x = px0; x <= px1; ++x) {
        auto& cell = bits_[std::size_t(y) * width_ + x];
        for (int sy = 0; sy < kSub; ++sy) {
          for (int sx = 0; sx < kSub; ++sx) {
            const int bit = sy * kSub + sx;
            if (cell[bit / 64] >> (bit % 64) & 1u) continue;
            const Vector2d p(x - 0.5 + (sx + 0.5) / kSub, y - 0.5 + (sy + 0.5) / kSub);
            if (inside(p)) cell[bit / 64] |= std::uint64_t{1} << (bit % 64);
          }
        }
      }
    }
  }

  int width_, height_;
  std::vector<std::array<std::uint64_t, 4>> bits_;
};

Image<double> stroke_coverage(const PhantomSpec& spec) {
  StrokeMask mask(spec.width, spec.height);
  const double radius = spec.strokeWidth / 2.0;
  auto polyline = [&](const std::vector<Vector2d>& pts, bool closed) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) mask.segment(pts[i], pts[i + 1], radius);
    if (closed) mask.segment(pts.back(), pts.front(), radius);
  };
  for (const Primitive& prim : spec.primitives) {
    if (const auto* c = std::get_if<Circle>(&prim)) {
      mask.annulus(c->center, c->radius, radius);
    } else if (const auto* s = std::get_if<Segment>(&prim)) {
      mask.segment(s->p0, s->p1, radius);
    } else if (const auto* a = std::get_if<Arc>(&prim)) {
      polyline(arc_points(*a), false);
    } else {
      const auto& pl = std::get<Polyline>(prim);
      polyline(pl.points, pl.closed);
    }
  }
  return mask.coverage();
}

// --- ground truth ----------------------------------------------------------------

struct Sample {
  Vector2d p;
  double tangent;
  double curvature;
};

void sample_polyline(const std::vector<Vector2d>& pts, bool closed, std::vector<Sample>& out) {
  const int n = static_cast<int>(pts.size());
  const int segments = closed ? n : n - 1;
  auto seg = [&](int i) { return pts[(i + 1) % n] - pts[i % n]; };
  // Turning curvature at every vertex (NaN at corners, 0 at open ends).
  std::vector<double> vertex(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!closed && (i == 0 || i == n - 1)) continue;
    const Vector2d in = seg((i + n - 1) % n), outDir = seg(i);
    double turn = degrees(std::atan2(in.x() * outDir.y() - in.y() * outDir.x(), in.dot(outDir)));
    const double length = 0.5 * (in.norm() + outDir.norm());
    vertex[i] = std::abs(turn) > kCornerTurn ? kNaN : std::abs(turn) / length;
  }
  for (int i = 0; i < segments; ++i) {
    const Vector2d a = pts[i], d = seg(i);
    const double len = d.norm();
    if (len == 0.0) continue;
    const double tangent = tangent_of(d);
    const double k0 = vertex[i], k1 = vertex[(i + 1) % n];
    const int steps = std::max(1, static_cast<int>(std::ceil(len / kSampleStep)));
    for (int s = 0; s < steps; ++s) {
      const double u = static_cast<double>(s) / steps;
      double k;
      if ((std::isnan(k0) && u * len < 1.0) || (std::isnan(k1) && (1.0 - u) * len < 1.0)) {
        k = kNaN;
      } else {
        k = (1.0 - u) * (std::isnan(k0) ? 0.0 : k0) + u * (std::isnan(k1) ? 0.0 : k1);
      }
      out.push_back({a + u * d, tangent, k});
    }
  }
  if (!closed) out.push_back({pts.back(), tangent_of(seg(n - 2)), 0.0});
}

std::vector<Sample> boundary_samples(const Primitive& prim) {
  std::vector<Sample> out;
  auto circular = [&](const Vector2d& c, double r, double t0, double t1) {
    const int steps = std::max(1, static_cast<int>(std::ceil(r * (t1 - t0) / kSampleStep)));
    for (int s = 0; s <= steps; ++s) {
      const double t = t0 + (t1 - t0) * s / steps;
      double tangent = std::fmod(degrees(t) + 90.0, 180.0);
      if (tangent < 0.0) tangent += 180.0;
      out.push_back({on_circle(c, r, t), tangent, degrees(1.0) / r});
    }
  };
  if (const auto* c = std::get_if<Circle>(&prim)) {
    circular(c->center, c->radius, 0.0, 2.0 * kPi);
  } else if (const auto* a = std::get_if<Arc>(&prim)) {
    circular(a->center, a->radius, a->startDegrees * kPi / 180.0, a->endDegrees * kPi / 180.0);
  } else if (const auto* s = std::get_if<Segment>(&prim)) {
    sample_polyline({s->p0, s->p1}, false, out);
  } else {
    const auto& pl = std::get<Polyline>(prim);
    sample_polyline(pl.points, pl.closed, out);
  }
  return out;
}

GroundTruth rasterize_truth(const PhantomSpec& spec) {
  const int w = spec.width, h = spec.height;
  GroundTruth gt;
  BinaryMap raw = BinaryMap::Constant(h, w, false);
  Image<double> best = Image<double>::Constant(h, w, std::numeric_limits<double>::infinity());
  gt.tangentDegrees = Image<double>::Constant(h, w, kNaN);
  gt.curvature = Image<double>::Constant(h, w, kNaN);
  for (std::size_t i = 0; i < spec.primitives.size(); ++i) {
    for (const Sample& s : boundary_samples(spec.primitives[i])) {
      const int x = static_cast<int>(std::floor(s.p.x() + 0.5));
      const int y = static_cast<int>(std::floor(s.p.y() + 0.5));
      if (x < 0 || y < 0 || x >= w || y >= h) continue;
      if (spec.mode == PhantomMode::Edge) {
        bool hidden = false;
        for (std::size_t j = 0; j < spec.primitives.size() && !hidden; ++j) {
          hidden = j != i && strictly_inside(spec.primitives[j], s.p, 1e-6);
        }
        if (hidden) continue;
      }
      const double d = (s.p - Vector2d(x, y)).squaredNorm();
      raw(y, x) = true;
      if (d < best(y, x)) {
        best(y, x) = d;
        gt.tangentDegrees(y, x) = s.tangent;
        gt.curvature(y, x) = s.curvature;
      }
    }
  }
  gt.curve = thin(raw);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!gt.curve(y, x)) {
        gt.tangentDegrees(y, x) = kNaN;
        gt.curvature(y, x) = kNaN;
      }
    }
  }
  return gt;
}

// --- JSON ------------------------------------------------------------------------

Vector2d read_point(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParameterError(std::string("'") + field + "' must be an [x, y] pair", field);
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json write_point(const Vector2d& p) { return json::array({p.x(), p.y()}); }

template <typename T>
T require(const json& j, const char* field) {
  if (!j.contains(field)) throw ParameterError(std::string("missing field '") + field + "'", field);
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ParameterError(std::string("field '") + field + "' has the wrong type", field);
  }
}

void check_bounds(const PhantomSpec& spec, const Vector2d& lo, const Vector2d& hi) {
  if (lo.x() < -1.0 || lo.y() < -1.0 || hi.x() > spec.width || hi.y() > spec.height) {
    throw ParameterError("primitive extends outside the image", "primitives");
  }
}

/// Half plane on the left of the directed tangent, clipped to the padded frame.
std::vector<Vector2d> clip_half_plane(const Vector2d& c, const Vector2d& normal, double x0, double y0,
                                      double x1, double y1) {
  const std::vector<Vector2d> box = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  std::vector<Vector2d> out;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Vector2d& a = box[i];
    const Vector2d& b = box[(i + 1) % box.size()];
    const double da = normal.dot(a - c), db = normal.dot(b - c);
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) out.push_back(a + (b - a) * (da / (da - db)));
  }
  return out;
}

}  // namespace

void PhantomSpec::validate() const {
  if (width < 8 || height < 8) throw ParameterError("phantom must be at least 8x8", "width");
  if (!std::isfinite(foreground) || !std::isfinite(background) || foreground == background) {
    throw ParameterError("foreground and background must be finite and different", "foreground");
  }
  if (mode == PhantomMode::Ridge && !(strokeWidth >= 1.0)) {
    throw ParameterError("strokeWidth must be >= 1 in ridge mode", "strokeWidth");
  }
  for (const Primitive& prim : primitives) {
    if (mode == PhantomMode::Edge && !fillable(prim)) {
      throw ParameterError("edge mode needs closed primitives (circle or closed polyline)",
                           "primitives");
    }
    if (const auto* c = std::get_if<Circle>(&prim)) {
      if (!(c->radius > 0.0)) throw ParameterError("circle radius must be > 0", "radius");
      check_bounds(*this, c->center.array() - c->radius, c->center.array() + c->radius);
    } else if (const auto* s = std::get_if<Segment>(&prim)) {
      check_bounds(*this, s->p0.cwiseMin(s->p1), s->p0.cwiseMax(s->p1));
    } else if (const auto* a = std::get_if<Arc>(&prim)) {
      if (!(a->radius > 0.0)) throw ParameterError("arc radius must be > 0", "radius");
      if (!(a->endDegrees > a->startDegrees) || a->endDegrees - a->startDegrees > 360.0) {
        throw ParameterError("arc needs start < end <= start + 360", "endDegrees");
      }
      check_bounds(*this, a->center.array() - a->radius, a->center.array() + a->radius);
    } else {
      const auto& pl = std::get<Polyline>(prim);
      if (pl.points.size() < (pl.closed ? 3u : 2u)) {
        throw ParameterError("polyline has too few points", "points");
      }
      Vector2d lo = pl.points[0], hi = pl.points[0];
      for (const Vector2d& p : pl.points) {
        if (!p.allFinite()) throw ParameterError("polyline point is not finite", "points");
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
      check_bounds(*this, lo, hi);
    }
  }
}

Phantom generate(const PhantomSpec& spec) {
  spec.validate();
  const Image<double> cover =
      spec.mode == PhantomMode::Edge ? fill_coverage(spec) : stroke_coverage(spec);
  Phantom out;
  out.image = spec.background + (spec.foreground - spec.background) * cover;
  out.truth = rasterize_truth(spec);
  return out;
}

PhantomSpec edge512() {
  PhantomSpec spec;
  spec.primitives.push_back(Circle{{160.0, 160.0}, 90.0});
  spec.primitives.push_back(Circle{{250.0, 230.0}, 65.0});
  spec.primitives.push_back(Polyline{{{340.0, 80.0}, {470.0, 80.0}, {470.0, 250.0}, {340.0, 250.0}}, true});
  Polyline band;
  band.closed = true;
  auto top = [](double x) { return 360.0 + 15.0 * std::sin(2.0 * kPi * (x - 50.0) / 105.0); };
  for (int x = 50; x <= 470; ++x) band.points.emplace_back(x, top(x));
  for (int x = 470; x >= 50; --x) band.points.emplace_back(x, top(x) + 50.0);
  spec.primitives.push_back(std::move(band));
  return spec;
}

PhantomSpec ridge512() {
  PhantomSpec spec = edge512();
  spec.mode = PhantomMode::Ridge;
  spec.strokeWidth = 3.0;
  return spec;
}

PhantomSpec line_phantom(int size, double tangentDegrees, PhantomMode mode) {
  PhantomSpec spec;
  spec.width = spec.height = size;
  spec.mode = mode;
  const double t = tangentDegrees * kPi / 180.0;
  const Vector2d c(size / 2, size / 2);
  const Vector2d d(std::cos(t), -std::sin(t));
  if (mode == PhantomMode::Edge) {
    const Vector2d normal(-d.y(), d.x());
    spec.primitives.push_back(
        Polyline{clip_half_plane(c, normal, -1.0, -1.0, size, size), true});
  } else {
    // Longest chord through c inside [0, size-1]^2.
    double lo = -1e9, hi = 1e9;
    for (int axis = 0; axis < 2; ++axis) {
      if (std::abs(d[axis]) < 1e-12) continue;
      const double a = (0.0 - c[axis]) / d[axis], b = (size - 1.0 - c[axis]) / d[axis];
      lo = std::max(lo, std::min(a, b));
      hi = std::min(hi, std::max(a, b));
    }
    spec.primitives.push_back(Segment{c + lo * d, c + hi * d});
  }
  return spec;
}

PhantomSpec parse_phantom_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("phantom spec is not valid JSON: ") + e.what(), "spec");
  }
  if (!j.is_object()) throw ParameterError("phantom spec must be a JSON object", "spec");
  if (j.contains("schema") && j["schema"] != "coshrem.phantom/1") {
    throw ParameterError("unsupported phantom schema", "schema");
  }
  PhantomSpec spec;
  spec.width = require<int>(j, "width");
  spec.height = require<int>(j, "height");
  const std::string mode = j.value("mode", "edge");
  if (mode == "edge") {
    spec.mode = PhantomMode::Edge;
  } else if (mode == "ridge") {
    spec.mode = PhantomMode::Ridge;
  } else {
    throw ParameterError("mode must be 'edge' or 'ridge'", "mode");
  }
  spec.foreground = j.value("foreground", spec.foreground);
  spec.background = j.value("background", spec.background);
  spec.strokeWidth = j.value("strokeWidth", spec.strokeWidth);
  for (const json& p : j.value("primitives", json::array())) {
    const std::string type = require<std::string>(p, "type");
    if (type == "circle") {
      spec.primitives.push_back(Circle{read_point(p.value("center", json()), "center"),
                                       require<double>(p, "radius")});
    } else if (type == "segment") {
      spec.primitives.push_back(
          Segment{read_point(p.value("p0", json()), "p0"), read_point(p.value("p1", json()), "p1")});
    } else if (type == "arc") {
      spec.primitives.push_back(Arc{read_point(p.value("center", json()), "center"),
                                    require<double>(p, "radius"), require<double>(p, "startDegrees"),
                                    require<double>(p, "endDegrees")});
    } else if (type == "polyline") {
      Polyline pl;
      for (const json& q : p.value("points", json::array())) pl.points.push_back(read_point(q, "points"));
      pl.closed = p.value("closed", false);
      spec.primitives.push_back(std::move(pl));
    } else {
      throw ParameterError("unknown primitive type '" + type + "'", "type");
    }
  }
  spec.validate();
  return spec;
}

std::string to_json(const PhantomSpec& spec) {
  json j = {{"schema", "coshrem.phantom/1"},
            {"width", spec.width},
            {"height", spec.height},
            {"mode", spec.mode == PhantomMode::Edge ? "edge" : "ridge"},
            {"foreground", spec.foreground},
            {"background", spec.background},
            {"strokeWidth", spec.strokeWidth}};
  json prims = json::array();
  for (const Primitive& prim : spec.primitives) {
    if (const auto* c = std::get_if<Circle>(&prim)) {
      prims.push_back({{"type", "circle"}, {"center", write_point(c->center)}, {"radius", c->radius}});
    } else if (const auto* s = std::get_if<Segment>(&prim)) {
      prims.push_back({{"type", "segment"}, {"p0", write_point(s->p0)}, {"p1", write_point(s->p1)}});
    } else if (const auto* a = std::get_if<Arc>(&prim)) {
      prims.push_back({{"type", "arc"},
                       {"center", write_point(a->center)},
                       {"radius", a->radius},
                       {"startDegrees", a->startDegrees},
                       {"endDegrees", a->endDegrees}});
    } else {
      const auto& pl = std::get<Polyline>(prim);
      json pts = json::array();
      for (const Vector2d& p : pl.points) pts.push_back(write_point(p));
      prims.push_back({{"type", "polyline"}, {"points", pts}, {"closed", pl.closed}});
    }
  }
  j["primitives"] = prims;
  return j.dump(2);
}

PhantomSpec load_phantom_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read phantom spec '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_phantom_spec(buffer.str());
}

std::string to_json(const GroundTruth& truth) {
  json pixels = json::array();
  for (Eigen::Index y = 0; y < truth.curve.rows(); ++y) {
    for (Eigen::Index x = 0; x < truth.curve.cols(); ++x) {
      if (!truth.curve(y, x)) continue;
      const double k = truth.curvature(y, x);
      pixels.push_back({{"x", x},
                        {"y", y},
                        {"tangent", truth.tangentDegrees(y, x)},
                        {"curvature", std::isnan(k) ? json(nullptr) : json(k)}});
    }
  }
  json j = {{"schema", "coshrem.groundtruth/1"},
            {"width", truth.curve.cols()},
            {"height", truth.curve.rows()},
            {"pixels", pixels}};
  return j.dump();
}

GrayImage corrupt(const GrayImage& image, double sigmaBlur, double sigmaNoise, std::uint64_t seed) {
  if (!(sigmaBlur >= 0.0)) throw ParameterError("sigmaBlur must be >= 0", "sigmaBlur");
  if (!(sigmaNoise >= 0.0)) throw ParameterError("sigmaNoise must be >= 0", "sigmaNoise");
  GrayImage out = gaussian_blur(image, sigmaBlur);
  if (sigmaNoise > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigmaNoise);
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += noise(rng);
  }
  return out;
}

GrayImage poissonize(const GrayImage& image, std::uint64_t seed, long* floored) {
  std::mt19937_64 rng(seed);
  GrayImage out(image.rows(), image.cols());
  long negatives = 0;
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    double v = image.data()[i];
    if (v < 0.0) {
      ++negatives;
      v = 0.0;
    }
    if (v == 0.0) {
      out.data()[i] = 0.0;
      continue;
    }
    std::poisson_distribution<long> draw(v / 10.0);
    out.data()[i] = 10.0 * static_cast<double>(draw(rng));
  }
  if (floored) *floored = negatives;
  return out;
}

}  // namespace coshrem
