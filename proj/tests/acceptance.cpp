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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "coshrem/bench.hpp"
#include "coshrem/measures.hpp"
#include "coshrem/metrics.hpp"
#include "coshrem/postprocess.hpp"
#include "coshrem/xform.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace coshrem {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// Guards a criterion so an exception is reported as a failure.
void criterion(const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(false, name, std::string("exception: ") + e.what());
  }
}

// Padding that removes the wrap-around step of half-plane phantoms.
constexpr int kPad = 40;

DetectionConfig padded(MeasureKind mode) {
  DetectionConfig c = DetectionConfig::defaults(mode);
  c.padding = kPad;
  return c;
}

const BenchRow* find_row(const BenchReport& r, const std::string& detector, double blur, double noise,
                         bool poisson = false) {
  for (const BenchRow& row : r.rows) {
    if (row.detector == detector && row.blur == blur && row.noise == noise && row.poisson == poisson) {
      return &row;
    }
  }
  return nullptr;
}

void unit_response(SystemCache& cache) {
  const Phantom ph = generate(line_phantom(512, 90.0, PhantomMode::Edge));
  const DetectionConfig config = DetectionConfig::defaults(MeasureKind::Edge);

  SystemCache fresh;
  const auto start = Clock::now();
  run_detection(ph.image, config, fresh);
  const double runtime = seconds_since(start);

  const DetectionOutput out = run_detection(ph.image, padded(MeasureKind::Edge), cache);
  const Image<double> dist = distance_transform(ph.truth.curve);
  const double far = config.system.waveletSupport / 2;
  double atEdge = 1.0, away = 0.0;
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    const double m = out.measure.values.data()[i];
    if (ph.truth.curve.data()[i]) atEdge = std::min(atEdge, m);
    if (dist.data()[i] > far) away = std::max(away, m);
  }
  report(atEdge >= 0.95 && away <= 0.2 && runtime < 5.0, "ideal-edge unit response",
         fmt("min at edge %.4f (>= 0.95), max beyond %.0f px %.4f (<= 0.2), 512^2 cold detect %.2f s (< 5 s)",
             atEdge, far, away, runtime));
}

void ridge_coherence(SystemCache& cache) {
  const Phantom ph = generate(ridge512());
  const auto roster = default_roster(PhantomMode::Ridge);
  const double ours = pfom(run_detector(roster[0], ph.image, cache), ph.truth.curve);
  const double canny = pfom(run_detector(roster[1], ph.image, cache), ph.truth.curve);
  report(ours >= 0.85 && canny <= 0.5, "ridge coherence",
         fmt("RIDGE-512 clean: coshrem-ridge %.4f (>= 0.85), tuned Canny %.4f (<= 0.5)", ours, canny));
}

std::string grid_table(const BenchReport& r, const std::string& detector, const BenchConfig& c) {
  std::ostringstream out;
  for (double b : c.blur) {
    out << "\n    blur " << b << ":";
    for (double n : c.noise) {
      const BenchRow* row = find_row(r, detector, b, n);
      out << fmt(" %6.4f", row ? row->pfom : std::nan(""));
    }
  }
  return out.str();
}

void edge_grid(SystemCache& cache) {
  BenchConfig c;
  c.phantom = edge512();
  c.detectors = default_roster(PhantomMode::Edge);
  c.timing = true;
  const BenchReport r = run_grid(c, cache);

  double worst = 2.0, worstBlur = -1, worstNoise = -1, ms = 0.0;
  for (const BenchRow& row : r.rows) {
    if (row.detector != "coshrem-edge") continue;
    ms += row.ms;
    const double v = std::isnan(row.pfom) ? -1.0 : row.pfom;
    if (v < worst) {
      worst = v;
      worstBlur = row.blur;
      worstNoise = row.noise;
    }
  }
  const bool worstCell = worstBlur == 1.5 && worstNoise == 100.0;
  const double minutes = ms / 60000.0;
  report(worst >= 0.85 && worstCell && minutes < 15.0, "edge grid robustness",
         fmt("EDGE-512 20 cells: min %.4f (>= 0.85) at (%.1f, %.0f) (expected (1.5, 100)), coshrem time %.2f min "
             "(< 15)",
             worst, worstBlur, worstNoise, minutes) +
             grid_table(r, "coshrem-edge", c));

  const BenchRow* tuned = find_row(r, "canny-tuned", 0.0, 100.0);
  const BenchRow* fallback = find_row(r, "canny-default", 0.0, 100.0);
  const bool ok = tuned && fallback && tuned->pfom >= 0.75 && fallback->pfom <= 0.4;
  report(ok, "canny default failure",
         fmt("blur 0, noise 100: tuned Canny %.4f (>= 0.75), default Canny %.4f (<= 0.4)",
             tuned ? tuned->pfom : std::nan(""), fallback ? fallback->pfom : std::nan("")));
}

void ridge_grid(SystemCache& cache) {
  BenchConfig c;
  c.phantom = ridge512();
  c.detectors = {default_roster(PhantomMode::Ridge)[0]};
  const BenchReport r = run_grid(c, cache);
  double worst = 2.0, worstBlur = -1, worstNoise = -1;
  for (const BenchRow& row : r.rows) {
    const double v = std::isnan(row.pfom) ? -1.0 : row.pfom;
    if (v < worst) {
      worst = v;
      worstBlur = row.blur;
      worstNoise = row.noise;
    }
  }
  report(worst >= 0.80, "ridge grid robustness",
         fmt("RIDGE-512 20 cells: min %.4f (>= 0.80) at (%.1f, %.0f)", worst, worstBlur, worstNoise) +
             grid_table(r, "coshrem-ridge", c));
}

void poisson_robustness(SystemCache& cache) {
  BenchConfig c;
  c.phantom = edge512();
  c.blur = {0.0};
  c.noise = {50.0};
  c.poisson = {true};
  c.detectors = {default_roster(PhantomMode::Edge)[0]};
  const BenchReport r = run_grid(c, cache);
  const double v = r.rows.at(0).pfom;
  report(v >= 0.75, "poisson robustness", fmt("EDGE-512, noise 50 then Poisson: %.4f (>= 0.75)", v));
}

PhantomSpec disc(int size, double radius) {
  PhantomSpec s;
  s.width = s.height = size;
  s.primitives.push_back(Circle{Eigen::Vector2d(size / 2, size / 2), radius});
  return s;
}

// Median detected curvature on skeleton pixels within 2 px of the truth.
double median_curvature(const Phantom& ph, const DetectionOutput& out, int* samples) {
  const Image<double> dist = distance_transform(ph.truth.curve);
  std::vector<double> v;
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    const double k = out.curvature.degreesPerPixel.data()[i];
    if (out.skeleton.data()[i] && dist.data()[i] <= 2.0 && !std::isnan(k)) v.push_back(k);
  }
  *samples = static_cast<int>(v.size());
  return median(v);
}

void curvature(SystemCache& cache) {
  std::string detail;
  bool pass = true;
  for (double r : {100.0, 20.0}) {
    const Phantom ph = generate(disc(512, r));
    const DetectionOutput out = run_detection(ph.image, padded(MeasureKind::Edge), cache);
    int n = 0;
    const double k = median_curvature(ph, out, &n);
    const double expected = 180.0 / M_PI / r;
    const bool ok = std::abs(k - expected) <= 0.2 * expected && n > 0;
    pass = pass && ok;
    detail += fmt("r=%.0f median %.4f deg/px vs %.4f (+-20%%, n=%d); ", r, k, expected, n);
  }
  for (double angle : {0.0, 30.0, 90.0}) {
    const Phantom ph = generate(line_phantom(512, angle, PhantomMode::Edge));
    const DetectionOutput out = run_detection(ph.image, padded(MeasureKind::Edge), cache);
    int n = 0;
    const double k = median_curvature(ph, out, &n);
    const bool ok = k <= 0.05 && n > 0;
    pass = pass && ok;
    detail += fmt("straight %.0f deg median %.4f (<= 0.05, n=%d); ", angle, k, n);
  }
  report(pass, "curvature accuracy", detail);
}

void orientation(SystemCache& cache) {
  std::string detail;
  bool pass = true;
  for (PhantomMode mode : {PhantomMode::Edge, PhantomMode::Ridge}) {
    const MeasureKind kind = mode == PhantomMode::Edge ? MeasureKind::Edge : MeasureKind::Ridge;
    for (double angle : {0.0, 45.0, 90.0}) {
      const Phantom ph = generate(line_phantom(512, angle, mode));
      const DetectionOutput out = run_detection(ph.image, padded(kind), cache);
      const OrientationMap o = skeleton_orientation(out);
      const Image<double> dist = distance_transform(ph.truth.curve);
      std::vector<double> err;
      for (Eigen::Index i = 0; i < dist.size(); ++i) {
        const double d = o.degrees.data()[i];
        if (dist.data()[i] <= 2.0 && !std::isnan(d)) err.push_back(std::abs(wrap180(d - angle)));
      }
      const double m = median(err);
      pass = pass && m <= 3.0 && !err.empty();
      detail += fmt("%s %.0f: %.3f deg (n=%zu); ", mode == PhantomMode::Edge ? "step" : "line", angle, m,
                    err.size());
    }
  }
  report(pass, "orientation accuracy", detail + "bound 3 deg");
}

// Compact versions of the unit-level property suites.
void properties() {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  };
  const SystemParams params = test::small_params();
  const ShearletSystem system = build_system(params, 64, 64);
  const GrayImage f = test::shapes_image(64, 64, 11) + test::noise_image(64, 64, 12, 20.0);
  const GrayImage g = test::noise_image(64, 64, 13);
  DetectionParams dp;
  dp.minContrast = 5.0;

  const Analyzer af(system, f);
  const MeasureResult edge = edge_measure(af, dp);
  const MeasureResult ridge = ridge_measure(af, dp);
  for (const auto* m : {&edge.measure.values, &ridge.measure.values}) {
    check(m->minCoeff() >= 0.0 && m->maxCoeff() <= 1.0, "measure range");
  }

  const GrayImage shifted = test::circshift(f, 7, -5);
  const Image<double> edgeShifted = edge_measure(Analyzer(system, shifted), dp).measure.values;
  check(test::max_abs(edgeShifted - test::circshift(edge.measure.values, 7, -5)) <= 1e-9, "shift covariance");

  const GrayImage negated = -f;
  check(test::max_abs(edge_measure(Analyzer(system, negated), dp).measure.values - edge.measure.values) <= 1e-9,
        "edge negation invariance");
  DetectionParams both = dp;
  both.polarity = Polarity::Both;
  check(test::max_abs(ridge_measure(Analyzer(system, negated), both).measure.values -
                      ridge_measure(af, both).measure.values) <= 1e-9,
        "ridge negation invariance");

  const CoefficientVolume vf = analyze(system, f), vg = analyze(system, g),
                          vs = analyze(system, GrayImage(2.5 * f - 0.75 * g));
  double worstRel = 0.0;
  for (std::size_t i = 0; i < vs.planes.size(); ++i) {
    const ComplexPlane expected = 2.5 * vf.planes[i] - 0.75 * vg.planes[i];
    const double scale = std::max(expected.abs().maxCoeff(), 1e-300);
    worstRel = std::max(worstRel, (vs.planes[i] - expected).abs().maxCoeff() / scale);
  }
  check(worstRel <= 1e-10, fmt("linearity (%.2e)", worstRel));

  bool hilbert = true;
  const int h = system.height(), w = system.width();
  for (int i = 0; i < system.filter_count() && hilbert; ++i) {
    const Image<float>& even = system.filter(i).even;
    const float mainLobe = 0.5f * even.maxCoeff();
    const auto odd = system.odd_spectrum(i);
    const int k = i % system.orientation_count();
    for (int r = 1; r < h && hilbert; ++r) {
      for (int c = 1; c < w; ++c) {
        if (2 * r == h || 2 * c == w) continue;
        const int mr = (h - r) % h, mc = (w - c) % w;
        const std::complex<double> want(0.0, -system.hilbert_sign(k, r, c) * double(even(r, c)));
        hilbert = hilbert && std::abs(odd(r, c) - want) <= 1e-12 && even(r, c) == even(mr, mc) &&
                  std::abs(odd(r, c) + odd(mr, mc)) <= 1e-12 &&
                  (even(r, c) <= mainLobe || system.hilbert_sign(k, r, c) != 0);
        if (!hilbert) break;
      }
    }
  }
  check(hilbert, "Hilbert spectrum identity");

  double pfomErr = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BinaryMap det = test::random_map(64, 64, 0.05, seed), truth = test::random_map(64, 64, 0.03, seed + 100);
    const double a = 1.0 / 9.0;
    double sum = 0.0;
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) {
        if (!det(y, x)) continue;
        const double d = test::brute_distance(truth, x, y);
        sum += 1.0 / (1.0 + a * d * d);
      }
    }
    const double brute = sum / std::max(det.count(), truth.count());
    pfomErr = std::max(pfomErr, std::abs(brute - pfom(det, truth, a)));
  }
  check(pfomErr <= 1e-12, fmt("PFOM brute force (%.2e)", pfomErr));

  int redundant = 0, unstable = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BinaryMap blobs = hysteresis(gaussian_blur(test::noise_image(64, 64, seed), 2.0), 128.0, 134.0);
    const BinaryMap once = thin(blobs);
    unstable += (thin(once) != once).count();
    redundant += test::redundant_pixels(once);
  }
  check(unstable == 0, "thinning idempotence");
  check(redundant == 0, fmt("minimal connectivity (%d redundant)", redundant));

  const GrayImage p = generate(edge512()).image;
  check((corrupt(p, 1.0, 50.0, 9) == corrupt(p, 1.0, 50.0, 9)).all(), "corrupt determinism");
  check((poissonize(p, 9) == poissonize(p, 9)).all(), "poissonize determinism");
  BenchConfig bc;
  bc.blur = {0.5, 1.5};
  bc.noise = {80.0};
  bc.poisson = {false, true};
  bc.detectors = {default_roster(PhantomMode::Edge)[1], default_roster(PhantomMode::Edge)[3]};
  SystemCache c1, c2;
  const BenchReport r1 = run_grid(bc, c1), r2 = run_grid(bc, c2);
  check(r1.to_csv() == r2.to_csv() && r1.to_json() == r2.to_json(), "run_grid determinism");

  std::string detail = failed.empty() ? "all checks passed" : "failed:";
  for (const auto& f : failed) detail += " " + f + ";";
  report(failed.empty(), "property suites",
         detail + fmt(" (linearity %.1e, PFOM %.1e)", worstRel, pfomErr));
}

void cache_speedup() {
  SystemCache cache;
  const DetectionConfig config = DetectionConfig::defaults(MeasureKind::Edge);
  const DetectionOutput first = run_detection(generate(edge512()).image, config, cache);
  const DetectionOutput second = run_detection(generate(ridge512()).image, config, cache);
  const double ratio = second.timings.systemMs / first.timings.systemMs;
  report(!first.cacheHit && second.cacheHit && ratio <= 0.05 && cache.builds() == 1, "cache speedup",
         fmt("system %.1f ms then %.3f ms (ratio %.5f <= 0.05), builds %d", first.timings.systemMs,
             second.timings.systemMs, ratio, cache.builds()));
}

}  // namespace
}  // namespace coshrem

int main() {
  using namespace coshrem;
  const auto start = Clock::now();
  SystemCache cache;
  criterion("ideal-edge unit response", [&] { unit_response(cache); });
  criterion("ridge coherence", [&] { ridge_coherence(cache); });
  criterion("edge grid robustness", [&] { edge_grid(cache); });
  criterion("ridge grid robustness", [&] { ridge_grid(cache); });
  criterion("poisson robustness", [&] { poisson_robustness(cache); });
  criterion("curvature accuracy", [&] { curvature(cache); });
  criterion("orientation accuracy", [&] { orientation(cache); });
  criterion("property suites", [&] { properties(); });
  criterion("cache speedup", [&] { cache_speedup(); });
  std::printf("%d criteria failed, %.1f s\n", failures, seconds_since(start));
  return failures ? 1 : 0;
}
