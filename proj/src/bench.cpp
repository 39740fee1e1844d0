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

#include "coshrem/bench.hpp"

#include "coshrem/metrics.hpp"
#include "coshrem/postprocess.hpp"
#include "json_params.hpp"
#include "parallel.hpp"

#include <fftw3.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace coshrem {

using nlohmann::json;

void BenchConfig::validate() const {
  phantom.validate();
  if (blur.empty() || noise.empty() || poisson.empty()) {
    throw ParameterError("corruption grid has an empty axis", "grid");
  }
  for (double b : blur) {
    if (!(b >= 0.0)) throw ParameterError("blur levels must be >= 0", "blur");
  }
  for (double n : noise) {
    if (!(n >= 0.0)) throw ParameterError("noise levels must be >= 0", "noise");
  }
  if (detectors.empty()) throw ParameterError("detector roster is empty", "detectors");
  for (const DetectorSpec& d : detectors) {
    if (d.name.empty()) throw ParameterError("detector without a name", "detectors");
  }
}

GrayImage grid_cell_image(const GrayImage& phantom, double blur, double noise, bool poisson,
                          std::uint64_t seed, std::uint64_t cellIndex) {
  GrayImage image = corrupt(phantom, blur, noise, cell_seed(seed, cellIndex));
  if (poisson) image = poissonize(image, cell_seed(seed ^ kPoissonSalt, cellIndex));
  return image;
}

BinaryMap run_detector(const DetectorSpec& detector, const GrayImage& image, SystemCache& cache) {
  switch (detector.type) {
    case DetectorSpec::Type::Coshrem: return run_detection(image, detector.coshrem, cache).skeleton;
    case DetectorSpec::Type::Canny: return thin(canny(image, detector.canny));
    case DetectorSpec::Type::Sobel: return sobel(image, detector.sobelThreshold, true);
  }
  return {};
}

BenchReport run_grid(const BenchConfig& config, SystemCache& cache) {
  config.validate();
  const Phantom phantom = generate(config.phantom);

  struct Cell {
    double blur, noise;
    bool poisson;
    GrayImage image;
  };
  std::vector<Cell> cells;
  for (bool p : config.poisson) {
    for (std::size_t b = 0; b < config.blur.size(); ++b) {
      for (std::size_t n = 0; n < config.noise.size(); ++n) {
        cells.push_back({config.blur[b], config.noise[n], p, {}});
      }
    }
  }
  detail::parallel_for(static_cast<int>(cells.size()), [&](int, int i) {
    const std::uint64_t index = static_cast<std::uint64_t>(i) % (config.blur.size() * config.noise.size());
    cells[i].image = grid_cell_image(phantom.image, cells[i].blur, cells[i].noise, cells[i].poisson,
                                     config.seed, index);
  });

  BenchReport report;
  report.seed = config.seed;
  report.timing = config.timing;
  const int perDetector = static_cast<int>(cells.size());
  report.rows.resize(config.detectors.size() * cells.size());
  detail::parallel_for(static_cast<int>(report.rows.size()), [&](int, int task) {
    const DetectorSpec& detector = config.detectors[task / perDetector];
    const Cell& cell = cells[task % perDetector];
    BenchRow& row = report.rows[task];
    row.detector = detector.name;
    row.blur = cell.blur;
    row.noise = cell.noise;
    row.poisson = cell.poisson;
    const auto start = std::chrono::steady_clock::now();
    try {
      row.pfom = pfom(run_detector(detector, cell.image, cache), phantom.truth.curve);
    } catch (const std::exception& e) {
      row.pfom = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  return report;
}

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out << "detector,blur,noise,poisson,pfom,ms\n";
  char buf[128];
  for (const BenchRow& r : rows) {
    std::string score;
    if (!std::isnan(r.pfom)) {
      std::snprintf(buf, sizeof buf, "%.6f", r.pfom);
      score = buf;
    }
    std::string ms;
    if (timing) {
      std::snprintf(buf, sizeof buf, "%.1f", r.ms);
      ms = buf;
    }
    std::snprintf(buf, sizeof buf, "%g,%g,%d,", r.blur, r.noise, r.poisson ? 1 : 0);
    out << r.detector << ',' << buf << score << ',' << ms << '\n';
  }
  return out.str();
}

std::string BenchReport::to_json() const {
  json rowsJson = json::array();
  for (const BenchRow& r : rows) {
    json row = {{"detector", r.detector}, {"blur", r.blur}, {"noise", r.noise}, {"poisson", r.poisson}};
    row["pfom"] = std::isnan(r.pfom) ? json(nullptr) : json(r.pfom);
    if (timing) row["ms"] = r.ms;
    if (!r.error.empty()) row["error"] = r.error;
    rowsJson.push_back(row);
  }
  json env = {{"coshrem", COSHREM_VERSION},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                            "." + std::to_string(EIGEN_MINOR_VERSION)},
              {"fftw", std::string(fftw_version)},
              {"compiler", __VERSION__},
              {"seed", seed},
              {"noiseGenerator", "std::mt19937_64 + std::normal_distribution / std::poisson_distribution"}};
  return json{{"environment", env}, {"rows", rowsJson}}.dump(2) + "\n";
}

CannyParams tuned_canny() {
  CannyParams p;
  p.sigma = 3.0;
  p.lowFrac = 0.38;
  p.highFrac = 0.95;
  return p;
}

std::vector<DetectorSpec> default_roster(PhantomMode mode) {
  std::vector<DetectorSpec> roster;
  DetectorSpec shearlet;
  shearlet.type = DetectorSpec::Type::Coshrem;
  if (mode == PhantomMode::Edge) {
    shearlet.name = "coshrem-edge";
    shearlet.coshrem = DetectionConfig::defaults(MeasureKind::Edge);
  } else {
    shearlet.name = "coshrem-ridge";
    shearlet.coshrem = DetectionConfig::defaults(MeasureKind::Ridge);
  }
  roster.push_back(shearlet);
  DetectorSpec tuned;
  tuned.name = "canny-tuned";
  tuned.type = DetectorSpec::Type::Canny;
  tuned.canny = tuned_canny();
  roster.push_back(tuned);
  DetectorSpec fallback;
  fallback.name = "canny-default";
  fallback.type = DetectorSpec::Type::Canny;
  fallback.canny = CannyParams::defaults();
  roster.push_back(fallback);
  DetectorSpec sob;
  sob.name = "sobel";
  sob.type = DetectorSpec::Type::Sobel;
  roster.push_back(sob);
  return roster;
}

BenchConfig parse_bench_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("bench config is not valid JSON: ") + e.what(), "config");
  }
  if (!j.is_object()) throw ParameterError("bench config must be a JSON object", "config");
  BenchConfig config;
  if (j.contains("phantom")) {
    const json& p = j["phantom"];
    if (p == "edge512") {
      config.phantom = edge512();
    } else if (p == "ridge512") {
      config.phantom = ridge512();
    } else if (p.is_object()) {
      config.phantom = parse_phantom_spec(p.dump());
    } else {
      throw ParameterError("phantom must be 'edge512', 'ridge512' or a phantom spec", "phantom");
    }
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    detail::read_field(g, "blur", config.blur);
    detail::read_field(g, "noise", config.noise);
    detail::read_field(g, "poisson", config.poisson);
    detail::read_field(g, "seed", config.seed);
  }
  detail::read_field(j, "timing", config.timing);
  if (!j.contains("detectors")) {
    config.detectors = default_roster(config.phantom.mode);
  } else {
    for (const json& d : j["detectors"]) {
      DetectorSpec spec;
      detail::read_field(d, "name", spec.name);
      std::string type = "coshrem";
      detail::read_field(d, "type", type);
      if (type == "coshrem") {
        spec.type = DetectorSpec::Type::Coshrem;
        json params = d;
        if (!params.contains("mode")) {
          params["mode"] = config.phantom.mode == PhantomMode::Edge ? "edge" : "ridge";
        }
        spec.coshrem = detail::detection_config_from_json(params);
      } else if (type == "canny") {
        spec.type = DetectorSpec::Type::Canny;
        spec.canny = d.value("tuned", false) ? tuned_canny() : detail::canny_from_json(d);
      } else if (type == "sobel") {
        spec.type = DetectorSpec::Type::Sobel;
        detail::read_field(d, "threshold", spec.sobelThreshold);
      } else {
        throw ParameterError("unknown detector type '" + type + "'", "type");
      }
      if (spec.name.empty()) spec.name = type;
      config.detectors.push_back(std::move(spec));
    }
  }
  config.validate();
  return config;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read bench config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_bench_config(buffer.str());
}

}  // namespace coshrem
