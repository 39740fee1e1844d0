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
#include "coshrem/phantoms.hpp"
#include "coshrem/pipeline.hpp"
#include "coshrem/service.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace coshrem;
using nlohmann::json;

namespace {

constexpr int kExitParameters = 1;
constexpr int kExitIo = 2;

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  if (!out) throw IoError("cannot write " + path.string());
}

std::optional<fs::path> default_cache_dir() {
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "coshrem";
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "coshrem";
  }
  return std::nullopt;
}

// Flags left unset keep the value from the config file or the mode defaults.
struct ConfigFlags {
  std::string mode;
  std::string config;
  std::optional<double> waveletSupport, gaussianSupport, octaves, alpha;
  std::optional<int> scalesPerOctave, shearLevel, padding;
  std::optional<double> minContrast, epsilonFactor, low, high;
  std::optional<std::vector<int>> pivotScales;
  std::optional<std::string> polarity;

  void add_to(CLI::App& app) {
    app.add_option("--mode", mode, "edge or ridge")->check(CLI::IsMember({"edge", "ridge"}));
    app.add_option("--config", config, "JSON parameter file")->check(CLI::ExistingFile);
    app.add_option("--wavelet-support", waveletSupport, "pixels")->group("System");
    app.add_option("--gaussian-support", gaussianSupport, "pixels")->group("System");
    app.add_option("--scales-per-octave", scalesPerOctave)->group("System");
    app.add_option("--octaves", octaves)->group("System");
    app.add_option("--shear-level", shearLevel)->group("System");
    app.add_option("--alpha", alpha)->group("System");
    app.add_option("--min-contrast", minContrast)->group("Detection");
    app.add_option("--epsilon-factor", epsilonFactor)->group("Detection");
    app.add_option("--pivot-scales", pivotScales, "empty list: all scales")
        ->group("Detection")
        ->delimiter(',');
    app.add_option("--polarity", polarity)
        ->group("Detection")
        ->check(CLI::IsMember({"positive", "negative", "both"}));
    app.add_option("--low", low, "hysteresis low threshold")->group("Postprocess");
    app.add_option("--high", high, "hysteresis high threshold")->group("Postprocess");
    app.add_option("--padding", padding, "reflective border, pixels")->group("Postprocess");
  }

  DetectionConfig resolve(const std::string& fallbackMode = "edge") const {
    json j = config.empty() ? json::object() : json::parse(read_text(config));
    if (!mode.empty()) {
      j["mode"] = mode;
    } else if (!j.contains("mode")) {
      j["mode"] = fallbackMode;
    }
    DetectionConfig c = parse_detection_config(j.dump());
    auto set = [](auto& target, const auto& flag) {
      if (flag) target = *flag;
    };
    set(c.system.waveletSupport, waveletSupport);
    set(c.system.gaussianSupport, gaussianSupport);
    set(c.system.scalesPerOctave, scalesPerOctave);
    set(c.system.octaves, octaves);
    set(c.system.shearLevel, shearLevel);
    set(c.system.alpha, alpha);
    set(c.detection.minContrast, minContrast);
    set(c.detection.epsilonFactor, epsilonFactor);
    set(c.detection.pivotScales, pivotScales);
    if (polarity) c.detection.polarity = parse_polarity(*polarity);
    set(c.thresholds.low, low);
    set(c.thresholds.high, high);
    set(c.padding, padding);
    c.validate();
    return c;
  }
};

PhantomSpec resolve_phantom(const std::string& spec) {
  if (spec == "edge512") return edge512();
  if (spec == "ridge512") return ridge512();
  return load_phantom_spec(spec);
}

int cmd_phantom(const std::string& spec, double blur, double noise, bool poisson,
                std::uint64_t seed, const fs::path& out, fs::path truth) {
  const Phantom ph = generate(resolve_phantom(spec));
  const GrayImage image = grid_cell_image(ph.image, blur, noise, poisson, seed, 0);
  if (truth.empty()) truth = fs::path(out).replace_extension(".truth.json");
  save_gray(image, out);
  write_bytes(truth, to_json(ph.truth));
  save_binary(ph.truth.curve, fs::path(truth).replace_extension(".png"));
  std::cout << out.string() << "\n" << truth.string() << "\n";
  return 0;
}

int cmd_detect(const fs::path& input, const fs::path& outDir, const ConfigFlags& flags,
               const std::string& cacheDir, bool noCache, double curvatureRange) {
  const GrayImage image = load_gray(input);
  const DetectionConfig config = flags.resolve();
  std::optional<fs::path> dir;
  if (!noCache) dir = cacheDir.empty() ? default_cache_dir() : fs::path(cacheDir);
  SystemCache cache(dir);
  const DetectionOutput out = run_detection(image, config, cache);

  fs::create_directories(outDir);
  save_unit_pgm16(out.measure.values, outDir / "measure.pgm");
  for (const std::string layer : {"overlay", "orientation", "curvature", "skeleton"}) {
    const auto png = layer_png(out, image, layer, curvatureRange);
    write_bytes(outDir / (layer + ".png"), std::string(png.begin(), png.end()));
  }
  long curvatureDefined = 0;
  for (Eigen::Index i = 0; i < out.curvature.degreesPerPixel.size(); ++i) {
    curvatureDefined += !std::isnan(out.curvature.degreesPerPixel.data()[i]);
  }
  json summary = {
      {"image", input.string()},
      {"width", image.cols()},
      {"height", image.rows()},
      {"params", json::parse(to_json(config))},
      {"cacheKey", out.cacheKey},
      {"cacheHit", out.cacheHit},
      {"pixels",
       {{"measureNonzero", (out.measure.values > 0.0).count()},
        {"detected", out.binary.count()},
        {"skeleton", out.skeleton.count()},
        {"curvatureDefined", curvatureDefined},
        {"curvatureSkipped", out.curvature.skipped.size()}}},
      {"timings",
       {{"system", out.cacheHit ? "reused" : "built"},
        {"systemMs", out.timings.systemMs},
        {"analysisMs", out.timings.analysisMs},
        {"postMs", out.timings.postMs}}}};
  write_bytes(outDir / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_bench(const std::string& configPath, const std::string& mode, const fs::path& outDir,
              bool timing, const std::string& cacheDir) {
  BenchConfig config;
  if (!configPath.empty()) {
    config = load_bench_config(configPath);
  } else {
    config.phantom = mode == "ridge" ? ridge512() : edge512();
    config.detectors = default_roster(config.phantom.mode);
  }
  config.timing = config.timing || timing;
  SystemCache cache(cacheDir.empty() ? std::nullopt : std::optional<fs::path>(cacheDir));
  const BenchReport report = run_grid(config, cache);
  fs::create_directories(outDir);
  write_bytes(outDir / "report.csv", report.to_csv());
  write_bytes(outDir / "report.json", report.to_json());
  std::cout << report.to_csv();
  return 0;
}

BinaryMap load_binary(const fs::path& path) { return load_gray(path) > 127.5; }

int cmd_pfom(const fs::path& detected, const fs::path& truth, double a) {
  std::cout << pfom(load_binary(detected), load_binary(truth), a) << "\n";
  return 0;
}

Service* g_service = nullptr;

int cmd_serve(const ServiceOptions& options) {
  Service service(options);
  const int port = service.bind();
  g_service = &service;
  std::signal(SIGINT, [](int) {
    if (g_service) g_service->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_service) g_service->stop();
  });
  std::cout << "listening on http://" << options.host << ":" << port << std::endl;
  service.listen();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex shearlet edge and ridge detection"};
  app.set_version_flag("--version", COSHREM_VERSION);
  app.require_subcommand(1);

  auto* phantom = app.add_subcommand("phantom", "Render a phantom with analytic ground truth");
  std::string spec = "edge512";
  double blur = 0.0, noise = 0.0;
  bool poisson = false;
  std::uint64_t seed = 1;
  fs::path phantomOut, truthOut;
  phantom->add_option("--spec", spec, "edge512, ridge512 or a JSON spec file");
  phantom->add_option("--blur", blur, "Gaussian blur sigma")->check(CLI::NonNegativeNumber);
  phantom->add_option("--noise", noise, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  phantom->add_flag("--poisson", poisson, "resample with Poisson noise after the Gaussian noise");
  phantom->add_option("--seed", seed);
  phantom->add_option("-o,--output", phantomOut, "image file (.pgm or .png)")->required();
  phantom->add_option("--truth", truthOut, "ground-truth JSON (default: image path with .truth.json)");

  auto* detect = app.add_subcommand("detect", "Detect edges or ridges in an image");
  fs::path input, outDir;
  ConfigFlags flags;
  std::string cacheDir;
  bool noCache = false;
  double curvatureRange = 5.0;
  detect->add_option("image", input, "grayscale PGM or PNG")->required();
  detect->add_option("-o,--output", outDir, "output directory")->required();
  flags.add_to(*detect);
  detect->add_option("--cache-dir", cacheDir, "shearlet system cache (default ~/.cache/coshrem)");
  detect->add_flag("--no-cache", noCache, "do not read or write the disk cache");
  detect->add_option("--curvature-range", curvatureRange, "degrees per pixel shown as dark red");

  auto* bench = app.add_subcommand("bench", "Score detectors over the corruption grid");
  std::string benchConfig, benchMode = "edge", benchCache;
  fs::path benchOut = ".";
  bool timing = false;
  bench->add_option("config", benchConfig, "bench JSON (default: full grid, default roster)");
  bench->add_option("--mode", benchMode, "phantom when no config is given")
      ->check(CLI::IsMember({"edge", "ridge"}));
  bench->add_option("-o,--output", benchOut, "directory for report.csv and report.json");
  bench->add_flag("--timing", timing, "record wall time per row");
  bench->add_option("--cache-dir", benchCache);

  auto* score = app.add_subcommand("pfom", "Pratt's figure of merit of a binary detection");
  fs::path detected, truth;
  double a = 1.0 / 9.0;
  score->add_option("detected", detected)->required()->check(CLI::ExistingFile);
  score->add_option("truth", truth)->required()->check(CLI::ExistingFile);
  score->add_option("-a", a, "scaling constant")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  ServiceOptions options;
  std::string serveCache;
  serve->add_option("--host", options.host);
  serve->add_option("--port", options.port, "0 picks a free port");
  serve->add_option("--cache-dir", serveCache);
  serve->add_option("--max-runs", options.maxRuns);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*phantom) return cmd_phantom(spec, blur, noise, poisson, seed, phantomOut, truthOut);
    if (*detect) return cmd_detect(input, outDir, flags, cacheDir, noCache, curvatureRange);
    if (*bench) return cmd_bench(benchConfig, benchMode, benchOut, timing, benchCache);
    if (*score) return cmd_pfom(detected, truth, a);
    if (*serve) {
      if (!serveCache.empty()) options.cacheDirectory = serveCache;
      return cmd_serve(options);
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameters;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameters;
  }
  return 0;
}
