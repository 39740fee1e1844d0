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

#include "coshrem/service.hpp"

#include "coshrem/bench.hpp"
#include "coshrem/phantoms.hpp"
#include "coshrem/pipeline.hpp"
#include "json_params.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <mutex>

namespace coshrem {
namespace {

using nlohmann::json;

struct Run {
  GrayImage image;
  std::optional<DetectionOutput> output;
};

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message, const std::string& field = {}) {
  json body = {{"code", code}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parameter(const char* name, const char* type, const char* group, json min, json max,
               json edge, json ridge, const char* description) {
  return {{"name", name},       {"type", type},   {"group", group},
          {"min", min},         {"max", max},     {"default", edge},
          {"defaults", {{"edge", edge}, {"ridge", ridge}}},
          {"description", description}};
}

json stats_of(const DetectionOutput& out) {
  const auto& m = out.measure.values;
  std::vector<double> curvature;
  for (Eigen::Index i = 0; i < out.curvature.degreesPerPixel.size(); ++i) {
    const double k = out.curvature.degreesPerPixel.data()[i];
    if (!std::isnan(k)) curvature.push_back(k);
  }
  json median = nullptr;
  if (!curvature.empty()) {
    std::nth_element(curvature.begin(), curvature.begin() + curvature.size() / 2, curvature.end());
    median = curvature[curvature.size() / 2];
  }
  return {{"width", m.cols()},
          {"height", m.rows()},
          {"measureMax", m.size() ? m.maxCoeff() : 0.0},
          {"measureMean", m.size() ? m.mean() : 0.0},
          {"measureNonzero", (m > 0.0).count()},
          {"detectedPixels", out.binary.count()},
          {"skeletonPixels", out.skeleton.count()},
          {"curvatureMedian", median},
          {"curvatureSkipped", out.curvature.skipped.size()}};
}

}  // namespace

std::string params_schema_json() {
  const DetectionConfig e = DetectionConfig::defaults(MeasureKind::Edge);
  const DetectionConfig r = DetectionConfig::defaults(MeasureKind::Ridge);
  json params = json::array();
  params.push_back(parameter("waveletSupport", "number", "system", 4.0, 512.0, e.system.waveletSupport,
                             r.system.waveletSupport,
                             "Across-edge support of the coarsest wavelet, pixels"));
  params.push_back(parameter("gaussianSupport", "number", "system", 2.0, 512.0,
                             e.system.gaussianSupport, r.system.gaussianSupport,
                             "Along-edge support of the coarsest window, pixels"));
  params.push_back(parameter("scalesPerOctave", "integer", "system", 1, 8, e.system.scalesPerOctave,
                             r.system.scalesPerOctave, "Scales per halving of the support"));
  params.push_back(parameter("octaves", "number", "system", 0.5, 8.0, e.system.octaves,
                             r.system.octaves, "Number of octaves spanned by the scales"));
  params.push_back(parameter("shearLevel", "integer", "system", 0, 4, e.system.shearLevel,
                             r.system.shearLevel, "2^(L+2) orientations per scale"));
  params.push_back(parameter("alpha", "number", "system", 0.0, 1.0, e.system.alpha, r.system.alpha,
                             "Anisotropy: 0 fully anisotropic, 1 isotropic"));
  params.push_back(parameter("minContrast", "number", "detection", 0.001, 10000.0,
                             e.detection.minContrast, r.detection.minContrast,
                             "Coefficient floor below which the measure is 0"));
  params.push_back(parameter("epsilonFactor", "number", "detection", 0.001, 100.0,
                             e.detection.epsilonFactor, r.detection.epsilonFactor,
                             "Denominator stabiliser as a multiple of minContrast"));
  json pivot = parameter("pivotScales", "integerList", "detection", 0, 15, e.detection.pivotScales,
                         r.detection.pivotScales, "Scales used to choose the pivot orientation");
  params.push_back(pivot);
  json polarity = parameter("polarity", "enum", "detection", nullptr, nullptr,
                            to_string(e.detection.polarity), to_string(r.detection.polarity),
                            "Keep positive, negative or both polarities");
  polarity["options"] = {"positive", "negative", "both"};
  params.push_back(polarity);
  params.push_back(parameter("low", "number", "postprocess", 0.0, 1.0, e.thresholds.low,
                             r.thresholds.low, "Hysteresis low threshold"));
  params.push_back(parameter("high", "number", "postprocess", 0.0, 1.0, e.thresholds.high,
                             r.thresholds.high, "Hysteresis high threshold"));
  return json{{"modes", {"edge", "ridge"}},
              {"groups", {"system", "detection", "postprocess"}},
              {"parameters", params},
              {"layers", {"measure", "overlay", "orientation", "curvature", "skeleton"}}}
      .dump(2);
}

struct Service::Impl {
  explicit Impl(ServiceOptions o) : options(std::move(o)), cache(options.cacheDirectory) {}

  std::string store(std::shared_ptr<const Run> run) {
    std::lock_guard<std::mutex> lock(mutex);
    char id[32];
    std::snprintf(id, sizeof id, "run-%06lu", ++counter);
    runs.emplace(id, std::move(run));
    order.push_back(id);
    while (order.size() > std::max<std::size_t>(1, options.maxRuns)) {
      runs.erase(order.front());
      order.pop_front();
    }
    return id;
  }

  std::shared_ptr<const Run> find(const std::string& id) {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = runs.find(id);
    return it == runs.end() ? nullptr : it->second;
  }

  void routes();
  void detect(const httplib::Request& req, httplib::Response& res);
  void phantom(const httplib::Request& req, httplib::Response& res);
  void result(const httplib::Request& req, httplib::Response& res);

  ServiceOptions options;
  httplib::Server server;
  SystemCache cache;
  std::mutex mutex;
  std::map<std::string, std::shared_ptr<const Run>> runs;
  std::deque<std::string> order;
  unsigned long counter = 0;
};

void Service::Impl::detect(const httplib::Request& req, httplib::Response& res) {
  json params = json::object();
  std::shared_ptr<const Run> source;
  GrayImage image;
  if (req.is_multipart_form_data()) {
    if (!req.has_file("image")) {
      send_error(res, 400, "missing_image", "multipart request needs an 'image' part", "image");
      return;
    }
    const std::string& bytes = req.get_file_value("image").content;
    image = decode_gray(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
    if (req.has_file("params")) params = json::parse(req.get_file_value("params").content);
  } else {
    const json body = json::parse(req.body.empty() ? "{}" : req.body);
    params = body.contains("params") ? body["params"] : body;
    std::string ref;
    detail::read_field(body, "imageRef", ref);
    if (ref.empty()) {
      send_error(res, 400, "missing_image", "send a multipart image or an imageRef", "imageRef");
      return;
    }
    source = find(ref);
    if (!source) {
      send_error(res, 404, "unknown_run", "no run '" + ref + "'", "imageRef");
      return;
    }
    image = source->image;
  }
  const DetectionConfig config = detail::detection_config_from_json(params);
  auto run = std::make_shared<Run>();
  run->image = image;
  run->output = run_detection(image, config, cache);
  const DetectionOutput& out = *run->output;
  json body = {{"stats", stats_of(out)},
               {"cacheHit", out.cacheHit},
               {"cacheKey", out.cacheKey},
               {"timings",
                {{"systemMs", out.timings.systemMs},
                 {"analysisMs", out.timings.analysisMs},
                 {"postMs", out.timings.postMs}}},
               {"params", detail::to_json(config)}};
  body["runId"] = store(std::move(run));
  res.set_content(body.dump(), "application/json");
}

void Service::Impl::phantom(const httplib::Request& req, httplib::Response& res) {
  const json body = json::parse(req.body.empty() ? "{}" : req.body);
  PhantomSpec spec = edge512();
  if (body.contains("spec")) {
    const json& s = body["spec"];
    if (s == "edge512") {
      spec = edge512();
    } else if (s == "ridge512") {
      spec = ridge512();
    } else if (s.is_object()) {
      spec = parse_phantom_spec(s.dump());
    } else {
      send_error(res, 400, "invalid_parameter", "spec must be 'edge512', 'ridge512' or an object",
                 "spec");
      return;
    }
  }
  double blur = 0.0, noise = 0.0;
  bool poisson = false;
  std::uint64_t seed = 1;
  if (body.contains("corruption")) {
    const json& c = body["corruption"];
    detail::read_field(c, "blur", blur);
    detail::read_field(c, "noise", noise);
    detail::read_field(c, "poisson", poisson);
    detail::read_field(c, "seed", seed);
  }
  const Phantom ph = generate(spec);
  auto run = std::make_shared<Run>();
  run->image = grid_cell_image(ph.image, blur, noise, poisson, seed, 0);
  json out = {{"width", spec.width},
              {"height", spec.height},
              {"mode", spec.mode == PhantomMode::Edge ? "edge" : "ridge"},
              {"groundTruthPixels", ph.truth.curve.count()}};
  out["runId"] = store(std::move(run));
  res.set_content(out.dump(), "application/json");
}

void Service::Impl::result(const httplib::Request& req, httplib::Response& res) {
  const std::string id = req.matches[1];
  const std::string layer = req.matches[2];
  const auto run = find(id);
  if (!run) {
    send_error(res, 404, "unknown_run", "no run '" + id + "'", "runId");
    return;
  }
  if (!run->output) {
    send_error(res, 404, "no_result", "run '" + id + "' holds an image but no detection", "runId");
    return;
  }
  if (std::find(std::begin(kLayers), std::end(kLayers), layer) == std::end(kLayers)) {
    send_error(res, 404, "unknown_layer", "unknown layer '" + layer + "'", "layer");
    return;
  }
  const auto png = layer_png(*run->output, run->image, layer);
  res.set_content(std::string(png.begin(), png.end()), "image/png");
}

void Service::Impl::routes() {
  auto guarded = [](auto handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const ParameterError& e) {
        send_error(res, 400, "invalid_parameter", e.what(), e.field());
      } catch (const IoError& e) {
        send_error(res, 400, "invalid_image", e.what());
      } catch (const json::exception& e) {
        send_error(res, 400, "invalid_json", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  };
  server.Get("/api/params/schema", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(params_schema_json(), "application/json");
  });
  server.Post("/api/detect",
              guarded([this](const httplib::Request& q, httplib::Response& r) { detect(q, r); }));
  server.Post("/api/phantom",
              guarded([this](const httplib::Request& q, httplib::Response& r) { phantom(q, r); }));
  server.Get(R"(/api/result/([^/]+)/([^/]+))",
             guarded([this](const httplib::Request& q, httplib::Response& r) { result(q, r); }));
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send_error(res, res.status, res.status == 404 ? "not_found" : "http_error",
                 "HTTP status " + std::to_string(res.status));
    }
  });
}

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->routes();
}

Service::~Service() { stop(); }

int Service::bind() {
  int port;
  if (impl_->options.port == 0) {
    port = impl_->server.bind_to_any_port(impl_->options.host);
  } else {
    port = impl_->server.bind_to_port(impl_->options.host, impl_->options.port)
               ? impl_->options.port
               : -1;
  }
  if (port < 0) {
    throw IoError("cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
  }
  return port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_) impl_->server.stop();
}

int Service::system_builds() const { return impl_->cache.builds(); }

}  // namespace coshrem
