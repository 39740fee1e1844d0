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

#include "json_params.hpp"

namespace coshrem::detail {

using nlohmann::json;

MeasureKind parse_mode(const std::string& mode) {
  if (mode == "edge") return MeasureKind::Edge;
  if (mode == "ridge") return MeasureKind::Ridge;
  throw ParameterError("mode must be 'edge' or 'ridge' (got '" + mode + "')", "mode");
}

std::string to_string(MeasureKind mode) { return mode == MeasureKind::Edge ? "edge" : "ridge"; }

DetectionConfig detection_config_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("detection parameters must be a JSON object", "params");
  std::string mode = "edge";
  read_field(j, "mode", mode);
  DetectionConfig c = DetectionConfig::defaults(parse_mode(mode));
  if (j.contains("system")) {
    const json& s = j["system"];
    read_field(s, "waveletSupport", c.system.waveletSupport);
    read_field(s, "gaussianSupport", c.system.gaussianSupport);
    read_field(s, "scalesPerOctave", c.system.scalesPerOctave);
    read_field(s, "octaves", c.system.octaves);
    read_field(s, "shearLevel", c.system.shearLevel);
    read_field(s, "alpha", c.system.alpha);
  }
  if (j.contains("detection")) {
    const json& d = j["detection"];
    read_field(d, "minContrast", c.detection.minContrast);
    read_field(d, "epsilonFactor", c.detection.epsilonFactor);
    read_field(d, "pivotScales", c.detection.pivotScales);
    std::string polarity = to_string(c.detection.polarity);
    read_field(d, "polarity", polarity);
    c.detection.polarity = parse_polarity(polarity);
  }
  if (j.contains("thresholds")) {
    read_field(j["thresholds"], "low", c.thresholds.low);
    read_field(j["thresholds"], "high", c.thresholds.high);
  }
  read_field(j, "padding", c.padding);
  c.validate();
  return c;
}

json to_json(const DetectionConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"system",
           {{"waveletSupport", c.system.waveletSupport},
            {"gaussianSupport", c.system.gaussianSupport},
            {"scalesPerOctave", c.system.scalesPerOctave},
            {"octaves", c.system.octaves},
            {"shearLevel", c.system.shearLevel},
            {"alpha", c.system.alpha}}},
          {"detection",
           {{"minContrast", c.detection.minContrast},
            {"epsilonFactor", c.detection.epsilonFactor},
            {"pivotScales", c.detection.pivotScales},
            {"polarity", to_string(c.detection.polarity)}}},
          {"thresholds", {{"low", c.thresholds.low}, {"high", c.thresholds.high}}},
          {"padding", c.padding}};
}

CannyParams canny_from_json(const json& j) {
  CannyParams p;
  read_field(j, "auto", p.automatic);
  if (p.automatic) p = CannyParams::defaults();
  read_field(j, "sigma", p.sigma);
  read_field(j, "lowFrac", p.lowFrac);
  read_field(j, "highFrac", p.highFrac);
  p.validate();
  return p;
}

json to_json(const CannyParams& p) {
  if (p.automatic) return {{"auto", true}};
  return {{"sigma", p.sigma}, {"lowFrac", p.lowFrac}, {"highFrac", p.highFrac}};
}

}  // namespace coshrem::detail

namespace coshrem {

DetectionConfig parse_detection_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError(std::string("parameters are not valid JSON: ") + e.what(), "params");
  }
  return detail::detection_config_from_json(j);
}

std::string to_json(const DetectionConfig& config) { return detail::to_json(config).dump(2); }

}  // namespace coshrem
