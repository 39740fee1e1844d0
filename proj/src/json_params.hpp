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

#ifndef COSHREM_SRC_JSON_PARAMS_HPP_
#define COSHREM_SRC_JSON_PARAMS_HPP_

#include "coshrem/baselines.hpp"
#include "coshrem/pipeline.hpp"

#include <json.hpp>

namespace coshrem::detail {

/// Reads a JSON field into `value` when present. Type errors become
/// ParameterError naming the field.
template <typename T>
void read_field(const nlohmann::json& j, const char* field, T& value) {
  if (!j.is_object() || !j.contains(field) || j.at(field).is_null()) return;
  try {
    value = j.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParameterError(std::string("field '") + field + "' has the wrong type", field);
  }
}

MeasureKind parse_mode(const std::string& mode);
std::string to_string(MeasureKind mode);

/// {mode, system{...}, detection{...}, thresholds{low, high}, padding}; absent
/// fields keep the defaults of the mode.
DetectionConfig detection_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DetectionConfig& config);

CannyParams canny_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CannyParams& params);

}  // namespace coshrem::detail

#endif  // COSHREM_SRC_JSON_PARAMS_HPP_
