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

#ifndef COSHREM_PIPELINE_HPP_
#define COSHREM_PIPELINE_HPP_

#include "coshrem/measures.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace coshrem {

/// Hysteresis thresholds as fractions of the maximal measure value.
struct Thresholds {
  double low = 0.3;
  double high = 0.6;
};

/// Everything needed to turn an image into a thin detection.
struct DetectionConfig {
  MeasureKind mode = MeasureKind::Edge;
  SystemParams system;
  DetectionParams detection;
  Thresholds thresholds;
  /// Reflective border added before the (periodic) transform and cropped
  /// afterwards. 0 keeps pure circular semantics.
  int padding = 0;

  /// Fixed parameter sets used throughout the benchmarks.
  static DetectionConfig defaults(MeasureKind mode);
  void validate() const;
};

struct DetectionTimings {
  double systemMs = 0.0;    ///< building (or fetching) the shearlet system
  double analysisMs = 0.0;  ///< transform and measure
  double postMs = 0.0;      ///< thresholds, thinning, orientation, curvature
};

struct DetectionOutput {
  MeasureMap measure;
  OrientationMap orientation;
  BinaryMap binary;    ///< after hysteresis
  BinaryMap skeleton;  ///< after thinning
  CurvatureMap curvature;
  bool cacheHit = false;
  std::string cacheKey;
  DetectionTimings timings;
};

/// Thread-safe store of shearlet systems keyed by cache_key. Concurrent
/// requests for the same key build it once; other callers wait for it. With
/// a directory, systems are also persisted and reloaded across processes.
class SystemCache {
 public:
  explicit SystemCache(std::optional<std::filesystem::path> directory = std::nullopt,
                       std::size_t capacity = 4);

  /// `hit` is set to false only for the call that constructed the system.
  std::shared_ptr<const ShearletSystem> get(const SystemParams& params, int width, int height,
                                            bool* hit = nullptr);

  int builds() const;
  std::size_t size() const;

 private:
  using Entry = std::shared_future<std::shared_ptr<const ShearletSystem>>;
  std::optional<std::filesystem::path> directory_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::map<std::string, Entry> entries_;
  std::map<std::string, unsigned long> lastUse_;
  unsigned long clock_ = 0;
  int builds_ = 0;
};

/// JSON form {mode, system{...}, detection{...}, thresholds{low, high},
/// padding}. Absent fields keep the defaults of the mode.
DetectionConfig parse_detection_config(const std::string& json);
std::string to_json(const DetectionConfig& config);

DetectionOutput run_detection(const GrayImage& image, const DetectionConfig& config,
                              SystemCache& cache);

/// Result layers served and written by the tools.
inline constexpr const char* kLayers[] = {"measure", "overlay", "orientation", "curvature",
                                          "skeleton"};

/// PNG of one layer: measure and skeleton in gray, the skeleton over the
/// brightened image for "overlay", and orientation / curvature colour-coded
/// on skeleton pixels. Throws ParameterError for an unknown layer.
std::vector<std::uint8_t> layer_png(const DetectionOutput& output, const GrayImage& image,
                                    const std::string& layer, double curvatureRange = 5.0);

/// Orientation restricted to the skeleton (NaN elsewhere).
OrientationMap skeleton_orientation(const DetectionOutput& output);

}  // namespace coshrem

#endif  // COSHREM_PIPELINE_HPP_
