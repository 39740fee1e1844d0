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

#include "coshrem/pipeline.hpp"

#include "coshrem/postprocess.hpp"

#include <chrono>
#include <limits>

namespace coshrem {
namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

template <typename T>
Image<T> crop(const Image<T>& image, int border, int width, int height) {
  if (border == 0) return image;
  return image.block(border, border, height, width);
}

}  // namespace

DetectionConfig DetectionConfig::defaults(MeasureKind mode) {
  DetectionConfig c;
  c.mode = mode;
  c.system.waveletSupport = 80.0;
  c.system.gaussianSupport = 40.0;
  c.system.scalesPerOctave = 2;
  c.system.octaves = 3.5;
  c.system.shearLevel = 3;
  c.detection.epsilonFactor = 0.5;
  c.detection.pivotScales = {2, 3, 4};
  c.thresholds = {0.3, 0.6};
  if (mode == MeasureKind::Edge) {
    c.system.alpha = 0.5;
    c.detection.minContrast = 100.0;
    c.detection.polarity = Polarity::Both;
  } else {
    c.system.alpha = 0.8;
    c.detection.minContrast = 250.0;
    c.detection.polarity = Polarity::Positive;
  }
  return c;
}

void DetectionConfig::validate() const {
  system.validate();
  detection.validate(system.scale_count());
  if (!(thresholds.low >= 0.0)) throw ParameterError("low threshold must be >= 0", "low");
  if (!(thresholds.high <= 1.0)) throw ParameterError("high threshold must be <= 1", "high");
  if (!(thresholds.low <= thresholds.high)) {
    throw ParameterError("low threshold exceeds high threshold", "low");
  }
  if (padding < 0) throw ParameterError("padding must be >= 0", "padding");
}

SystemCache::SystemCache(std::optional<std::filesystem::path> directory, std::size_t capacity)
    : directory_(std::move(directory)), capacity_(std::max<std::size_t>(1, capacity)) {
  if (directory_) std::filesystem::create_directories(*directory_);
}

std::shared_ptr<const ShearletSystem> SystemCache::get(const SystemParams& params, int width,
                                                       int height, bool* hit) {
  params.validate();
  const std::string key = cache_key(params, width, height);
  std::promise<std::shared_ptr<const ShearletSystem>> promise;
  Entry entry;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    lastUse_[key] = ++clock_;
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      entry = it->second;
    } else {
      while (entries_.size() >= capacity_) {
        // Evict the least recently used finished entry.
        std::string victim;
        unsigned long oldest = ~0ul;
        for (const auto& [k, e] : entries_) {
          if (e.wait_for(std::chrono::seconds(0)) == std::future_status::ready && lastUse_[k] < oldest) {
            oldest = lastUse_[k];
            victim = k;
          }
        }
        if (victim.empty()) break;
        entries_.erase(victim);
        lastUse_.erase(victim);
      }
      entry = promise.get_future().share();
      entries_.emplace(key, entry);
      owner = true;
    }
  }
  if (!owner) {
    if (hit) *hit = true;
    return entry.get();
  }

  try {
    std::shared_ptr<const ShearletSystem> system;
    bool loaded = false;
    if (directory_) {
      const auto file = *directory_ / (key + ".shs");
      if (std::filesystem::exists(file)) {
        try {
          system = std::make_shared<const ShearletSystem>(load_system(file));
          loaded = system->cache_key() == key;
          if (!loaded) system.reset();
        } catch (const IoError&) {
        }
      }
    }
    if (!system) {
      system = std::make_shared<const ShearletSystem>(build_system(params, width, height));
      if (directory_) save_system(*system, *directory_ / (key + ".shs"));
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!loaded) ++builds_;
    }
    promise.set_value(system);
    if (hit) *hit = loaded;
    return system;
  } catch (...) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      entries_.erase(key);
    }
    promise.set_exception(std::current_exception());
    throw;
  }
}

int SystemCache::builds() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return builds_;
}

std::size_t SystemCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

DetectionOutput run_detection(const GrayImage& image, const DetectionConfig& config,
                              SystemCache& cache) {
  config.validate();
  const int width = static_cast<int>(image.cols()), height = static_cast<int>(image.rows());
  const GrayImage padded = pad_reflect(image, config.padding);

  DetectionOutput out;
  auto start = std::chrono::steady_clock::now();
  const auto system = cache.get(config.system, static_cast<int>(padded.cols()),
                                static_cast<int>(padded.rows()), &out.cacheHit);
  out.cacheKey = system->cache_key();
  out.timings.systemMs = elapsed_ms(start);

  start = std::chrono::steady_clock::now();
  const Analyzer analyzer(*system, padded);
  MeasureResult result = config.mode == MeasureKind::Edge
                              ? edge_measure(analyzer, config.detection)
                              : ridge_measure(analyzer, config.detection);
  out.timings.analysisMs = elapsed_ms(start);

  start = std::chrono::steady_clock::now();
  const OrientationMap orientation = orientation_map(result.measure, result.pivot, *system);
  const int b = config.padding;
  out.measure.kind = config.mode;
  out.measure.values = crop(result.measure.values, b, width, height);
  out.orientation.degrees = crop(orientation.degrees, b, width, height);
  out.binary = hysteresis_threshold(out.measure, config.thresholds.low, config.thresholds.high);
  out.skeleton = thin(out.binary);
  out.curvature = curvature_along(out.skeleton, out.orientation);
  out.timings.postMs = elapsed_ms(start);
  return out;
}

OrientationMap skeleton_orientation(const DetectionOutput& output) {
  OrientationMap out;
  out.degrees = output.skeleton.select(output.orientation.degrees,
                                       std::numeric_limits<double>::quiet_NaN());
  return out;
}

std::vector<std::uint8_t> layer_png(const DetectionOutput& output, const GrayImage& image,
                                    const std::string& layer, double curvatureRange) {
  if (layer == "measure") return encode_png(to_bytes_unit(output.measure.values));
  if (layer == "skeleton") return encode_png(to_bytes(output.skeleton));
  if (layer == "overlay") return encode_png(render_overlay(image, output.skeleton));
  if (layer == "orientation") return encode_png(render_anglemap(skeleton_orientation(output)));
  if (layer == "curvature") return encode_png(render_anglemap(output.curvature, curvatureRange));
  throw ParameterError("unknown layer '" + layer +
                           "' (expected measure, overlay, orientation, curvature or skeleton)",
                       "layer");
}

}  // namespace coshrem
