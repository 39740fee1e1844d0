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

#ifndef COSHREM_BENCH_HPP_
#define COSHREM_BENCH_HPP_

#include "coshrem/baselines.hpp"
#include "coshrem/phantoms.hpp"
#include "coshrem/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace coshrem {

/// One detector of the roster with its fixed parameters.
struct DetectorSpec {
  enum class Type { Coshrem, Canny, Sobel };
  std::string name;
  Type type = Type::Coshrem;
  DetectionConfig coshrem;
  CannyParams canny;
  double sobelThreshold = 0.2;
};

/// Phantom, corruption grid and detector roster.
struct BenchConfig {
  PhantomSpec phantom = edge512();
  std::vector<double> blur{kBlurLevels.begin(), kBlurLevels.end()};
  std::vector<double> noise{kNoiseLevels.begin(), kNoiseLevels.end()};
  std::vector<bool> poisson{false};
  std::uint64_t seed = 1;
  std::vector<DetectorSpec> detectors;
  /// Record wall time per row. Off by default so reports are byte-identical.
  bool timing = false;

  void validate() const;
};

struct BenchRow {
  std::string detector;
  double blur = 0.0;
  double noise = 0.0;
  bool poisson = false;
  double pfom = 0.0;  ///< NaN when the detector failed
  double ms = 0.0;
  std::string error;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::uint64_t seed = 0;
  bool timing = false;

  /// Header "detector,blur,noise,poisson,pfom,ms"; ms is empty unless timed.
  std::string to_csv() const;
  /// Rows plus an environment stamp (library versions, seed).
  std::string to_json() const;
};

/// The image of one grid cell: blur, Gaussian noise seeded with
/// cell_seed(seed, cellIndex), then optionally Poisson resampling seeded with
/// cell_seed(seed ^ kPoissonSalt, cellIndex).
GrayImage grid_cell_image(const GrayImage& phantom, double blur, double noise, bool poisson,
                          std::uint64_t seed, std::uint64_t cellIndex);
inline constexpr std::uint64_t kPoissonSalt = 0x9e3779b97f4a7c15ull;

/// Thin binary output of one detector.
BinaryMap run_detector(const DetectorSpec& detector, const GrayImage& image, SystemCache& cache);

/// Scores every detector on every cell. Rows are ordered by detector (roster
/// order), poisson, blur, noise.
BenchReport run_grid(const BenchConfig& config, SystemCache& cache);

/// Tuned Canny parameters used by the default roster.
CannyParams tuned_canny();

/// CoShREM in the matching mode, tuned Canny, default Canny and Sobel.
std::vector<DetectorSpec> default_roster(PhantomMode mode);

BenchConfig parse_bench_config(const std::string& json);
BenchConfig load_bench_config(const std::filesystem::path& path);

}  // namespace coshrem

#endif  // COSHREM_BENCH_HPP_
