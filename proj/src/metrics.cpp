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

#include "coshrem/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace coshrem {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1D squared distance transform of f (lower envelope of parabolas).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (f[v[k]] == kInf) {
      v[k] = q;
      continue;
    }
    double s;
    while (true) {
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = f[v[k]] == kInf ? kInf : dq * dq + f[v[k]];
  }
}

}  // namespace

Image<double> distance_transform(const BinaryMap& reference) {
  if (!reference.any()) throw ParameterError("distance transform of an empty map", "reference");
  const int rows = static_cast<int>(reference.rows()), cols = static_cast<int>(reference.cols());
  Image<double> sq(rows, cols);
  const int n = std::max(rows, cols);
  std::vector<double> f, d;
  std::vector<int> v(n);
  std::vector<double> z(n + 1);

  f.resize(rows);
  d.resize(rows);
  for (int x = 0; x < cols; ++x) {
    for (int y = 0; y < rows; ++y) f[y] = reference(y, x) ? 0.0 : kInf;
    edt_1d(f, d, v, z);
    for (int y = 0; y < rows; ++y) sq(y, x) = d[y];
  }
  f.resize(cols);
  d.resize(cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) f[x] = sq(y, x);
    edt_1d(f, d, v, z);
    for (int x = 0; x < cols; ++x) sq(y, x) = d[x];
  }
  return sq.sqrt();
}

double pfom(const BinaryMap& detected, const BinaryMap& truth, double a) {
  require_same_size(detected, truth, "pfom");
  if (!(a > 0.0)) throw ParameterError("PFOM constant a must be > 0", "a");
  const long nd = detected.count();
  const long nt = truth.count();
  if (nd == 0 && nt == 0) return 1.0;
  if (nd == 0 || nt == 0) return 0.0;
  const Image<double> dist = distance_transform(truth);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < detected.size(); ++i) {
    if (detected.data()[i]) sum += 1.0 / (1.0 + a * dist.data()[i] * dist.data()[i]);
  }
  return sum / static_cast<double>(std::max(nd, nt));
}

}  // namespace coshrem
