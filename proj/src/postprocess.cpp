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

#include "coshrem/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

namespace coshrem {
namespace {

constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};   // E NE N NW W SW S SE
constexpr std::array<int, 8> kDy = {0, -1, -1, -1, 0, 1, 1, 1};

bool on(const BinaryMap& map, int x, int y) {
  return x >= 0 && y >= 0 && x < map.cols() && y < map.rows() && map(y, x);
}

std::array<bool, 8> ring(const BinaryMap& map, int x, int y) {
  std::array<bool, 8> n{};
  for (int k = 0; k < 8; ++k) n[k] = on(map, x + kDx[k], y + kDy[k]);
  return n;
}

/// Yokoi connectivity number for 8-connected foreground.
int connectivity8(const std::array<bool, 8>& n) {
  int count = 0;
  for (int k = 0; k < 8; k += 2) {
    const bool a = !n[k], b = !n[(k + 1) % 8], c = !n[(k + 2) % 8];
    count += a - (a && b && c);
  }
  return count;
}

bool guo_hall_pass(BinaryMap& img, int iter) {
  std::vector<std::pair<int, int>> marked;
  for (int y = 0; y < img.rows(); ++y) {
    for (int x = 0; x < img.cols(); ++x) {
      if (!img(y, x)) continue;
      const auto n = ring(img, x, y);
      const int p2 = n[2], p3 = n[1], p4 = n[0], p5 = n[7], p6 = n[6], p7 = n[5], p8 = n[4], p9 = n[3];
      const int c = (!p2 && (p3 || p4)) + (!p4 && (p5 || p6)) + (!p6 && (p7 || p8)) + (!p8 && (p9 || p2));
      const int n1 = (p9 || p2) + (p3 || p4) + (p5 || p6) + (p7 || p8);
      const int n2 = (p2 || p3) + (p4 || p5) + (p6 || p7) + (p8 || p9);
      const int nn = std::min(n1, n2);
      const int m = iter == 0 ? ((p6 || p7 || !p9) && p8) : ((p2 || p3 || !p5) && p4);
      if (c == 1 && nn >= 2 && nn <= 3 && m == 0) marked.emplace_back(x, y);
    }
  }
  for (auto [x, y] : marked) img(y, x) = false;
  return !marked.empty();
}

bool remove_staircases(BinaryMap& img) {
  bool changed = false;
  for (int y = 0; y < img.rows(); ++y) {
    for (int x = 0; x < img.cols(); ++x) {
      if (!img(y, x)) continue;
      const auto n = ring(img, x, y);
      const bool e = n[0], north = n[2], w = n[4], s = n[6];
      const bool corner = (north && e) || (e && s) || (s && w) || (w && north);
      const auto count = std::count(n.begin(), n.end(), true);
      // Two touching neighbours make the pixel a blunt tip.
      if (count < 2 || !(corner || count == 2)) continue;
      if (connectivity8(n) == 1) {
        img(y, x) = false;
        changed = true;
      }
    }
  }
  return changed;
}

}  // namespace

int neighbour_count(const BinaryMap& map, int x, int y) {
  int count = 0;
  for (int k = 0; k < 8; ++k) count += on(map, x + kDx[k], y + kDy[k]);
  return count;
}

BinaryMap hysteresis(const Image<double>& values, double low, double high) {
  const int rows = static_cast<int>(values.rows()), cols = static_cast<int>(values.cols());
  BinaryMap out = BinaryMap::Constant(rows, cols, false);
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (values(y, x) >= high && values(y, x) >= low) {
        out(y, x) = true;
        queue.emplace_back(x, y);
      }
    }
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (int k = 0; k < 8; ++k) {
      const int nx = x + kDx[k], ny = y + kDy[k];
      if (nx < 0 || ny < 0 || nx >= cols || ny >= rows || out(ny, nx)) continue;
      if (values(ny, nx) >= low) {
        out(ny, nx) = true;
        queue.emplace_back(nx, ny);
      }
    }
  }
  return out;
}

BinaryMap hysteresis_threshold(const MeasureMap& measure, double low, double high) {
  if (!(low >= 0.0)) throw ParameterError("low threshold must be >= 0", "low");
  if (!(low <= high)) throw ParameterError("low threshold exceeds high threshold", "low");
  return hysteresis(measure.values, low, high);
}

namespace {

// Thinning erodes every branch end by about half the stroke width. Walk each
// endpoint back along its own direction while the original region continues
// and the new pixel touches nothing but the end it extends.
void extend_endpoints(BinaryMap& img, const BinaryMap& region) {
  const int rows = static_cast<int>(img.rows()), cols = static_cast<int>(img.cols());
  std::vector<Pixel> ends;
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (img(y, x) && neighbour_count(img, x, y) == 1) ends.push_back({x, y});
    }
  }
  for (Pixel p : ends) {
    if (neighbour_count(img, p.x, p.y) != 1) continue;
    Pixel q{};
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx || dy) && on(img, p.x + dx, p.y + dy)) q = {p.x + dx, p.y + dy};
      }
    }
    const int dx = p.x - q.x, dy = p.y - q.y;
    while (true) {
      const Pixel n{p.x + dx, p.y + dy};
      if (!on(region, n.x, n.y) || img(n.y, n.x)) break;
      if (neighbour_count(img, n.x, n.y) != 1) break;
      img(n.y, n.x) = true;
      p = n;
    }
  }
}

}  // namespace

BinaryMap thin(const BinaryMap& binary) {
  BinaryMap img = binary;
  bool changed = true;
  while (changed) {
    changed = guo_hall_pass(img, 0);
    changed = guo_hall_pass(img, 1) || changed;
  }
  while (remove_staircases(img)) {
  }
  extend_endpoints(img, binary);
  return img;
}

std::vector<CurveChain> trace_curves(const BinaryMap& skeleton) {
  const int rows = static_cast<int>(skeleton.rows()), cols = static_cast<int>(skeleton.cols());
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (skeleton(y, x) && neighbour_count(skeleton, x, y) == 8) {
        throw ParameterError("skeleton is not thin: interior pixel at (" + std::to_string(x) +
                                 ", " + std::to_string(y) + ")",
                             "skeleton");
      }
    }
  }

  Image<int> degree = Image<int>::Zero(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (skeleton(y, x)) degree(y, x) = neighbour_count(skeleton, x, y);
    }
  }
  auto plain = [&](int x, int y) { return on(skeleton, x, y) && degree(y, x) < 3; };

  std::vector<CurveChain> chains;
  BinaryMap used = BinaryMap::Constant(rows, cols, false);
  auto walk = [&](int x, int y, bool closed) {
    CurveChain chain;
    chain.closed = closed;
    while (true) {
      used(y, x) = true;
      chain.pixels.push_back({x, y});
      bool advanced = false;
      for (int k = 0; k < 8 && !advanced; ++k) {
        const int nx = x + kDx[k], ny = y + kDy[k];
        if (plain(nx, ny) && !used(ny, nx)) {
          x = nx;
          y = ny;
          advanced = true;
        }
      }
      if (!advanced) break;
    }
    chains.push_back(std::move(chain));
  };

  auto plain_degree = [&](int x, int y) {
    int d = 0;
    for (int k = 0; k < 8; ++k) d += plain(x + kDx[k], y + kDy[k]);
    return d;
  };
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (plain(x, y) && !used(y, x) && plain_degree(x, y) < 2) walk(x, y, false);
    }
  }
  // Remaining plain pixels lie on cycles. A cycle touching a junction is open.
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (plain(x, y) && !used(y, x)) {
        const std::size_t first = chains.size();
        walk(x, y, true);
        for (const Pixel& p : chains[first].pixels) {
          if (degree(p.y, p.x) != plain_degree(p.x, p.y)) chains[first].closed = false;
        }
      }
    }
  }

  auto adjacent = [](const Pixel& a, const Pixel& b) {
    return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1 && !(a == b);
  };
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      if (!skeleton(y, x) || degree(y, x) < 3) continue;
      const Pixel j{x, y};
      bool attached = false;
      for (CurveChain& chain : chains) {
        if (chain.closed) continue;
        if (adjacent(chain.pixels.back(), j)) {
          chain.pixels.push_back(j);
          attached = true;
        } else if (adjacent(chain.pixels.front(), j)) {
          chain.pixels.insert(chain.pixels.begin(), j);
          attached = true;
        }
        if (attached) break;
      }
      if (!attached) chains.push_back({{j}, false});
    }
  }
  return chains;
}

}  // namespace coshrem
