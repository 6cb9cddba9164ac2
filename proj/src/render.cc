/*
 * Copyright 2026 The qtib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qtib/render.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtib/error.h"

namespace qtib {
namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

constexpr Rgb kBorder{0, 0, 0};
constexpr Rgb kNoMass{128, 128, 128};

Rgb Shade(double occupied) {
  const double p = std::clamp(occupied, 0.0, 1.0);
  const auto gb = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - p)));
  return {255, gb, gb};
}

}  // namespace

std::string RenderAbstraction(const TreeAbstraction& tree,
                              const NodeStatsTable& stats, int scale) {
  if (scale < 1) throw DomainError("render scale must be >= 1");
  if (tree.depth_limit() != stats.depth_limit()) {
    throw DomainError("tree and statistics have different depth limits");
  }
  const int side = (1 << tree.depth_limit()) * scale;
  const std::string header =
      "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  std::string img(header.size() + static_cast<std::size_t>(side) * side * 3,
                  '\0');
  std::copy(header.begin(), header.end(), img.begin());
  auto put = [&](int y, int x, Rgb c) {
    const std::size_t o =
        header.size() + (static_cast<std::size_t>(y) * side + x) * 3;
    img[o] = static_cast<char>(c.r);
    img[o + 1] = static_cast<char>(c.g);
    img[o + 2] = static_cast<char>(c.b);
  };

  for (const NodeId leaf : Leaves(tree)) {
    const CellRegion reg = RegionOf(leaf, tree.depth_limit());
    const int y0 = reg.row0 * scale;
    const int x0 = reg.col0 * scale;
    const int n = reg.size * scale;
    const Rgb fill = stats.valid(leaf) && stats.num_outcomes() > 1
                         ? Shade(stats.cond(leaf)[1])
                         : kNoMass;
    for (int y = y0; y < y0 + n; ++y) {
      for (int x = x0; x < x0 + n; ++x) {
        const bool edge =
            y == y0 || x == x0 || y == y0 + n - 1 || x == x0 + n - 1;
        put(y, x, edge ? kBorder : fill);
      }
    }
  }
  return img;
}

}  // namespace qtib
