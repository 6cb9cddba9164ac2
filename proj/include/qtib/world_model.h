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

#ifndef QTIB_WORLD_MODEL_H_
#define QTIB_WORLD_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtib {

// Ordered outcomes of the relevance variable Y.
struct OutcomeSpace {
  std::vector<std::string> labels;

  // {"free", "occupied"}: y = 0 is free space, y = 1 is occupied.
  static OutcomeSpace Occupancy();

  std::size_t size() const { return labels.size(); }
  // Throws ConfigError unless there are >= 2 unique, non-empty labels.
  void Validate() const;

  bool operator==(const OutcomeSpace&) const = default;
};

// Per-cell conditional p(y|x) over a width x height grid, row-major, row 0 at
// the top of the image.
struct OccupancyField {
  int width = 0;
  int height = 0;
  OutcomeSpace outcomes = OutcomeSpace::Occupancy();
  std::vector<double> cond;  // width * height * outcomes.size()

  std::span<const double> at(int row, int col) const {
    const std::size_t n = outcomes.size();
    return {cond.data() + (static_cast<std::size_t>(row) * width + col) * n, n};
  }
  // p(y = occupied | x), i.e. outcome index 1.
  double occupied(int row, int col) const { return at(row, col)[1]; }

  // Builds a binary field from per-cell occupancy probabilities.
  static OccupancyField FromOccupiedProbabilities(int width, int height,
                                                  std::span<const double> p);
};

// Non-negative per-cell weights, row-major.
struct WeightGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
};

struct PriorSpec {
  enum class Kind { kUniform, kGaussian, kExplicit };

  Kind kind = Kind::kUniform;
  // Gaussian: mean is (x, y) = (column, row) in cell units; cells are
  // evaluated at their centers (col + 0.5, row + 0.5).
  std::array<double, 2> mean{0.0, 0.0};
  std::array<std::array<double, 2>, 2> cov{{{1.0, 0.0}, {0.0, 1.0}}};
  // Explicit: weights are used verbatim (then normalized).
  WeightGrid weights;

  static PriorSpec Uniform();
  static PriorSpec Gaussian(std::array<double, 2> mean,
                            std::array<std::array<double, 2>, 2> cov);
  static PriorSpec Explicit(WeightGrid weights);
};

// Parses {"kind":"uniform"} | {"kind":"gaussian","mean":[mx,my],
// "cov":[[a,b],[b,c]]} | {"kind":"explicit","path":"weights.csv"}.
// Relative explicit paths are resolved against base_dir.
PriorSpec ParsePriorJson(std::string_view json,
                         const std::filesystem::path& base_dir = {});

OccupancyField LoadOccupancyPgm(std::span<const std::uint8_t> bytes);
OccupancyField LoadOccupancyCsv(std::string_view text);

// Weight CSV: rectangular, non-negative, not all zero.
WeightGrid LoadWeightCsv(std::string_view text);

enum class MapFormat { kPgm, kCsv };
// Format defaults to the file extension (.pgm/.csv).
OccupancyField LoadOccupancyFile(const std::filesystem::path& path,
                                 std::optional<MapFormat> format = {});

// Binary P5, maxval 255, pixel = round(255 * p(occupied)).
std::string EncodePgm(const OccupancyField& field);

// Per-cell weights summing to 1 (uniform, gaussian) or the explicit grid
// normalized to sum 1. Throws ConfigError for a covariance that is not
// symmetric positive definite or an explicit grid of the wrong size.
WeightGrid BuildPrior(const PriorSpec& spec, int width, int height);

// Finest-resolution joint model p(x, y) = p(y|x) p(x) on a 2^depth square.
// Immutable once assembled.
class WorldModel {
 public:
  int depth() const { return depth_; }
  int side() const { return 1 << depth_; }
  std::size_t cell_count() const { return prior_.size(); }
  int original_width() const { return original_width_; }
  int original_height() const { return original_height_; }
  const OutcomeSpace& outcomes() const { return outcomes_; }
  std::size_t num_outcomes() const { return outcomes_.size(); }

  // Row-major over side() x side().
  std::span<const double> prior() const { return prior_; }
  double prior_at(int row, int col) const {
    return prior_[static_cast<std::size_t>(row) * side() + col];
  }
  std::span<const double> cond_at(int row, int col) const {
    const std::size_t n = num_outcomes();
    return {cond_.data() + (static_cast<std::size_t>(row) * side() + col) * n,
            n};
  }
  std::span<const double> cond() const { return cond_; }

  bool operator==(const WorldModel&) const = default;

 private:
  friend WorldModel AssembleWorld(const OccupancyField& occ,
                                  const WeightGrid& prior);

  int depth_ = 0;
  int original_width_ = 0;
  int original_height_ = 0;
  OutcomeSpace outcomes_;
  std::vector<double> prior_;
  std::vector<double> cond_;
};

// Pads to the next power-of-two square with zero-mass cells (uniform
// conditional) and renormalizes the prior. Throws ConfigError on mismatched
// dimensions or an all-zero prior.
WorldModel AssembleWorld(const OccupancyField& occ, const WeightGrid& prior);

// Deterministic 128x128 map used by the demo and the reproduction suite:
// rooms, walls, soft-edged obstacles and a band of unexplored cells.
OccupancyField DemoOccupancyMap();

}  // namespace qtib

#endif  // QTIB_WORLD_MODEL_H_
