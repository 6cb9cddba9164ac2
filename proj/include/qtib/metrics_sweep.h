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

#ifndef QTIB_METRICS_SWEEP_H_
#define QTIB_METRICS_SWEEP_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qtib/info_measures.h"
#include "qtib/search.h"
#include "qtib/world_model.h"

namespace qtib {

// One solved abstraction on the information plane. i_xy and h_x are world
// constants carried on every row so plots can normalize.
struct InfoPlanePoint {
  double beta = 0.0;
  Algorithm algorithm = Algorithm::kQTree;
  std::size_t leaf_count = 1;
  double i_tx = 0.0;
  double i_ty = 0.0;
  double objective = 0.0;
  double i_xy = 0.0;
  double h_x = 0.0;
};

// A point plus the tree that produced it.
struct SweepEntry {
  InfoPlanePoint point;
  SearchResult result;
};

// Solves every (beta, algorithm) pair from the root-only tree. Node
// statistics are computed once; the Q table once per beta. Betas run
// concurrently. Output is ordered by beta, then greedy before qtree.
// Throws DomainError for an empty, non-increasing or non-positive grid.
std::vector<SweepEntry> RunSweep(const WorldModel& world,
                                 const std::vector<double>& betas,
                                 const std::set<Algorithm>& algorithms);

// Points only.
std::vector<InfoPlanePoint> BetaSweep(const WorldModel& world,
                                      const std::vector<double>& betas,
                                      const std::set<Algorithm>& algorithms);

// Same as RunSweep with stats already at hand.
std::vector<SweepEntry> RunSweep(const WorldModel& world,
                                 const NodeStatsTable& stats,
                                 const std::vector<double>& betas,
                                 const std::set<Algorithm>& algorithms);

inline constexpr std::string_view kMetricsHeader =
    "beta,algorithm,leaf_count,i_tx_bits,i_ty_bits,objective_bits,i_xy_bits,"
    "h_x_bits";

// Header plus one row per point, sorted by (algorithm, beta), numbers with
// 12 significant digits.
std::string EmitMetricsCsv(std::vector<InfoPlanePoint> points);
// Inverse of EmitMetricsCsv. Throws ParseError on malformed input.
std::vector<InfoPlanePoint> ParseMetricsCsv(std::string_view text);

// 12 significant digits, "%.12g".
std::string FormatNumber(double v);

// n log-spaced values from lo to hi inclusive.
std::vector<double> LogSpacedBetas(double lo, double hi, std::size_t n);

}  // namespace qtib

#endif  // QTIB_METRICS_SWEEP_H_
