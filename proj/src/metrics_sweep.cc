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

#include "qtib/metrics_sweep.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <tuple>

#include "qtib/error.h"

namespace qtib {
namespace {

void CheckBetaGrid(const std::vector<double>& betas) {
  if (betas.empty()) throw DomainError("beta grid is empty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    Beta check(betas[i]);
    if (i > 0 && !(betas[i] > betas[i - 1])) {
      throw DomainError("beta grid must be strictly increasing");
    }
  }
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(',', start);
    out.push_back(line.substr(start, end == std::string_view::npos
                                         ? std::string_view::npos
                                         : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <typename T>
T ParseField(std::string_view s, std::size_t line, const char* name) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("metrics CSV line " + std::to_string(line) + ": bad " +
                     name + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<SweepEntry> RunSweep(const WorldModel& world,
                                 const std::vector<double>& betas,
                                 const std::set<Algorithm>& algorithms) {
  CheckBetaGrid(betas);
  return RunSweep(world, ComputeNodeStats(world), betas, algorithms);
}

std::vector<SweepEntry> RunSweep(const WorldModel& world,
                                 const NodeStatsTable& stats,
                                 const std::vector<double>& betas,
                                 const std::set<Algorithm>& algorithms) {
  CheckBetaGrid(betas);
  if (algorithms.empty()) throw DomainError("no algorithm selected");
  const WorldInformation winfo = ComputeWorldInformation(world);
  const std::vector<Algorithm> algos(algorithms.begin(), algorithms.end());
  const TreeAbstraction root(world.depth());

  std::vector<SweepEntry> out(betas.size() * algos.size(),
                              SweepEntry{{}, SearchResult{root, 0.0, {}, 0}});
  const auto n = static_cast<std::int64_t>(betas.size());
  std::vector<std::exception_ptr> errors(betas.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const Beta beta(betas[i]);
      for (std::size_t a = 0; a < algos.size(); ++a) {
        SearchResult r =
            algos[a] == Algorithm::kGreedy
                ? GreedySearch(stats, beta, root)
                : QTreeSearch(stats, ComputeQTable(stats, beta), beta, root);
        const TreeInformation info = ComputeTreeInformation(r.tree, world);
        SweepEntry& e = out[static_cast<std::size_t>(i) * algos.size() + a];
        e.point.beta = beta.value();
        e.point.algorithm = algos[a];
        e.point.leaf_count = r.tree.leaf_count();
        e.point.i_tx = info.i_tx;
        e.point.i_ty = info.i_ty;
        e.point.objective = r.objective;
        e.point.i_xy = winfo.i_xy;
        e.point.h_x = winfo.h_x;
        e.result = std::move(r);
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<InfoPlanePoint> BetaSweep(const WorldModel& world,
                                      const std::vector<double>& betas,
                                      const std::set<Algorithm>& algorithms) {
  std::vector<InfoPlanePoint> points;
  for (auto& e : RunSweep(world, betas, algorithms)) points.push_back(e.point);
  return points;
}

std::string FormatNumber(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string EmitMetricsCsv(std::vector<InfoPlanePoint> points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const InfoPlanePoint& a, const InfoPlanePoint& b) {
                     return std::make_tuple(AlgorithmName(a.algorithm),
                                            a.beta) <
                            std::make_tuple(AlgorithmName(b.algorithm), b.beta);
                   });
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& p : points) {
    out += FormatNumber(p.beta);
    out += ',';
    out += AlgorithmName(p.algorithm);
    out += ',' + std::to_string(p.leaf_count);
    for (double v : {p.i_tx, p.i_ty, p.objective, p.i_xy, p.h_x}) {
      out += ',' + FormatNumber(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<InfoPlanePoint> ParseMetricsCsv(std::string_view text) {
  std::vector<InfoPlanePoint> points;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kMetricsHeader) {
        throw ParseError("metrics CSV: unexpected header '" +
                         std::string(line) + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 8) {
      throw ParseError("metrics CSV line " + std::to_string(line_no) +
                       ": expected 8 fields, got " + std::to_string(f.size()));
    }
    InfoPlanePoint p;
    p.beta = ParseField<double>(f[0], line_no, "beta");
    if (f[1] == "greedy") {
      p.algorithm = Algorithm::kGreedy;
    } else if (f[1] == "qtree") {
      p.algorithm = Algorithm::kQTree;
    } else {
      throw ParseError("metrics CSV line " + std::to_string(line_no) +
                       ": unknown algorithm '" + std::string(f[1]) + "'");
    }
    p.leaf_count = ParseField<std::size_t>(f[2], line_no, "leaf_count");
    p.i_tx = ParseField<double>(f[3], line_no, "i_tx_bits");
    p.i_ty = ParseField<double>(f[4], line_no, "i_ty_bits");
    p.objective = ParseField<double>(f[5], line_no, "objective_bits");
    p.i_xy = ParseField<double>(f[6], line_no, "i_xy_bits");
    p.h_x = ParseField<double>(f[7], line_no, "h_x_bits");
    points.push_back(p);
  }
  if (line_no == 0) throw ParseError("metrics CSV: missing header");
  return points;
}

std::vector<double> LogSpacedBetas(double lo, double hi, std::size_t n) {
  if (n == 0 || !(lo > 0.0) || !(hi >= lo)) {
    throw DomainError("log-spaced grid needs 0 < lo <= hi and n >= 1");
  }
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) /
                              static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace qtib
