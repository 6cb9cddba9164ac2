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

#include "qtib/info_measures.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qtib/error.h"
#include "qtib/numeric.h"

namespace qtib {
namespace {

// I(T;X) must equal H(T) for a deterministic encoder.
constexpr double kEncoderEntropyTolerance = 1e-12;

}  // namespace

Beta::Beta(double beta) : value_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be finite and > 0, got " +
                      std::to_string(beta));
  }
}

double Entropy(std::span<const double> p) {
  CompensatedSum s;
  for (double v : p) s.Add(-XLog2X(v));
  return s.value();
}

double KlDivergence(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) {
    throw DomainError("KL divergence of distributions of different sizes");
  }
  CompensatedSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] <= 0.0) continue;
    if (nu[i] <= 0.0) {
      throw DomainError("KL divergence: nu has no mass at outcome " +
                        std::to_string(i) + " where mu does");
    }
    s.Add(mu[i] * std::log2(mu[i] / nu[i]));
  }
  return s.value();
}

double JsDivergence(std::span<const double> weights,
                    std::span<const std::span<const double>> dists) {
  if (weights.size() != dists.size() || dists.empty()) {
    throw DomainError("JS divergence needs one weight per distribution");
  }
  const std::size_t ny = dists.front().size();
  std::vector<double> mixture(ny, 0.0);
  for (std::size_t s = 0; s < dists.size(); ++s) {
    if (dists[s].size() != ny) {
      throw DomainError("JS divergence of distributions of different sizes");
    }
    if (weights[s] <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) mixture[y] += weights[s] * dists[s][y];
  }
  double js = 0.0;
  for (std::size_t s = 0; s < dists.size(); ++s) {
    if (weights[s] <= 0.0) continue;
    js += weights[s] * KlDivergence(dists[s], mixture);
  }
  return std::max(js, 0.0);
}

double MutualInformation(std::span<const double> joint, std::size_t rows,
                         std::size_t cols) {
  if (joint.size() != rows * cols) {
    throw DomainError("joint table size does not match its dimensions");
  }
  std::vector<JointEntry> entries;
  entries.reserve(joint.size());
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      const double p = joint[a * cols + b];
      if (p > 0.0) entries.push_back({a, b, p});
    }
  }
  return MutualInformationSparse(entries, rows, cols);
}

double MutualInformationSparse(std::span<const JointEntry> entries,
                               std::size_t rows, std::size_t cols) {
  std::vector<CompensatedSum> pa(rows);
  std::vector<CompensatedSum> pb(cols);
  for (const auto& e : entries) {
    if (e.a >= rows || e.b >= cols) {
      throw DomainError("joint entry outside the table");
    }
    pa[e.a].Add(e.p);
    pb[e.b].Add(e.p);
  }
  // With one outcome on either side the variables are independent; return
  // an exact zero rather than rounding residue.
  const auto support = [](const std::vector<CompensatedSum>& m) {
    return std::count_if(m.begin(), m.end(), [](const CompensatedSum& s) {
      return s.value() > 0.0;
    });
  };
  if (support(pa) <= 1 || support(pb) <= 1) return 0.0;
  CompensatedSum mi;
  for (const auto& e : entries) {
    if (e.p <= 0.0) continue;
    // Separate logs: the product of two tiny marginals can underflow.
    mi.Add(e.p * (std::log2(e.p) - std::log2(pa[e.a].value()) -
                  std::log2(pb[e.b].value())));
  }
  return std::max(mi.value(), 0.0);
}

NodeStatsTable::NodeStatsTable(int depth_limit, std::size_t num_outcomes)
    : depth_limit_(depth_limit),
      num_outcomes_(num_outcomes),
      mass_(NodeCount(depth_limit), 0.0),
      cond_(NodeCount(depth_limit) * num_outcomes, 0.0) {}

void NodeStatsTable::FillFinest(const WorldModel& world, std::uint64_t morton) {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  MortonDecode(morton, row, col);
  const std::size_t f = LevelOffset(depth_limit_) + morton;
  mass_[f] = world.prior_at(static_cast<int>(row), static_cast<int>(col));
  const auto src = world.cond_at(static_cast<int>(row), static_cast<int>(col));
  std::copy(src.begin(), src.end(), cond_.begin() + f * num_outcomes_);
}

void NodeStatsTable::Aggregate(NodeId n) {
  const std::size_t f = FlatIndex(n);
  const auto kids = Children(n, depth_limit_);
  double m = 0.0;
  for (const NodeId c : kids) m += mass_[FlatIndex(c)];
  mass_[f] = m;
  double* out = cond_.data() + f * num_outcomes_;
  if (!(m > 0.0)) {
    std::fill(out, out + num_outcomes_,
              1.0 / static_cast<double>(num_outcomes_));
    return;
  }
  std::fill(out, out + num_outcomes_, 0.0);
  for (const NodeId c : kids) {
    const std::size_t fc = FlatIndex(c);
    if (!(mass_[fc] > 0.0)) continue;
    const double w = mass_[fc] / m;
    const double* in = cond_.data() + fc * num_outcomes_;
    for (std::size_t y = 0; y < num_outcomes_; ++y) out[y] += w * in[y];
  }
}

NodeStatsTable ComputeNodeStats(const WorldModel& world) {
  const int depth = world.depth();
  NodeStatsTable stats(depth, world.num_outcomes());
  const std::int64_t finest = std::int64_t{1} << (2 * depth);
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < finest; ++m) {
    stats.FillFinest(world, static_cast<std::uint64_t>(m));
  }
  for (int d = depth - 1; d >= 0; --d) {
    const std::int64_t count = std::int64_t{1} << (2 * d);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      stats.Aggregate(
          NodeId{static_cast<std::uint32_t>(d), static_cast<std::uint64_t>(i)});
    }
  }
  return stats;
}

void NodeStatsTable::BuildDepthFirst(const WorldModel& world, NodeId n) {
  if (static_cast<int>(n.depth) == depth_limit_) {
    FillFinest(world, n.index);
    return;
  }
  for (const NodeId c : Children(n, depth_limit_)) BuildDepthFirst(world, c);
  Aggregate(n);
}

NodeStatsTable ComputeNodeStatsSerial(const WorldModel& world) {
  NodeStatsTable stats(world.depth(), world.num_outcomes());
  stats.BuildDepthFirst(world, kRoot);
  return stats;
}

double DeltaLHat(NodeId t, const NodeStatsTable& stats, Beta beta) {
  if (static_cast<int>(t.depth) >= stats.depth_limit()) return 0.0;
  const double mass = stats.mass(t);
  if (!(mass > 0.0)) return 0.0;
  std::array<double, 4> weights{};
  std::array<std::span<const double>, 4> dists{};
  std::size_t n = 0;
  for (const NodeId c : Children(t, stats.depth_limit())) {
    const double mc = stats.mass(c);
    if (!(mc > 0.0)) continue;
    weights[n] = mc / mass;
    dists[n] = stats.cond(c);
    ++n;
  }
  const std::span<const double> w(weights.data(), n);
  const double js = JsDivergence(w, {dists.data(), n});
  return mass * (js - beta.inverse() * Entropy(w));
}

std::vector<double> ComputeDeltaTable(const NodeStatsTable& stats, Beta beta) {
  std::vector<double> out(stats.size(), 0.0);
  const auto interior =
      static_cast<std::int64_t>(LevelOffset(stats.depth_limit()));
#pragma omp parallel for schedule(static)
  for (std::int64_t f = 0; f < interior; ++f) {
    out[f] = DeltaLHat(NodeFromFlat(static_cast<std::size_t>(f)), stats, beta);
  }
  return out;
}

std::vector<double> ComputeDeltaTableSerial(const NodeStatsTable& stats,
                                            Beta beta) {
  std::vector<double> out(stats.size(), 0.0);
  const std::size_t interior = LevelOffset(stats.depth_limit());
  for (std::size_t f = 0; f < interior; ++f) {
    out[f] = DeltaLHat(NodeFromFlat(f), stats, beta);
  }
  return out;
}

double TreeObjective(const TreeAbstraction& tree, const NodeStatsTable& stats,
                     Beta beta) {
  if (tree.depth_limit() != stats.depth_limit()) {
    throw DomainError("tree and statistics have different depth limits");
  }
  CompensatedSum s;
  const auto& mask = tree.interior_mask();
  for (std::size_t f = 0; f < mask.size(); ++f) {
    if (mask[f]) s.Add(DeltaLHat(NodeFromFlat(f), stats, beta));
  }
  return s.value();
}

double TreeObjective(const TreeAbstraction& tree,
                     std::span<const double> delta_table) {
  const auto& mask = tree.interior_mask();
  if (delta_table.size() < mask.size()) {
    throw DomainError("delta table is smaller than the tree");
  }
  CompensatedSum s;
  for (std::size_t f = 0; f < mask.size(); ++f) {
    if (mask[f]) s.Add(delta_table[f]);
  }
  return s.value();
}

TreeInformation ComputeTreeInformation(const TreeAbstraction& tree,
                                       const WorldModel& world) {
  if (tree.depth_limit() != world.depth()) {
    throw DomainError("tree and world have different depth limits");
  }
  const auto leaves = Leaves(tree);
  const std::size_t ny = world.num_outcomes();
  const std::size_t side = static_cast<std::size_t>(world.side());

  std::vector<JointEntry> tx;  // p(t, x) = p(x) for x in t
  tx.reserve(world.cell_count());
  std::vector<double> ty(leaves.size() * ny, 0.0);
  std::vector<double> pt(leaves.size(), 0.0);
  for (std::size_t t = 0; t < leaves.size(); ++t) {
    const CellRegion reg = RegionOf(leaves[t], tree.depth_limit());
    CompensatedSum mass;
    std::vector<CompensatedSum> joint(ny);
    for (int r = reg.row0; r < reg.row0 + reg.size; ++r) {
      for (int c = reg.col0; c < reg.col0 + reg.size; ++c) {
        const double px = world.prior_at(r, c);
        if (!(px > 0.0)) continue;
        tx.push_back({t, static_cast<std::size_t>(r) * side + c, px});
        mass.Add(px);
        const auto cy = world.cond_at(r, c);
        for (std::size_t y = 0; y < ny; ++y) joint[y].Add(px * cy[y]);
      }
    }
    pt[t] = mass.value();
    for (std::size_t y = 0; y < ny; ++y) ty[t * ny + y] = joint[y].value();
  }

  TreeInformation info;
  info.i_tx = MutualInformationSparse(tx, leaves.size(), world.cell_count());
  info.h_t = Entropy(pt);
  info.i_ty = MutualInformation(ty, leaves.size(), ny);
  if (!(std::abs(info.i_tx - info.h_t) <= kEncoderEntropyTolerance)) {
    throw std::logic_error("deterministic encoder violates I(T;X) = H(T): " +
                           std::to_string(info.i_tx) + " vs " +
                           std::to_string(info.h_t));
  }
  return info;
}

double TreeObjectiveDirect(const TreeAbstraction& tree, const WorldModel& world,
                           Beta beta) {
  const TreeInformation info = ComputeTreeInformation(tree, world);
  return info.i_ty - beta.inverse() * info.i_tx;
}

WorldInformation ComputeWorldInformation(const WorldModel& world) {
  WorldInformation w;
  w.h_x = Entropy(world.prior());
  std::vector<double> joint(world.cond().size());
  const std::size_t ny = world.num_outcomes();
  for (std::size_t x = 0; x < world.cell_count(); ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      joint[x * ny + y] = world.prior()[x] * world.cond()[x * ny + y];
    }
  }
  w.i_xy = MutualInformation(joint, world.cell_count(), ny);
  return w;
}

}  // namespace qtib
