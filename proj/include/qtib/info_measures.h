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

#ifndef QTIB_INFO_MEASURES_H_
#define QTIB_INFO_MEASURES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "qtib/quadtree.h"
#include "qtib/world_model.h"

// Information-theoretic kernels. All quantities are in bits and use the
// 0 log 0 = 0 convention.
namespace qtib {

// Trade-off weight between relevance and compression; must be finite and
// strictly positive.
class Beta {
 public:
  // Throws DomainError for beta <= 0 or non-finite beta.
  explicit Beta(double beta);

  double value() const { return value_; }
  double inverse() const { return 1.0 / value_; }

  bool operator==(const Beta&) const = default;

 private:
  double value_;
};

double Entropy(std::span<const double> p);

// Throws DomainError when mu has mass where nu has none.
double KlDivergence(std::span<const double> mu, std::span<const double> nu);

// Weighted Jensen-Shannon divergence sum_s w_s KL(p_s, sum_r w_r p_r).
// Components with zero weight are ignored.
double JsDivergence(std::span<const double> weights,
                    std::span<const std::span<const double>> dists);

// I(A;B) of a dense row-major joint table.
double MutualInformation(std::span<const double> joint, std::size_t rows,
                         std::size_t cols);

// One non-zero entry of a sparse joint table.
struct JointEntry {
  std::size_t a;
  std::size_t b;
  double p;
};
double MutualInformationSparse(std::span<const JointEntry> entries,
                               std::size_t rows, std::size_t cols);

// Bottom-up p(t) and p(y|t) for every node of the full quadtree, indexed by
// flat node index. Zero-mass nodes are flagged invalid and carry a uniform
// placeholder conditional.
class NodeStatsTable {
 public:
  NodeStatsTable() = default;
  NodeStatsTable(int depth_limit, std::size_t num_outcomes);

  int depth_limit() const { return depth_limit_; }
  std::size_t num_outcomes() const { return num_outcomes_; }
  std::size_t size() const { return mass_.size(); }

  double mass(NodeId n) const { return mass_[FlatIndex(n)]; }
  std::span<const double> cond(NodeId n) const { return cond_at(FlatIndex(n)); }
  bool valid(NodeId n) const { return mass(n) > 0.0; }

  double mass_at(std::size_t flat) const { return mass_[flat]; }
  std::span<const double> cond_at(std::size_t flat) const {
    return {cond_.data() + flat * num_outcomes_, num_outcomes_};
  }

  bool operator==(const NodeStatsTable&) const = default;

 private:
  friend NodeStatsTable ComputeNodeStats(const WorldModel& world);
  friend NodeStatsTable ComputeNodeStatsSerial(const WorldModel& world);

  void FillFinest(const WorldModel& world, std::uint64_t morton);
  void Aggregate(NodeId n);
  void BuildDepthFirst(const WorldModel& world, NodeId n);

  int depth_limit_ = 0;
  std::size_t num_outcomes_ = 0;
  std::vector<double> mass_;
  std::vector<double> cond_;
};

// Level-synchronous pass, each level split across OpenMP threads.
NodeStatsTable ComputeNodeStats(const WorldModel& world);
// Depth-first single-threaded reference; bitwise identical to the above.
NodeStatsTable ComputeNodeStatsSerial(const WorldModel& world);

// Change of the tree Lagrangian caused by expanding t:
//   p(t) [ JS_Pi(p(y|t'_1..4)) - H(Pi) / beta ],  Pi_s = p(t'_s) / p(t).
// Zero for finest-level nodes and for zero-mass nodes; zero-mass children
// are dropped from Pi.
double DeltaLHat(NodeId t, const NodeStatsTable& stats, Beta beta);

// DeltaLHat for every node, indexed by flat index. OpenMP over nodes.
std::vector<double> ComputeDeltaTable(const NodeStatsTable& stats, Beta beta);
std::vector<double> ComputeDeltaTableSerial(const NodeStatsTable& stats,
                                            Beta beta);

// L_Y(tree; beta) as the compensated sum of DeltaLHat over interior nodes.
double TreeObjective(const TreeAbstraction& tree, const NodeStatsTable& stats,
                     Beta beta);
double TreeObjective(const TreeAbstraction& tree,
                     std::span<const double> delta_table);

struct TreeInformation {
  double i_tx = 0.0;  // I(T;X)
  double i_ty = 0.0;  // I(T;Y)
  double h_t = 0.0;   // H(T)
};

// Mutual informations of the deterministic encoder x -> leaf(tree, x),
// computed from the finest cells without using any node statistics.
// Throws std::logic_error if I(T;X) and H(T) disagree by more than 1e-12.
TreeInformation ComputeTreeInformation(const TreeAbstraction& tree,
                                       const WorldModel& world);

// I(T;Y) - I(T;X) / beta evaluated directly from the encoder.
double TreeObjectiveDirect(const TreeAbstraction& tree, const WorldModel& world,
                           Beta beta);

struct WorldInformation {
  double h_x = 0.0;   // H(X)
  double i_xy = 0.0;  // I(X;Y)
};
WorldInformation ComputeWorldInformation(const WorldModel& world);

}  // namespace qtib

#endif  // QTIB_INFO_MEASURES_H_
