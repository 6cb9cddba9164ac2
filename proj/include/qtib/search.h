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

#ifndef QTIB_SEARCH_H_
#define QTIB_SEARCH_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qtib/info_measures.h"
#include "qtib/quadtree.h"
#include "qtib/world_model.h"

namespace qtib {

// Node-wise value function over the full tree:
//   Q(t) = 0 at the finest level,
//   Q(t) = max{ DeltaLHat(t) + sum_{c in children(t)} Q(c), 0 } elsewhere.
// A positive Q(t) certifies that expanding t pays off once its profitable
// descendants are expanded too.
class QTable {
 public:
  Beta beta() const { return beta_; }
  int depth_limit() const { return depth_limit_; }
  double q(NodeId n) const { return q_[FlatIndex(n)]; }
  double delta(NodeId n) const { return delta_[FlatIndex(n)]; }
  std::span<const double> q_values() const { return q_; }
  std::span<const double> delta_values() const { return delta_; }

  bool operator==(const QTable&) const = default;

 private:
  friend QTable ComputeQTable(const NodeStatsTable& stats, Beta beta);
  friend QTable ComputeQTableSerial(const NodeStatsTable& stats, Beta beta);
  QTable(Beta beta, int depth_limit) : beta_(beta), depth_limit_(depth_limit) {}

  Beta beta_;
  int depth_limit_;
  std::vector<double> delta_;
  std::vector<double> q_;
};

// Level-synchronous bottom-up pass, OpenMP within each level.
QTable ComputeQTable(const NodeStatsTable& stats, Beta beta);
// Post-order recursion; bitwise identical to ComputeQTable.
QTable ComputeQTableSerial(const NodeStatsTable& stats, Beta beta);

enum class Algorithm { kGreedy, kQTree };
std::string_view AlgorithmName(Algorithm a);

struct SearchOptions {
  // A leaf is expanded only while its score exceeds this. The default of 0
  // is the exact "> 0" rule.
  double positivity_epsilon = 0.0;
};

struct SearchResult {
  TreeAbstraction tree;
  double objective = 0.0;          // L_Y(tree; beta), bits
  std::vector<NodeId> expansions;  // in the order they were made
  std::size_t iterations = 0;      // loop passes including the final one
};

// Expands, one at a time, the leaf with the largest DeltaLHat while that
// value is positive. Ties go to the smallest (depth, index).
SearchResult GreedySearch(const NodeStatsTable& stats, Beta beta,
                          const TreeAbstraction& start,
                          const SearchOptions& options = {});

// Same loop driven by the Q table. Throws DomainError when qtable was
// built for a different beta. For depth limits <= 3 the result is checked
// against QTreeClosedForm and a mismatch throws std::logic_error.
SearchResult QTreeSearch(const NodeStatsTable& stats, const QTable& qtable,
                         Beta beta, const TreeAbstraction& start,
                         const SearchOptions& options = {});

// Start tree plus every node below one of its leaves that is reachable
// through nodes with Q > 0. Linear in the number of nodes.
TreeAbstraction QTreeClosedForm(const QTable& qtable,
                                const TreeAbstraction& start,
                                const SearchOptions& options = {});

struct OracleResult {
  TreeAbstraction tree;
  double objective = 0.0;
  std::uint64_t candidates = 0;
};

// Exact maximizer of the node-sum objective over every tree of depth <= 3.
// Ties prefer fewer interior nodes, then the lexicographically smallest
// sorted interior list. Throws DomainError for deeper worlds.
OracleResult BruteForceOptimum(const WorldModel& world, Beta beta);
OracleResult BruteForceOptimum(const NodeStatsTable& stats, Beta beta);
// Single-threaded reference for the above.
OracleResult BruteForceOptimumSerial(const NodeStatsTable& stats, Beta beta);

}  // namespace qtib

#endif  // QTIB_SEARCH_H_
