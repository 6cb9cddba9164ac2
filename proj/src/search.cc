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

#include "qtib/search.h"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "qtib/error.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qtib {
namespace {

struct Candidate {
  double score;
  NodeId node;
};

// Max-heap on score; among equal scores the smallest (depth, index) wins.
struct CandidateLess {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.score != b.score) return a.score < b.score;
    return b.node < a.node;
  }
};

using Frontier =
    std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess>;

// Shared loop of both algorithms: pop the best expandable leaf, expand it
// while its score is positive, push its children.
template <typename Score>
SearchResult RunExpansionLoop(const TreeAbstraction& start, Score score,
                              const SearchOptions& options) {
  const int depth_limit = start.depth_limit();
  SearchResult result{start, 0.0, {}, 0};
  Frontier frontier;
  for (const NodeId leaf : Leaves(start)) {
    if (static_cast<int>(leaf.depth) < depth_limit) {
      frontier.push({score(leaf), leaf});
    }
  }
  while (true) {
    ++result.iterations;
    if (frontier.empty() ||
        !(frontier.top().score > options.positivity_epsilon)) {
      break;
    }
    const NodeId best = frontier.top().node;
    frontier.pop();
    result.tree.ExpandInPlace(best);
    result.expansions.push_back(best);
    for (const NodeId c : Children(best, depth_limit)) {
      if (static_cast<int>(c.depth) < depth_limit) {
        frontier.push({score(c), c});
      }
    }
  }
  return result;
}

void QTablePostOrder(const NodeStatsTable& stats, NodeId n,
                     std::span<const double> delta, std::vector<double>& q) {
  if (static_cast<int>(n.depth) == stats.depth_limit()) return;
  double future = 0.0;
  for (const NodeId c : Children(n, stats.depth_limit())) {
    QTablePostOrder(stats, c, delta, q);
    future += q[FlatIndex(c)];
  }
  const std::size_t f = FlatIndex(n);
  q[f] = std::max(delta[f] + future, 0.0);
}

void ClosedFormVisit(const QTable& qtable, NodeId n, double eps,
                     TreeAbstraction& tree) {
  if (static_cast<int>(n.depth) >= qtable.depth_limit()) return;
  if (!(qtable.q(n) > eps)) return;
  tree.ExpandInPlace(n);
  for (const NodeId c : Children(n, qtable.depth_limit())) {
    ClosedFormVisit(qtable, c, eps, tree);
  }
}

// Strict preference order of the oracle: higher objective, then fewer
// interior nodes, then lexicographically smaller interior list.
bool OracleBetter(const TreeAbstraction& a, double obj_a,
                  const TreeAbstraction& b, double obj_b) {
  if (obj_a != obj_b) return obj_a > obj_b;
  if (a.interior_count() != b.interior_count()) {
    return a.interior_count() < b.interior_count();
  }
  return a.interior() < b.interior();
}

void CheckOracleDepth(int depth_limit) {
  if (depth_limit > kMaxEnumerationDepth) {
    throw DomainError(
        "brute-force optimum is refused beyond depth 3 (the world has depth " +
        std::to_string(depth_limit) + ")");
  }
}

}  // namespace

std::string_view AlgorithmName(Algorithm a) {
  return a == Algorithm::kGreedy ? "greedy" : "qtree";
}

QTable ComputeQTable(const NodeStatsTable& stats, Beta beta) {
  QTable table(beta, stats.depth_limit());
  table.delta_ = ComputeDeltaTable(stats, beta);
  table.q_.assign(stats.size(), 0.0);
  for (int d = stats.depth_limit() - 1; d >= 0; --d) {
    const auto offset = static_cast<std::int64_t>(LevelOffset(d));
    const std::int64_t count = std::int64_t{1} << (2 * d);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const NodeId n{static_cast<std::uint32_t>(d),
                     static_cast<std::uint64_t>(i)};
      double future = 0.0;
      for (const NodeId c : Children(n, stats.depth_limit())) {
        future += table.q_[FlatIndex(c)];
      }
      const std::size_t f = static_cast<std::size_t>(offset + i);
      table.q_[f] = std::max(table.delta_[f] + future, 0.0);
    }
  }
  return table;
}

QTable ComputeQTableSerial(const NodeStatsTable& stats, Beta beta) {
  QTable table(beta, stats.depth_limit());
  table.delta_ = ComputeDeltaTableSerial(stats, beta);
  table.q_.assign(stats.size(), 0.0);
  QTablePostOrder(stats, kRoot, table.delta_, table.q_);
  return table;
}

SearchResult GreedySearch(const NodeStatsTable& stats, Beta beta,
                          const TreeAbstraction& start,
                          const SearchOptions& options) {
  if (start.depth_limit() != stats.depth_limit()) {
    throw DomainError("start tree and statistics have different depths");
  }
  auto result = RunExpansionLoop(
      start, [&](NodeId n) { return DeltaLHat(n, stats, beta); }, options);
  result.objective = TreeObjective(result.tree, stats, beta);
  return result;
}

SearchResult QTreeSearch(const NodeStatsTable& stats, const QTable& qtable,
                         Beta beta, const TreeAbstraction& start,
                         const SearchOptions& options) {
  if (!(qtable.beta() == beta)) {
    throw DomainError("Q table was computed for beta " +
                      std::to_string(qtable.beta().value()) + ", not " +
                      std::to_string(beta.value()));
  }
  if (start.depth_limit() != stats.depth_limit() ||
      qtable.depth_limit() != stats.depth_limit()) {
    throw DomainError("start tree, Q table and statistics disagree on depth");
  }
  auto result =
      RunExpansionLoop(start, [&](NodeId n) { return qtable.q(n); }, options);
  if (stats.depth_limit() <= kMaxEnumerationDepth &&
      !(result.tree == QTreeClosedForm(qtable, start, options))) {
    throw std::logic_error(
        "Q-tree loop and closed form disagree on the final tree");
  }
  result.objective = TreeObjective(result.tree, qtable.delta_values());
  return result;
}

TreeAbstraction QTreeClosedForm(const QTable& qtable,
                                const TreeAbstraction& start,
                                const SearchOptions& options) {
  TreeAbstraction tree = start;
  for (const NodeId leaf : Leaves(start)) {
    ClosedFormVisit(qtable, leaf, options.positivity_epsilon, tree);
  }
  return tree;
}

OracleResult BruteForceOptimum(const WorldModel& world, Beta beta) {
  CheckOracleDepth(world.depth());
  return BruteForceOptimum(ComputeNodeStats(world), beta);
}

OracleResult BruteForceOptimum(const NodeStatsTable& stats, Beta beta) {
  const int depth = stats.depth_limit();
  CheckOracleDepth(depth);
  const auto delta = ComputeDeltaTable(stats, beta);
  const auto total = static_cast<std::int64_t>(TreeCount(depth));

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::vector<OracleResult> best(threads,
                                 OracleResult{TreeAbstraction(depth), 0.0, 0});
  std::vector<char> seen(threads, 0);
#pragma omp parallel
  {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      TreeAbstraction t = TreeAt(depth, static_cast<std::uint64_t>(i));
      const double obj = TreeObjective(t, delta);
      if (!seen[tid] ||
          OracleBetter(t, obj, best[tid].tree, best[tid].objective)) {
        best[tid].tree = std::move(t);
        best[tid].objective = obj;
        seen[tid] = 1;
      }
    }
  }
  OracleResult out{TreeAbstraction(depth), 0.0, 0};
  bool have = false;
  for (int i = 0; i < threads; ++i) {
    if (!seen[i]) continue;
    if (!have || OracleBetter(best[i].tree, best[i].objective, out.tree,
                              out.objective)) {
      out = best[i];
      have = true;
    }
  }
  out.candidates = static_cast<std::uint64_t>(total);
  return out;
}

OracleResult BruteForceOptimumSerial(const NodeStatsTable& stats, Beta beta) {
  const int depth = stats.depth_limit();
  CheckOracleDepth(depth);
  const auto delta = ComputeDeltaTableSerial(stats, beta);
  OracleResult out{TreeAbstraction(depth), 0.0, 0};
  TreeEnumerator trees(depth);
  while (auto t = trees.Next()) {
    const double obj = TreeObjective(*t, delta);
    if (out.candidates == 0 || OracleBetter(*t, obj, out.tree, out.objective)) {
      out.tree = std::move(*t);
      out.objective = obj;
    }
    ++out.candidates;
  }
  return out;
}

}  // namespace qtib
