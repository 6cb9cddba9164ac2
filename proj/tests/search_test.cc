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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "qtib/error.h"
#include "test_support.h"

namespace qtib {
namespace {

using testing::BinaryWorld;
using testing::RandomWorld;

const std::vector<double> kBetas{0.01, 0.1, 1, 10, 100, 1e4};

// Every depth-1 quadrant repeats the diagonal pattern [1 0; 0 1], so all
// quadrants aggregate to the same conditional while each hides one bit.
WorldModel HiddenBitsDepthTwo() {
  std::vector<double> occ(16);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) occ[r * 4 + c] = (r % 2 == c % 2) ? 1.0 : 0.0;
  }
  return BinaryWorld(4, occ, std::vector<double>(16, 1.0));
}

// Top-left quadrant tiled with diagonal 2x2 blocks, the rest free space.
WorldModel HiddenBitsDepthThree() {
  std::vector<double> occ(64, 0.0);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) occ[r * 8 + c] = (r % 2 == c % 2) ? 1.0 : 0.0;
  }
  return BinaryWorld(8, occ, std::vector<double>(64, 1.0));
}

struct Best {
  double objective = -std::numeric_limits<double>::infinity();
  std::size_t interior = 0;
};

Best IndependentOptimum(const WorldModel& w, double beta) {
  Best best;
  for (const auto& t : testing::AllTreesBySubsets(w.depth())) {
    const double v = testing::NaiveLagrangian(t, w, beta);
    if (v > best.objective) best = {v, t.interior_count()};
  }
  return best;
}

TEST(QTableTest, RecursionAndLeafCase) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WorldModel w =
        RandomWorld(seed, {.depth = 3, .zero_mass_fraction = 0.1});
    const NodeStatsTable s = ComputeNodeStats(w);
    const QTable q = ComputeQTable(s, Beta(3.0));
    for (std::size_t f = 0; f < s.size(); ++f) {
      const NodeId n = NodeFromFlat(f);
      if (n.depth == 3) {
        EXPECT_EQ(q.q(n), 0.0);
        continue;
      }
      double future = 0.0;
      for (const NodeId c : Children(n, 3)) future += q.q(c);
      EXPECT_EQ(q.q(n), std::max(q.delta(n) + future, 0.0));
      EXPECT_EQ(q.delta(n), DeltaLHat(n, s, Beta(3.0)));
    }
  }
}

TEST(QTableTest, BaseCaseEqualsDeltaLHat) {
  const auto w = BinaryWorld(2, {0, 0, 1, 1}, {1, 1, 1, 1});
  const QTable q = ComputeQTable(ComputeNodeStats(w), Beta(4.0));
  EXPECT_DOUBLE_EQ(q.q(kRoot), 0.5);
}

TEST(QTableTest, ClipsNegativeTotalsAtZero) {
  const auto w = HiddenBitsDepthTwo();
  const NodeStatsTable s = ComputeNodeStats(w);
  // Root: -0.25 + 4 * 0.1875 = 0.5.
  const QTable q8 = ComputeQTable(s, Beta(8.0));
  EXPECT_DOUBLE_EQ(q8.delta(kRoot), -0.25);
  EXPECT_DOUBLE_EQ(q8.q({1, 2}), 0.1875);
  EXPECT_DOUBLE_EQ(q8.q(kRoot), 0.5);
  // Beta 2: root -1, children 0.25 * (1 - 1) = 0 each, so Q(root) = 0.
  const QTable q2 = ComputeQTable(s, Beta(2.0));
  EXPECT_DOUBLE_EQ(q2.delta(kRoot), -1.0);
  EXPECT_EQ(q2.q(kRoot), 0.0);
}

TEST(GreedySearchTest, SmallBetaKeepsStartTree) {
  const WorldModel w = RandomWorld(4, {.depth = 3});
  const NodeStatsTable s = ComputeNodeStats(w);
  const SearchResult r = GreedySearch(s, Beta(1e-6), TreeAbstraction(3));
  EXPECT_EQ(r.tree, TreeAbstraction(3));
  EXPECT_TRUE(r.expansions.empty());
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_EQ(r.iterations, 1u);
}

TEST(GreedySearchTest, HugeBetaReachesFullTree) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WorldModel w = RandomWorld(seed, {.depth = 3});
    const NodeStatsTable s = ComputeNodeStats(w);
    const SearchResult r = GreedySearch(s, Beta(1e9), TreeAbstraction(3));
    EXPECT_EQ(r.tree, TreeAbstraction::Full(3));
    EXPECT_EQ(r.expansions.size(), 21u);
  }
}

TEST(GreedySearchTest, ExpansionOrderIsBestFirst) {
  const WorldModel w = RandomWorld(9, {.depth = 4});
  const NodeStatsTable s = ComputeNodeStats(w);
  const Beta beta(20.0);
  const SearchResult r = GreedySearch(s, beta, TreeAbstraction(4));
  TreeAbstraction t(4);
  for (const NodeId e : r.expansions) {
    const double chosen = DeltaLHat(e, s, beta);
    EXPECT_GT(chosen, 0.0);
    for (const NodeId leaf : Leaves(t)) {
      if (leaf.depth == 4) continue;
      const double other = DeltaLHat(leaf, s, beta);
      EXPECT_TRUE(other < chosen || (other == chosen && !(leaf < e)));
    }
    t.ExpandInPlace(e);
  }
  EXPECT_EQ(t, r.tree);
  for (const NodeId leaf : Leaves(t)) {
    if (leaf.depth < 4) EXPECT_LE(DeltaLHat(leaf, s, beta), 0.0);
  }
}

TEST(GreedySearchTest, TiesGoToSmallestNode) {
  const auto w = HiddenBitsDepthTwo();
  const NodeStatsTable s = ComputeNodeStats(w);
  const SearchResult r =
      GreedySearch(s, Beta(8.0), Expand(TreeAbstraction(2), kRoot));
  EXPECT_EQ(r.expansions,
            (std::vector<NodeId>{{1, 0}, {1, 1}, {1, 2}, {1, 3}}));
}

TEST(GreedySearchTest, StopsAtANegativeRootThatHidesValue) {
  const auto w = HiddenBitsDepthTwo();
  const NodeStatsTable s = ComputeNodeStats(w);
  const Beta beta(8.0);
  const SearchResult g = GreedySearch(s, beta, TreeAbstraction(2));
  EXPECT_EQ(g.tree, TreeAbstraction(2));
  const Best best = IndependentOptimum(w, 8.0);
  EXPECT_NEAR(best.objective, 0.5, 1e-12);
  EXPECT_LT(g.objective, best.objective - 0.1);

  const SearchResult q =
      QTreeSearch(s, ComputeQTable(s, beta), beta, TreeAbstraction(2));
  EXPECT_EQ(q.tree, TreeAbstraction::Full(2));
  EXPECT_NEAR(q.objective, best.objective, 1e-12);
}

TEST(GreedySearchTest, StopsAboveANegativeNodeWithValuableChildren) {
  const auto w = HiddenBitsDepthThree();
  const NodeStatsTable s = ComputeNodeStats(w);
  const Beta beta(8.0);
  EXPECT_GT(DeltaLHat(kRoot, s, beta), 0.0);
  EXPECT_DOUBLE_EQ(DeltaLHat({1, 0}, s, beta), -0.0625);
  for (const NodeId c : Children({1, 0}, 3)) {
    EXPECT_DOUBLE_EQ(DeltaLHat(c, s, beta), 0.046875);
  }

  const SearchResult g = GreedySearch(s, beta, TreeAbstraction(3));
  EXPECT_EQ(g.tree, Expand(TreeAbstraction(3), kRoot));

  const SearchResult q =
      QTreeSearch(s, ComputeQTable(s, beta), beta, TreeAbstraction(3));
  const TreeAbstraction expected = TreeAbstraction::FromInterior(
      3, {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {2, 3}});
  EXPECT_EQ(q.tree, expected);
  EXPECT_NEAR(q.objective - g.objective, 0.125, 1e-12);
  EXPECT_TRUE(IsSubtree(g.tree, q.tree));

  const Best best = IndependentOptimum(w, 8.0);
  EXPECT_NEAR(q.objective, best.objective, 1e-12);
  EXPECT_LT(g.objective, best.objective - 1e-3);
}

TEST(QTreeSearchTest, ZeroRootValueKeepsRootOnly) {
  const auto w = HiddenBitsDepthTwo();
  const NodeStatsTable s = ComputeNodeStats(w);
  const SearchResult r = QTreeSearch(s, ComputeQTable(s, Beta(2.0)), Beta(2.0),
                                     TreeAbstraction(2));
  EXPECT_EQ(r.tree, TreeAbstraction(2));
  EXPECT_EQ(r.objective, 0.0);
}

TEST(QTreeSearchTest, RejectsMismatchedTable) {
  const WorldModel w = RandomWorld(1, {.depth = 2});
  const NodeStatsTable s = ComputeNodeStats(w);
  const QTable q = ComputeQTable(s, Beta(2.0));
  EXPECT_THROW(QTreeSearch(s, q, Beta(3.0), TreeAbstraction(2)), DomainError);
  EXPECT_THROW(QTreeSearch(s, q, Beta(2.0), TreeAbstraction(3)), DomainError);
}

TEST(QTreeSearchTest, MatchesIndependentOracleAtDepthTwo) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const WorldModel w =
        RandomWorld(seed, {.depth = 2,
                           .num_outcomes = 2 + static_cast<int>(seed % 2),
                           .zero_mass_fraction = seed % 3 == 0 ? 0.2 : 0.0,
                           .binary_cells = seed % 5 == 0});
    const NodeStatsTable s = ComputeNodeStats(w);
    for (double b : {0.1, 1.0, 10.0, 100.0}) {
      const Beta beta(b);
      const SearchResult r =
          QTreeSearch(s, ComputeQTable(s, beta), beta, TreeAbstraction(2));
      const Best best = IndependentOptimum(w, b);
      EXPECT_NEAR(r.objective, best.objective, 1e-9)
          << "seed " << seed << " beta " << b;
    }
  }
}

TEST(QTreeSearchTest, ClosedFormMatchesLoopFromAnyStart) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WorldModel w = RandomWorld(seed, {.depth = 5});
    const NodeStatsTable s = ComputeNodeStats(w);
    const TreeAbstraction start = testing::RandomTree(seed, 5, 0.4);
    for (double b : kBetas) {
      const Beta beta(b);
      const QTable q = ComputeQTable(s, beta);
      const SearchResult r = QTreeSearch(s, q, beta, start);
      EXPECT_EQ(r.tree, QTreeClosedForm(q, start));
      EXPECT_TRUE(IsSubtree(start, r.tree));
    }
  }
}

TEST(QTreeSearchTest, ResultIsMinimal) {
  // Every strict subtree obtained by dropping a subset of interior nodes
  // (keeping parent closure) scores strictly lower.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WorldModel w =
        RandomWorld(seed, {.depth = 2, .binary_cells = seed % 2 == 0});
    const NodeStatsTable s = ComputeNodeStats(w);
    for (double b : kBetas) {
      const Beta beta(b);
      const SearchResult r =
          QTreeSearch(s, ComputeQTable(s, beta), beta, TreeAbstraction(2));
      for (const auto& t : testing::AllTreesBySubsets(2)) {
        if (t == r.tree || !IsSubtree(t, r.tree)) continue;
        EXPECT_LT(TreeObjective(t, s, beta), r.objective - 1e-12);
      }
    }
  }
}

TEST(QTreeSearchTest, MinimalityOnSampledDepthThreeSubtrees) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WorldModel w = RandomWorld(seed, {.depth = 3});
    const NodeStatsTable s = ComputeNodeStats(w);
    const Beta beta(50.0);
    const SearchResult r =
        QTreeSearch(s, ComputeQTable(s, beta), beta, TreeAbstraction(3));
    std::mt19937_64 rng(seed);
    const auto interior = r.tree.interior();
    for (int trial = 0; trial < 1000 && !interior.empty(); ++trial) {
      // Drop one random interior node together with its interior
      // descendants.
      const NodeId cut = interior[rng() % interior.size()];
      std::vector<NodeId> kept;
      for (const NodeId n : interior) {
        if (!IsDescendantOrSelf(n, cut)) kept.push_back(n);
      }
      // Randomly drop a few more, keeping parent closure.
      std::vector<NodeId> pruned;
      for (const NodeId n : kept) {
        const auto p = Parent(n);
        const bool parent_kept =
            !p || std::find(pruned.begin(), pruned.end(), *p) != pruned.end();
        if (parent_kept && rng() % 4 != 0) pruned.push_back(n);
      }
      const TreeAbstraction t = TreeAbstraction::FromInterior(3, pruned);
      EXPECT_LT(TreeObjective(t, s, beta), r.objective - 1e-12);
    }
  }
}

TEST(QTreeSearchTest, PositivityEpsilonSuppressesSmallGains) {
  const auto w = HiddenBitsDepthTwo();
  const NodeStatsTable s = ComputeNodeStats(w);
  const Beta beta(8.0);
  const QTable q = ComputeQTable(s, beta);
  SearchOptions opt;
  opt.positivity_epsilon = 0.6;
  EXPECT_EQ(QTreeSearch(s, q, beta, TreeAbstraction(2), opt).tree,
            TreeAbstraction(2));
  opt.positivity_epsilon = 0.4;
  const SearchResult r = QTreeSearch(s, q, beta, TreeAbstraction(2), opt);
  EXPECT_EQ(r.tree, Expand(TreeAbstraction(2), kRoot));
}

TEST(ContainmentTest, GreedyIsContainedInQTree) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int depth = 2 + static_cast<int>(seed % 3);
    const WorldModel w = RandomWorld(seed, {.depth = depth,
                                            .zero_mass_fraction = 0.1,
                                            .binary_cells = seed % 4 == 0});
    const NodeStatsTable s = ComputeNodeStats(w);
    for (double b : kBetas) {
      const Beta beta(b);
      const SearchResult g = GreedySearch(s, beta, TreeAbstraction(depth));
      const SearchResult q =
          QTreeSearch(s, ComputeQTable(s, beta), beta, TreeAbstraction(depth));
      EXPECT_TRUE(IsSubtree(g.tree, q.tree)) << seed << " " << b;
      EXPECT_GE(q.objective, g.objective - 1e-12);
    }
  }
}

TEST(ValueFunctionTest, PositiveValueIffSomeSubtreeGains) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WorldModel w =
        RandomWorld(seed, {.depth = 2, .binary_cells = seed % 2 == 1});
    const NodeStatsTable s = ComputeNodeStats(w);
    const auto trees = testing::AllTreesBySubsets(2);
    for (double b : kBetas) {
      const Beta beta(b);
      const QTable q = ComputeQTable(s, beta);
      for (std::size_t f = 0; f < LevelOffset(2); ++f) {
        const NodeId t = NodeFromFlat(f);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& tree : trees) {
          if (!tree.contains(t)) continue;
          double sum = 0.0;
          for (const NodeId z : SubtreeRootedAt(tree, t)) {
            if (tree.is_interior(z)) sum += DeltaLHat(z, s, beta);
          }
          best = std::max(best, sum);
        }
        EXPECT_EQ(q.q(t) > 0.0, best > 0.0);
        EXPECT_NEAR(q.q(t), best, 1e-9);
      }
    }
  }
}

TEST(BruteForceTest, Extremes) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const WorldModel w = RandomWorld(seed, {.depth = 2});
    const OracleResult small = BruteForceOptimum(w, Beta(1e-6));
    EXPECT_EQ(small.tree, TreeAbstraction(2));
    EXPECT_EQ(small.objective, 0.0);
    EXPECT_EQ(BruteForceOptimum(w, Beta(1e9)).tree, TreeAbstraction::Full(2));
  }
}

TEST(BruteForceTest, EnumeratesEveryDepthThreeTree) {
  const WorldModel w = RandomWorld(2, {.depth = 3});
  const OracleResult r = BruteForceOptimum(w, Beta(10.0));
  EXPECT_EQ(r.candidates, 83522u);
  EXPECT_THROW(BruteForceOptimum(RandomWorld(2, {.depth = 4}), Beta(1.0)),
               DomainError);
}

TEST(BruteForceTest, AgreesWithIndependentOracleAndPrefersSmallTrees) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WorldModel w = RandomWorld(seed, {.depth = 2, .binary_cells = true});
    for (double b : kBetas) {
      const OracleResult r = BruteForceOptimum(w, Beta(b));
      const Best best = IndependentOptimum(w, b);
      EXPECT_NEAR(r.objective, best.objective, 1e-9);
      const SearchResult q = QTreeSearch(
          ComputeNodeStats(w), ComputeQTable(ComputeNodeStats(w), Beta(b)),
          Beta(b), TreeAbstraction(2));
      EXPECT_EQ(q.tree, r.tree) << seed << " " << b;
    }
  }
}

}  // namespace
}  // namespace qtib
