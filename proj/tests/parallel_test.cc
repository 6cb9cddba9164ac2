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

#include <gtest/gtest.h>
#include <omp.h>

#include "qtib/metrics_sweep.h"
#include "qtib/search.h"
#include "test_support.h"

namespace qtib {
namespace {

class ThreadCount {
 public:
  explicit ThreadCount(int n) : saved_(omp_get_max_threads()) {
    omp_set_num_threads(n);
  }
  ~ThreadCount() { omp_set_num_threads(saved_); }

 private:
  int saved_;
};

TEST(ParallelTest, NodeStatsMatchSerialBitwise) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WorldModel w = testing::RandomWorld(
        seed, {.depth = 6, .num_outcomes = 3, .zero_mass_fraction = 0.3});
    ThreadCount threads(4);
    EXPECT_TRUE(ComputeNodeStats(w) == ComputeNodeStatsSerial(w));
  }
}

TEST(ParallelTest, QTableMatchesSerialBitwise) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WorldModel w = testing::RandomWorld(seed, {.depth = 6});
    const NodeStatsTable s = ComputeNodeStats(w);
    ThreadCount threads(4);
    for (double b : {0.1, 10.0, 1e4}) {
      EXPECT_TRUE(ComputeQTable(s, Beta(b)) == ComputeQTableSerial(s, Beta(b)));
      EXPECT_EQ(ComputeDeltaTable(s, Beta(b)),
                ComputeDeltaTableSerial(s, Beta(b)));
    }
  }
}

TEST(ParallelTest, BruteForceMatchesSerial) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const WorldModel w = testing::RandomWorld(seed, {.depth = 3});
    const NodeStatsTable s = ComputeNodeStats(w);
    for (double b : {0.5, 20.0}) {
      const OracleResult serial = BruteForceOptimumSerial(s, Beta(b));
      for (int n : {1, 3, 8}) {
        ThreadCount threads(n);
        const OracleResult par = BruteForceOptimum(s, Beta(b));
        EXPECT_EQ(par.tree, serial.tree);
        EXPECT_EQ(par.objective, serial.objective);
        EXPECT_EQ(par.candidates, serial.candidates);
      }
    }
  }
}

TEST(ParallelTest, SweepIsIndependentOfThreadCount) {
  const WorldModel w = testing::RandomWorld(8, {.depth = 6});
  const auto betas = LogSpacedBetas(0.5, 5000, 9);
  const std::set<Algorithm> both{Algorithm::kGreedy, Algorithm::kQTree};
  std::string reference;
  {
    ThreadCount threads(1);
    reference = EmitMetricsCsv(BetaSweep(w, betas, both));
  }
  for (int n : {2, 5}) {
    ThreadCount threads(n);
    EXPECT_EQ(EmitMetricsCsv(BetaSweep(w, betas, both)), reference);
  }
}

}  // namespace
}  // namespace qtib
