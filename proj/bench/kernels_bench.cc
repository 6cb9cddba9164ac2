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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <set>

#include "qtib/info_measures.h"
#include "qtib/metrics_sweep.h"
#include "qtib/search.h"
#include "qtib/world_model.h"

namespace qtib {
namespace {

const WorldModel& DemoWorld() {
  static const WorldModel world = [] {
    const OccupancyField occ = DemoOccupancyMap();
    return AssembleWorld(
        occ, BuildPrior(PriorSpec::Uniform(), occ.width, occ.height));
  }();
  return world;
}

const WorldModel& SmallWorld() {
  static const WorldModel world = [] {
    OccupancyField occ = DemoOccupancyMap();
    std::vector<double> p(64);
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) p[r * 8 + c] = occ.occupied(60 + r, 20 + c);
    }
    return AssembleWorld(OccupancyField::FromOccupiedProbabilities(8, 8, p),
                         BuildPrior(PriorSpec::Uniform(), 8, 8));
  }();
  return world;
}

void BM_NodeStatsSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ComputeNodeStatsSerial(DemoWorld()));
}
void BM_NodeStatsParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ComputeNodeStats(DemoWorld()));
}

void BM_QTableSerial(benchmark::State& state) {
  const NodeStatsTable s = ComputeNodeStats(DemoWorld());
  for (auto _ : state)
    benchmark::DoNotOptimize(ComputeQTableSerial(s, Beta(100)));
}
void BM_QTableParallel(benchmark::State& state) {
  const NodeStatsTable s = ComputeNodeStats(DemoWorld());
  for (auto _ : state) benchmark::DoNotOptimize(ComputeQTable(s, Beta(100)));
}

void BM_BruteForceSerial(benchmark::State& state) {
  const NodeStatsTable s = ComputeNodeStats(SmallWorld());
  for (auto _ : state) {
    benchmark::DoNotOptimize(BruteForceOptimumSerial(s, Beta(10)));
  }
}
void BM_BruteForceParallel(benchmark::State& state) {
  const NodeStatsTable s = ComputeNodeStats(SmallWorld());
  for (auto _ : state) benchmark::DoNotOptimize(BruteForceOptimum(s, Beta(10)));
}

void BM_Sweep(benchmark::State& state) {
  const auto betas = LogSpacedBetas(1, 1e5, 16);
  const std::set<Algorithm> both{Algorithm::kGreedy, Algorithm::kQTree};
  for (auto _ : state)
    benchmark::DoNotOptimize(RunSweep(DemoWorld(), betas, both));
}

BENCHMARK(BM_NodeStatsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NodeStatsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QTableSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QTableParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace qtib

BENCHMARK_MAIN();
