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

#include "qtib/tree_io.h"

#include <algorithm>
#include <set>
#include <string>

#include "qtib/error.h"
#include "qtib/metrics_sweep.h"

namespace qtib {
namespace {

double Round12(double v) { return std::stod(FormatNumber(v)); }

}  // namespace

nlohmann::json TreeToJson(const TreeAbstraction& tree) {
  nlohmann::json leaves = nlohmann::json::array();
  for (const NodeId n : Leaves(tree)) {
    const CellRegion reg = RegionOf(n, tree.depth_limit());
    leaves.push_back({{"depth", n.depth},
                      {"morton", n.index},
                      {"row", reg.row0},
                      {"col", reg.col0},
                      {"size", reg.size}});
  }
  return {{"depth_limit", tree.depth_limit()}, {"leaves", std::move(leaves)}};
}

TreeAbstraction TreeFromJson(const nlohmann::json& j) {
  try {
    const int depth_limit = j.at("depth_limit").get<int>();
    if (depth_limit < 0 || depth_limit > 15) {
      throw ParseError("tree JSON: depth_limit out of range");
    }
    std::set<NodeId> interior;
    std::vector<NodeId> leaves;
    for (const auto& leaf : j.at("leaves")) {
      const NodeId n{leaf.at("depth").get<std::uint32_t>(),
                     leaf.at("morton").get<std::uint64_t>()};
      if (static_cast<int>(n.depth) > depth_limit ||
          n.index >= (std::uint64_t{1} << (2 * n.depth))) {
        throw ParseError("tree JSON: leaf (" + std::to_string(n.depth) + "," +
                         std::to_string(n.index) + ") is outside the grid");
      }
      leaves.push_back(n);
      for (auto p = Parent(n); p; p = Parent(*p)) interior.insert(*p);
    }
    auto tree = TreeAbstraction::FromInterior(
        depth_limit, std::vector<NodeId>(interior.begin(), interior.end()));
    auto expected = Leaves(tree);
    std::sort(leaves.begin(), leaves.end());
    std::sort(expected.begin(), expected.end());
    if (leaves != expected) {
      throw ParseError("tree JSON: leaves do not tile the grid exactly once");
    }
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tree JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("tree JSON: ") + e.what());
  }
}

std::string ExportTreeJson(const SearchResult& result,
                           const NodeStatsTable& stats, Beta beta,
                           Algorithm algorithm) {
  nlohmann::json j = TreeToJson(result.tree);
  for (auto& leaf : j["leaves"]) {
    const NodeId n{leaf["depth"].get<std::uint32_t>(),
                   leaf["morton"].get<std::uint64_t>()};
    leaf["p_t"] = Round12(stats.mass(n));
    nlohmann::json cond = nlohmann::json::array();
    for (double v : stats.cond(n)) cond.push_back(Round12(v));
    leaf["p_y_given_t"] = std::move(cond);
  }
  j["beta"] = Round12(beta.value());
  j["algorithm"] = std::string(AlgorithmName(algorithm));
  j["objective_bits"] = Round12(result.objective);
  return j.dump(1) + "\n";
}

TreeAbstraction ImportTreeJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("tree JSON: ") + e.what());
  }
  return TreeFromJson(j);
}

}  // namespace qtib
