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

#ifndef QTIB_TREE_IO_H_
#define QTIB_TREE_IO_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "qtib/info_measures.h"
#include "qtib/quadtree.h"
#include "qtib/search.h"

namespace qtib {

// {"depth_limit": L, "leaves": [{"depth","morton","row","col","size"}, ...]}
// with leaves in Z-order.
nlohmann::json TreeToJson(const TreeAbstraction& tree);

// Rebuilds a tree from its leaf list. Throws ParseError when the leaves do
// not tile the grid exactly once.
TreeAbstraction TreeFromJson(const nlohmann::json& j);

// TreeToJson extended with per-leaf "p_t" and "p_y_given_t" and top-level
// "beta", "algorithm" and "objective_bits". Keys sorted, reals rounded to
// 12 significant digits.
std::string ExportTreeJson(const SearchResult& result,
                           const NodeStatsTable& stats, Beta beta,
                           Algorithm algorithm);

// Parses an exported document back into its tree.
TreeAbstraction ImportTreeJson(std::string_view text);

}  // namespace qtib

#endif  // QTIB_TREE_IO_H_
