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

#ifndef QTIB_QUADTREE_H_
#define QTIB_QUADTREE_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace qtib {

// A node of the full quadtree over a 2^L x 2^L grid: its depth and the
// Morton (Z-order) code of its block among the 4^depth blocks at that depth.
// Child quadrants are numbered 0 = top-left, 1 = top-right, 2 = bottom-left,
// 3 = bottom-right, so child index = 4 * parent index + quadrant.
struct NodeId {
  std::uint32_t depth = 0;
  std::uint64_t index = 0;

  auto operator<=>(const NodeId&) const = default;
};

inline constexpr NodeId kRoot{0, 0};

// Interleaves row/col bits: bit 2k of the code is col bit k, bit 2k+1 is
// row bit k.
std::uint64_t MortonEncode(std::uint32_t row, std::uint32_t col);
void MortonDecode(std::uint64_t code, std::uint32_t& row, std::uint32_t& col);

// Number of nodes in the full tree of depth limit L, (4^(L+1) - 1) / 3.
std::size_t NodeCount(int depth_limit);
// Position of the first depth-k node in the flat depth-major layout.
std::size_t LevelOffset(int depth);
inline std::size_t FlatIndex(NodeId n) {
  return LevelOffset(static_cast<int>(n.depth)) + n.index;
}
NodeId NodeFromFlat(std::size_t flat);

// Throws DomainError when node.depth >= depth_limit.
std::array<NodeId, 4> Children(NodeId node, int depth_limit);
std::optional<NodeId> Parent(NodeId node);
// True when `node` is `ancestor` or lies below it.
bool IsDescendantOrSelf(NodeId node, NodeId ancestor);

// Square block of finest cells covered by a node.
struct CellRegion {
  int row0 = 0;
  int col0 = 0;
  int size = 0;

  bool operator==(const CellRegion&) const = default;
};
CellRegion RegionOf(NodeId node, int depth_limit);

// A pruned quadtree, stored as its interior-node set. The set is closed
// under parent; leaves are derived. Leaf count is always 1 + 3 * interior.
class TreeAbstraction {
 public:
  // The root-only tree.
  explicit TreeAbstraction(int depth_limit);

  // Throws DomainError unless `interior` is parent-closed and every member
  // lies above the finest level.
  static TreeAbstraction FromInterior(int depth_limit,
                                      const std::vector<NodeId>& interior);
  // The fully expanded tree T_W.
  static TreeAbstraction Full(int depth_limit);

  int depth_limit() const { return depth_limit_; }
  bool is_interior(NodeId n) const;
  bool is_leaf(NodeId n) const;
  // Interior or leaf.
  bool contains(NodeId n) const;

  std::size_t interior_count() const { return interior_count_; }
  std::size_t leaf_count() const { return 1 + 3 * interior_count_; }
  // Sorted by (depth, index).
  std::vector<NodeId> interior() const;
  // Interior membership flags by flat index over the non-finest levels.
  const std::vector<std::uint8_t>& interior_mask() const { return mask_; }

  // Replaces a leaf with its four children. Throws DomainError for a
  // non-leaf or a finest-level node.
  void ExpandInPlace(NodeId leaf);

  bool operator==(const TreeAbstraction&) const = default;

 private:
  int depth_limit_;
  std::vector<std::uint8_t> mask_;
  std::size_t interior_count_ = 0;
};

// Neighbor of higher leaf cardinality; `tree` is left untouched.
TreeAbstraction Expand(const TreeAbstraction& tree, NodeId leaf);

// a.interior is a subset of b.interior. Throws DomainError when the depth
// limits differ.
bool IsSubtree(const TreeAbstraction& a, const TreeAbstraction& b);

// One nodal expansion (in either direction) relates a and b.
bool AreNeighbors(const TreeAbstraction& a, const TreeAbstraction& b);

// Leaves in Z-order of their top-left finest cell.
std::vector<NodeId> Leaves(const TreeAbstraction& tree);

// Node t plus all of its descendants present in the tree, in (depth, index)
// order. Throws DomainError when t is not a node of the tree.
std::vector<NodeId> SubtreeRootedAt(const TreeAbstraction& tree, NodeId t);

// Number of valid pruned quadtrees of depth limit L: f(0) = 1,
// f(L) = 1 + f(L-1)^4. Defined for L <= 3 (f(4) overflows 64 bits).
std::uint64_t TreeCount(int depth_limit);

// The i-th tree of a fixed enumeration order, i < TreeCount(L). Index 0 is
// the root-only tree.
TreeAbstraction TreeAt(int depth_limit, std::uint64_t i);

// Lazy single-pass stream over every tree of depth limit L <= 3.
class TreeEnumerator {
 public:
  // Throws DomainError for L > 3 or L < 0.
  explicit TreeEnumerator(int depth_limit);

  std::optional<TreeAbstraction> Next();
  std::uint64_t size() const { return total_; }

 private:
  int depth_limit_;
  std::uint64_t next_ = 0;
  std::uint64_t total_;
};

inline constexpr int kMaxEnumerationDepth = 3;

}  // namespace qtib

#endif  // QTIB_QUADTREE_H_
