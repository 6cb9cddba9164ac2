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

#include "qtib/quadtree.h"

#include <string>

#include "qtib/error.h"

namespace qtib {
namespace {

std::string Describe(NodeId n) {
  return "(" + std::to_string(n.depth) + "," + std::to_string(n.index) + ")";
}

void CheckNode(NodeId n, int depth_limit) {
  if (static_cast<int>(n.depth) > depth_limit ||
      (n.depth < 32 && n.index >= (std::uint64_t{1} << (2 * n.depth)))) {
    throw DomainError("node " + Describe(n) + " is outside a depth-" +
                      std::to_string(depth_limit) + " quadtree");
  }
}

// Marks the interior nodes of tree number i within the subtree of `node`
// whose remaining height is `height`.
void MarkTree(std::uint64_t i, NodeId node, int height, int depth_limit,
              TreeAbstraction& tree) {
  if (i == 0) return;
  tree.ExpandInPlace(node);
  const std::uint64_t base = TreeCount(height - 1);
  std::uint64_t rest = i - 1;
  for (const NodeId c : Children(node, depth_limit)) {
    MarkTree(rest % base, c, height - 1, depth_limit, tree);
    rest /= base;
  }
}

void CollectLeaves(const TreeAbstraction& tree, NodeId n,
                   std::vector<NodeId>& out) {
  if (!tree.is_interior(n)) {
    out.push_back(n);
    return;
  }
  for (const NodeId c : Children(n, tree.depth_limit())) {
    CollectLeaves(tree, c, out);
  }
}

}  // namespace

std::uint64_t MortonEncode(std::uint32_t row, std::uint32_t col) {
  std::uint64_t code = 0;
  for (int b = 0; b < 32; ++b) {
    code |= static_cast<std::uint64_t>((col >> b) & 1u) << (2 * b);
    code |= static_cast<std::uint64_t>((row >> b) & 1u) << (2 * b + 1);
  }
  return code;
}

void MortonDecode(std::uint64_t code, std::uint32_t& row, std::uint32_t& col) {
  row = 0;
  col = 0;
  for (int b = 0; b < 32; ++b) {
    col |= static_cast<std::uint32_t>((code >> (2 * b)) & 1u) << b;
    row |= static_cast<std::uint32_t>((code >> (2 * b + 1)) & 1u) << b;
  }
}

std::size_t LevelOffset(int depth) {
  return ((std::size_t{1} << (2 * depth)) - 1) / 3;
}

std::size_t NodeCount(int depth_limit) { return LevelOffset(depth_limit + 1); }

NodeId NodeFromFlat(std::size_t flat) {
  std::uint32_t depth = 0;
  while (LevelOffset(static_cast<int>(depth) + 1) <= flat) ++depth;
  return {depth, flat - LevelOffset(static_cast<int>(depth))};
}

std::array<NodeId, 4> Children(NodeId node, int depth_limit) {
  CheckNode(node, depth_limit);
  if (static_cast<int>(node.depth) >= depth_limit) {
    throw DomainError("node " + Describe(node) +
                      " is at the finest level and has no children");
  }
  const std::uint32_t d = node.depth + 1;
  const std::uint64_t base = node.index * 4;
  return {NodeId{d, base}, NodeId{d, base + 1}, NodeId{d, base + 2},
          NodeId{d, base + 3}};
}

std::optional<NodeId> Parent(NodeId node) {
  if (node.depth == 0) return std::nullopt;
  return NodeId{node.depth - 1, node.index / 4};
}

bool IsDescendantOrSelf(NodeId node, NodeId ancestor) {
  if (node.depth < ancestor.depth) return false;
  return (node.index >> (2 * (node.depth - ancestor.depth))) == ancestor.index;
}

CellRegion RegionOf(NodeId node, int depth_limit) {
  CheckNode(node, depth_limit);
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  MortonDecode(node.index, row, col);
  const int size = 1 << (depth_limit - static_cast<int>(node.depth));
  return {static_cast<int>(row) * size, static_cast<int>(col) * size, size};
}

TreeAbstraction::TreeAbstraction(int depth_limit) : depth_limit_(depth_limit) {
  if (depth_limit < 0 || depth_limit > 15) {
    throw DomainError("depth limit must be in [0, 15]");
  }
  mask_.assign(LevelOffset(depth_limit), 0);
}

TreeAbstraction TreeAbstraction::FromInterior(
    int depth_limit, const std::vector<NodeId>& interior) {
  TreeAbstraction t(depth_limit);
  for (const NodeId n : interior) {
    CheckNode(n, depth_limit);
    if (static_cast<int>(n.depth) >= depth_limit) {
      throw DomainError("finest-level node " + Describe(n) +
                        " cannot be interior");
    }
    auto& m = t.mask_[FlatIndex(n)];
    if (!m) {
      m = 1;
      ++t.interior_count_;
    }
  }
  for (const NodeId n : interior) {
    if (auto p = Parent(n); p && !t.is_interior(*p)) {
      throw DomainError("interior set is not parent-closed: " + Describe(n) +
                        " lacks its parent");
    }
  }
  return t;
}

TreeAbstraction TreeAbstraction::Full(int depth_limit) {
  TreeAbstraction t(depth_limit);
  t.mask_.assign(t.mask_.size(), 1);
  t.interior_count_ = t.mask_.size();
  return t;
}

bool TreeAbstraction::is_interior(NodeId n) const {
  if (static_cast<int>(n.depth) >= depth_limit_) return false;
  const std::size_t f = FlatIndex(n);
  return f < mask_.size() && mask_[f] != 0;
}

bool TreeAbstraction::contains(NodeId n) const {
  if (static_cast<int>(n.depth) > depth_limit_ ||
      n.index >= (std::uint64_t{1} << (2 * n.depth))) {
    return false;
  }
  if (n.depth == 0) return true;
  return is_interior(*Parent(n));
}

bool TreeAbstraction::is_leaf(NodeId n) const {
  return contains(n) && !is_interior(n);
}

std::vector<NodeId> TreeAbstraction::interior() const {
  std::vector<NodeId> out;
  out.reserve(interior_count_);
  for (std::size_t f = 0; f < mask_.size(); ++f) {
    if (mask_[f]) out.push_back(NodeFromFlat(f));
  }
  return out;
}

void TreeAbstraction::ExpandInPlace(NodeId leaf) {
  if (!is_leaf(leaf)) {
    throw DomainError("node " + Describe(leaf) + " is not a leaf of the tree");
  }
  if (static_cast<int>(leaf.depth) >= depth_limit_) {
    throw DomainError("node " + Describe(leaf) +
                      " is at the finest level and cannot be expanded");
  }
  mask_[FlatIndex(leaf)] = 1;
  ++interior_count_;
}

TreeAbstraction Expand(const TreeAbstraction& tree, NodeId leaf) {
  TreeAbstraction out = tree;
  out.ExpandInPlace(leaf);
  return out;
}

bool IsSubtree(const TreeAbstraction& a, const TreeAbstraction& b) {
  if (a.depth_limit() != b.depth_limit()) {
    throw DomainError("trees have different depth limits");
  }
  if (a.interior_count() > b.interior_count()) return false;
  const auto& ma = a.interior_mask();
  const auto& mb = b.interior_mask();
  for (std::size_t i = 0; i < ma.size(); ++i) {
    if (ma[i] && !mb[i]) return false;
  }
  return true;
}

bool AreNeighbors(const TreeAbstraction& a, const TreeAbstraction& b) {
  if (a.depth_limit() != b.depth_limit()) return false;
  if (a.interior_count() + 1 == b.interior_count()) return IsSubtree(a, b);
  if (b.interior_count() + 1 == a.interior_count()) return IsSubtree(b, a);
  return false;
}

std::vector<NodeId> Leaves(const TreeAbstraction& tree) {
  std::vector<NodeId> out;
  out.reserve(tree.leaf_count());
  CollectLeaves(tree, kRoot, out);
  return out;
}

std::vector<NodeId> SubtreeRootedAt(const TreeAbstraction& tree, NodeId t) {
  if (!tree.contains(t)) {
    throw DomainError("node " + Describe(t) + " is not in the tree");
  }
  std::vector<NodeId> out{t};
  // Breadth-first keeps the output in (depth, index) order.
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (tree.is_interior(out[i])) {
      for (const NodeId c : Children(out[i], tree.depth_limit())) {
        out.push_back(c);
      }
    }
  }
  return out;
}

std::uint64_t TreeCount(int depth_limit) {
  if (depth_limit < 0 || depth_limit > kMaxEnumerationDepth) {
    throw DomainError("tree count is only tabulated for depth limits 0..3");
  }
  std::uint64_t f = 1;
  for (int d = 1; d <= depth_limit; ++d) f = 1 + f * f * f * f;
  return f;
}

TreeAbstraction TreeAt(int depth_limit, std::uint64_t i) {
  if (i >= TreeCount(depth_limit)) {
    throw DomainError("tree index out of range");
  }
  TreeAbstraction t(depth_limit);
  MarkTree(i, kRoot, depth_limit, depth_limit, t);
  return t;
}

TreeEnumerator::TreeEnumerator(int depth_limit) : depth_limit_(depth_limit) {
  if (depth_limit < 0 || depth_limit > kMaxEnumerationDepth) {
    throw DomainError(
        "exhaustive enumeration is refused beyond depth 3: depth 4 already "
        "has about 4.9e19 quadtrees");
  }
  total_ = TreeCount(depth_limit);
}

std::optional<TreeAbstraction> TreeEnumerator::Next() {
  if (next_ >= total_) return std::nullopt;
  return TreeAt(depth_limit_, next_++);
}

}  // namespace qtib
