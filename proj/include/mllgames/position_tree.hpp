#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mllgames {

using MoveIndex = std::uint32_t;
using Position = std::vector<MoveIndex>;

// A finite, nonempty, prefix-closed set of move sequences stored as a trie.
// Node 0 is the empty sequence. Children are kept sorted by move index, so two
// trees holding the same set compare equal node-for-node.
class PositionTree {
 public:
  using NodeId = std::uint32_t;

  struct Edge {
    MoveIndex move;
    NodeId node;
  };

  PositionTree() : parent_{0}, move_{0}, depth_{0}, children_(1) {}

  static constexpr NodeId root() { return 0; }

  std::size_t size() const { return parent_.size(); }

  std::optional<NodeId> child(NodeId node, MoveIndex move) const {
    const auto& kids = children_[node];
    auto it = std::lower_bound(kids.begin(), kids.end(), move,
                               [](const Edge& e, MoveIndex m) { return e.move < m; });
    if (it == kids.end() || it->move != move) return std::nullopt;
    return it->node;
  }

  NodeId insert(NodeId node, MoveIndex move) {
    auto& kids = children_[node];
    auto it = std::lower_bound(kids.begin(), kids.end(), move,
                               [](const Edge& e, MoveIndex m) { return e.move < m; });
    if (it != kids.end() && it->move == move) return it->node;
    const auto id = static_cast<NodeId>(parent_.size());
    const auto offset = it - kids.begin();
    parent_.push_back(node);
    move_.push_back(move);
    depth_.push_back(depth_[node] + 1);
    children_.emplace_back();
    // emplace_back may have reallocated children_, so re-fetch the vector.
    auto& fresh = children_[node];
    fresh.insert(fresh.begin() + offset, Edge{move, id});
    return id;
  }

  NodeId insert(std::span<const MoveIndex> seq) {
    NodeId node = root();
    for (MoveIndex m : seq) node = insert(node, m);
    return node;
  }

  std::optional<NodeId> find(std::span<const MoveIndex> seq) const {
    NodeId node = root();
    for (MoveIndex m : seq) {
      auto next = child(node, m);
      if (!next) return std::nullopt;
      node = *next;
    }
    return node;
  }

  bool contains(std::span<const MoveIndex> seq) const { return find(seq).has_value(); }

  std::span<const Edge> children(NodeId node) const { return children_[node]; }
  bool is_leaf(NodeId node) const { return children_[node].empty(); }
  std::size_t depth(NodeId node) const { return depth_[node]; }
  NodeId parent(NodeId node) const { return parent_[node]; }
  MoveIndex last_move(NodeId node) const { return move_[node]; }

  Position sequence(NodeId node) const {
    Position out(depth_[node]);
    for (auto i = out.size(); i > 0; --i) {
      out[i - 1] = move_[node];
      node = parent_[node];
    }
    return out;
  }

  std::size_t max_depth() const {
    std::size_t d = 0;
    for (auto x : depth_) d = std::max<std::size_t>(d, x);
    return d;
  }

  // Pre-order walk in move-index order; `fn(node)` is called for every node.
  void walk(const std::function<void(NodeId)>& fn) const {
    std::vector<NodeId> stack{root()};
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      fn(n);
      const auto& kids = children_[n];
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(it->node);
    }
  }

  std::vector<Position> all() const {
    std::vector<Position> out;
    walk([&](NodeId n) { out.push_back(sequence(n)); });
    return out;
  }

  // Positions that have no proper extension in the set.
  std::vector<Position> maximal() const {
    std::vector<Position> out;
    walk([&](NodeId n) {
      if (is_leaf(n)) out.push_back(sequence(n));
    });
    return out;
  }

  bool subset_of(const PositionTree& other) const { return subset_from(other, root(), root()); }

  friend bool operator==(const PositionTree& a, const PositionTree& b) {
    return a.size() == b.size() && a.subset_of(b);
  }

  // Image under a move renaming; `map` must be injective on the moves used.
  PositionTree remapped(const std::function<MoveIndex(MoveIndex)>& map) const {
    PositionTree out;
    std::vector<NodeId> image(size());
    walk([&](NodeId n) {
      if (n == root()) return;
      image[n] = out.insert(image[parent_[n]], map(move_[n]));
    });
    return out;
  }

 private:
  bool subset_from(const PositionTree& other, NodeId mine, NodeId theirs) const {
    for (const Edge& e : children_[mine]) {
      auto next = other.child(theirs, e.move);
      if (!next || !subset_from(other, e.node, *next)) return false;
    }
    return true;
  }

  std::vector<NodeId> parent_;
  std::vector<MoveIndex> move_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::vector<Edge>> children_;
};

}  // namespace mllgames
