#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formula.hpp"
#include "game.hpp"

namespace mllgames {

// The game of a sequent over per-occurrence constituent games, evaluated
// structurally instead of by materializing its position set. A state records,
// for every connective (commas read as left-nested pars), which side the last
// move inside it was played on, plus each constituent's own position.
class Arena {
  struct Node {
    bool tensor;
  };
  struct Step {
    std::uint32_t node;
    std::uint32_t side;  // 1 left, 2 right
  };

 public:
  struct State {
    std::array<std::uint64_t, 4> w{};
    friend bool operator==(const State&, const State&) = default;
  };
  struct StateHash {
    std::size_t operator()(const State& s) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (auto x : s.w) {
        h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
      }
      return static_cast<std::size_t>(h ^ (h >> 33));
    }
  };

  enum class Check { Ok, UnknownMove, Alternation, ComponentSwitch, ComponentPosition };

  // The connective structure of a sequent, independent of the constituents.
  class Shape {
   public:
    explicit Shape(const Sequent& s) : sequent_(s), occurrences_(literal_occurrences(s)) {
      paths_.resize(occurrences_.size());
      std::optional<int> root;
      for (const auto& f : s.formulas) {
        const int sub = build(f);
        if (!root) {
          root = sub;
          continue;
        }
        const int comma = add_node(false);
        attach(*root, comma, 1);
        attach(sub, comma, 2);
        root = comma;
      }
    }

   private:
    friend class Arena;

    int add_node(bool tensor) {
      nodes_.push_back({tensor});
      members_.emplace_back();
      return static_cast<int>(nodes_.size()) - 1;
    }

    // Leaves are encoded as -(occurrence index + 1); internal nodes as indices.
    int build(const Formula& f) {
      if (f.is_literal()) {
        const int leaf = -static_cast<int>(next_leaf_) - 1;
        ++next_leaf_;
        return leaf;
      }
      const int l = build(f.left());
      const int r = build(f.right());
      const int n = add_node(f.is_tensor());
      attach(l, n, 1);
      attach(r, n, 2);
      return n;
    }

    void attach(int child, int parent, std::uint32_t side) {
      auto add_step = [&](std::size_t occ) { paths_[occ].push_back({static_cast<std::uint32_t>(parent), side}); };
      if (child < 0) {
        add_step(static_cast<std::size_t>(-child - 1));
        members_[parent].push_back(static_cast<std::size_t>(-child - 1));
      } else {
        for (auto occ : members_[child]) {
          add_step(occ);
          members_[parent].push_back(occ);
        }
      }
    }

    Sequent sequent_;
    OccurrenceIndex occurrences_;
    std::vector<Node> nodes_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::vector<Step>> paths_;
    std::size_t next_leaf_ = 0;
  };

  Arena(std::shared_ptr<const Shape> shape, std::vector<std::shared_ptr<const Game>> constituents)
      : shape_(std::move(shape)), constituents_(std::move(constituents)) {
    if (constituents_.size() != shape_->occurrences_.size())
      throw std::invalid_argument("one constituent game per literal occurrence required");
    for (std::size_t i = 0; i < constituents_.size(); ++i) {
      offsets_.push_back(static_cast<MoveIndex>(moves_.size()));
      const std::string tag = std::to_string(i + 1) + ".";
      for (const auto& m : constituents_[i]->moves()) {
        moves_.push_back({tag + m.id, m.label});
        owner_.push_back(static_cast<std::uint32_t>(i));
      }
    }
    offsets_.push_back(static_cast<MoveIndex>(moves_.size()));
    layout();
  }

  Arena(const Sequent& s, std::vector<std::shared_ptr<const Game>> constituents)
      : Arena(std::make_shared<const Shape>(s), std::move(constituents)) {}

  // A game and its dual, shared between arenas.
  using SharedPair = std::pair<std::shared_ptr<const Game>, std::shared_ptr<const Game>>;

  static SharedPair share(const Game& g) {
    return {std::make_shared<const Game>(g), std::make_shared<const Game>(dual(g))};
  }

  static Arena instantiate(std::shared_ptr<const Shape> shape, const std::map<Atom, SharedPair>& asg) {
    std::vector<std::shared_ptr<const Game>> cs;
    for (const auto& o : shape->occurrences_.occurrences) {
      auto it = asg.find(o.atom);
      if (it == asg.end()) throw MissingAtom(o.atom);
      cs.push_back(o.negated ? it->second.second : it->second.first);
    }
    return Arena(std::move(shape), std::move(cs));
  }

  static Arena instantiate(const Sequent& s, const std::map<Atom, SharedPair>& asg) {
    return instantiate(std::make_shared<const Shape>(s), asg);
  }

  static Arena instantiate(const Sequent& s, const Assignment& asg) {
    std::map<Atom, SharedPair> shared;
    for (const auto& a : atoms_of(s)) shared.emplace(a, share(assigned(asg, a)));
    return instantiate(s, shared);
  }

  const Sequent& sequent() const { return shape_->sequent_; }
  std::size_t move_count() const { return moves_.size(); }
  const std::vector<Move>& moves() const { return moves_; }
  Label label(MoveIndex m) const { return moves_[m].label; }
  const std::string& move_id(MoveIndex m) const { return moves_[m].id; }
  std::optional<MoveIndex> index_of(std::string_view id) const {
    const auto dot = id.find('.');
    if (dot == std::string_view::npos || dot == 0 || id[0] == '0') return std::nullopt;
    std::size_t occ = 0;
    for (char c : id.substr(0, dot)) {
      if (c < '0' || c > '9' || occ > constituents_.size()) return std::nullopt;
      occ = occ * 10 + static_cast<std::size_t>(c - '0');
    }
    if (occ == 0 || occ > constituents_.size()) return std::nullopt;
    auto m = constituents_[occ - 1]->index_of(id.substr(dot + 1));
    if (!m) return std::nullopt;
    return offsets_[occ - 1] + *m;
  }

  std::size_t occurrence_count() const { return constituents_.size(); }
  // 1-based occurrence owning a move.
  std::size_t occurrence_of(MoveIndex m) const { return owner_[m] + 1; }
  MoveIndex offset(std::size_t occurrence) const { return offsets_[occurrence - 1]; }
  const Game& constituent(std::size_t occurrence) const { return *constituents_[occurrence - 1]; }

  State initial() const { return State{}; }

  Check check(const State& s, MoveIndex m) const {
    if (m >= moves_.size()) return Check::UnknownMove;
    const Label l = moves_[m].label;
    const auto last = get(s, last_field_);
    if (last != 0 && last == encode(l)) return Check::Alternation;
    for (const auto& step : shape_->paths_[owner_[m]]) {
      const auto side = get(s, side_fields_[step.node]);
      if (side != 0 && side != step.side && l != (shape_->nodes_[step.node].tensor ? Label::O : Label::P))
        return Check::ComponentSwitch;
    }
    const auto occ = owner_[m];
    if (!constituents_[occ]->advance(static_cast<Game::State>(get(s, leaf_fields_[occ])), m - offsets_[occ]))
      return Check::ComponentPosition;
    return Check::Ok;
  }

  std::optional<State> advance(const State& s, MoveIndex m) const {
    if (check(s, m) != Check::Ok) return std::nullopt;
    return apply(s, m);
  }

  template <class Fn>
  void for_each_move(const State& s, Fn&& fn) const {
    const auto last = get(s, last_field_);
    for (std::uint32_t occ = 0; occ < constituents_.size(); ++occ) {
      const Game& g = *constituents_[occ];
      for (const auto& e : g.positions().children(static_cast<Game::State>(get(s, leaf_fields_[occ])))) {
        const MoveIndex m = offsets_[occ] + e.move;
        const Label l = moves_[m].label;
        if (last != 0 && last == encode(l)) continue;
        bool ok = true;
        for (const auto& step : shape_->paths_[occ]) {
          const auto side = get(s, side_fields_[step.node]);
          if (side != 0 && side != step.side && l != (shape_->nodes_[step.node].tensor ? Label::O : Label::P)) {
            ok = false;
            break;
          }
        }
        if (ok) fn(m, apply(s, m));
      }
    }
  }

  std::vector<MoveIndex> legal_moves(const State& s) const {
    std::vector<MoveIndex> out;
    for_each_move(s, [&](MoveIndex m, const State&) { out.push_back(m); });
    return out;
  }

  Game materialize() const {
    PositionTree out;
    struct Frame {
      State s;
      PositionTree::NodeId node;
    };
    std::vector<Frame> stack{{initial(), PositionTree::root()}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      for_each_move(f.s, [&](MoveIndex m, const State& next) { stack.push_back({next, out.insert(f.node, m)}); });
    }
    return Game(moves_, std::move(out));
  }

 private:
  struct Field {
    std::uint8_t word = 0, shift = 0, bits = 0;
  };

  void layout() {
    std::uint32_t word = 0, used = 0;
    auto alloc = [&](std::uint32_t bits) {
      if (bits == 0) return Field{};
      if (used + bits > 64) {
        ++word;
        used = 0;
      }
      if (word >= 4) throw std::length_error("arena state exceeds 256 bits");
      Field f{static_cast<std::uint8_t>(word), static_cast<std::uint8_t>(used), static_cast<std::uint8_t>(bits)};
      used += bits;
      return f;
    };
    last_field_ = alloc(2);
    for (std::size_t i = 0; i < shape_->nodes_.size(); ++i) side_fields_.push_back(alloc(2));
    for (const auto& g : constituents_)
      leaf_fields_.push_back(alloc(static_cast<std::uint32_t>(std::bit_width(g->positions().size() - 1))));
  }

  static std::uint64_t encode(Label l) { return l == Label::P ? 1 : 2; }

  static std::uint64_t get(const State& s, Field f) {
    if (f.bits == 0) return 0;
    return (s.w[f.word] >> f.shift) & ((std::uint64_t{1} << f.bits) - 1);
  }
  static void set(State& s, Field f, std::uint64_t v) {
    if (f.bits == 0) return;
    const std::uint64_t mask = ((std::uint64_t{1} << f.bits) - 1) << f.shift;
    s.w[f.word] = (s.w[f.word] & ~mask) | (v << f.shift);
  }

  State apply(const State& s, MoveIndex m) const {
    State t = s;
    const auto occ = owner_[m];
    set(t, last_field_, encode(moves_[m].label));
    for (const auto& step : shape_->paths_[occ]) set(t, side_fields_[step.node], step.side);
    const auto leaf = *constituents_[occ]->advance(static_cast<Game::State>(get(s, leaf_fields_[occ])),
                                                  m - offsets_[occ]);
    set(t, leaf_fields_[occ], leaf);
    return t;
  }

  std::shared_ptr<const Shape> shape_;
  std::vector<std::shared_ptr<const Game>> constituents_;
  std::vector<Move> moves_;
  std::vector<std::uint32_t> owner_;
  std::vector<MoveIndex> offsets_;
  Field last_field_;
  std::vector<Field> side_fields_;
  std::vector<Field> leaf_fields_;
};

inline const char* to_string(Arena::Check c) {
  switch (c) {
    case Arena::Check::Ok: return "ok";
    case Arena::Check::UnknownMove: return "unknown move";
    case Arena::Check::Alternation: return "alternation";
    case Arena::Check::ComponentSwitch: return "component switching";
    case Arena::Check::ComponentPosition: return "component position";
  }
  return "?";
}

}  // namespace mllgames
