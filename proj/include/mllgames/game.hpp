#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "formula.hpp"
#include "position_tree.hpp"

namespace mllgames {

enum class Label : unsigned char { P, O };

inline Label flip(Label l) { return l == Label::P ? Label::O : Label::P; }
inline const char* to_string(Label l) { return l == Label::P ? "P" : "O"; }

struct Move {
  std::string id;
  Label label;
  friend bool operator==(const Move&, const Move&) = default;
};

// Unvalidated game data as read from a document or built by hand.
struct GameDescription {
  std::vector<Move> moves;
  std::vector<std::vector<std::string>> positions;
};

struct GameViolation {
  enum class Kind { DuplicateMove, UnknownMove, MissingEmpty, NotPrefixClosed, NotAlternating };
  Kind kind;
  std::string detail;
};

inline const char* to_string(GameViolation::Kind k) {
  switch (k) {
    case GameViolation::Kind::DuplicateMove: return "duplicate move id";
    case GameViolation::Kind::UnknownMove: return "unknown move";
    case GameViolation::Kind::MissingEmpty: return "empty position missing";
    case GameViolation::Kind::NotPrefixClosed: return "not prefix-closed";
    case GameViolation::Kind::NotAlternating: return "not alternating";
  }
  return "?";
}

// A position written with "·" separators, "ε" when empty.
inline std::string join_ids(const std::vector<std::string>& ids) {
  if (ids.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += "·";
    out += ids[i];
  }
  return out;
}

inline std::vector<GameViolation> validate_game(const GameDescription& g) {
  using K = GameViolation::Kind;
  std::vector<GameViolation> out;
  std::map<std::string, Label> labels;
  for (const auto& m : g.moves)
    if (!labels.emplace(m.id, m.label).second) out.push_back({K::DuplicateMove, m.id});

  std::set<std::vector<std::string>> members(g.positions.begin(), g.positions.end());
  if (!members.count({})) out.push_back({K::MissingEmpty, "ε not in positions"});

  for (const auto& p : members) {
    bool known = true;
    for (const auto& id : p) {
      if (!labels.count(id)) {
        out.push_back({K::UnknownMove, id + " in " + join_ids(p)});
        known = false;
      }
    }
    if (!p.empty()) {
      std::vector<std::string> prefix(p.begin(), p.end() - 1);
      if (!members.count(prefix))
        out.push_back({K::NotPrefixClosed, join_ids(prefix) + " missing below " + join_ids(p)});
    }
    if (!known) continue;
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (labels[p[i]] == labels[p[i - 1]]) {
        out.push_back({K::NotAlternating, join_ids(p)});
        break;
      }
    }
  }
  return out;
}

class InvalidGame : public std::runtime_error {
 public:
  explicit InvalidGame(std::vector<GameViolation> v)
      : std::runtime_error(summary(v)), violations_(std::move(v)) {}
  const std::vector<GameViolation>& violations() const { return violations_; }

 private:
  static std::string summary(const std::vector<GameViolation>& v) {
    std::string s = "invalid game";
    for (const auto& x : v) s += std::string("; ") + to_string(x.kind) + ": " + x.detail;
    return s;
  }
  std::vector<GameViolation> violations_;
};

// A finite game: labelled moves and an explicit prefix-closed set of
// alternating positions stored as a trie over move indices.
class Game {
 public:
  using State = PositionTree::NodeId;

  Game() = default;

  // Caller guarantees validity; the trie must only use indices below moves.size().
  Game(std::vector<Move> moves, PositionTree positions)
      : moves_(std::move(moves)), positions_(std::move(positions)) {
    for (MoveIndex i = 0; i < moves_.size(); ++i) index_.emplace(moves_[i].id, i);
  }

  static Game from_description(const GameDescription& d) {
    auto violations = validate_game(d);
    if (!violations.empty()) throw InvalidGame(std::move(violations));
    Game g(d.moves, PositionTree{});
    for (const auto& p : d.positions) {
      Position seq;
      for (const auto& id : p) seq.push_back(*g.index_of(id));
      g.positions_.insert(seq);
    }
    return g;
  }

  GameDescription description() const {
    GameDescription d{moves_, {}};
    positions_.walk([&](State n) { d.positions.push_back(ids(positions_.sequence(n))); });
    return d;
  }

  const std::vector<Move>& moves() const { return moves_; }
  std::size_t move_count() const { return moves_.size(); }
  Label label(MoveIndex m) const { return moves_[m].label; }
  const std::string& move_id(MoveIndex m) const { return moves_[m].id; }
  std::optional<MoveIndex> index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const PositionTree& positions() const { return positions_; }
  std::size_t position_count() const { return positions_.size(); }

  State initial() const { return PositionTree::root(); }
  std::optional<State> advance(State s, MoveIndex m) const { return positions_.child(s, m); }

  // Calls fn(move, next_state) for every legal extension of s.
  template <class Fn>
  void for_each_move(State s, Fn&& fn) const {
    for (const auto& e : positions_.children(s)) fn(e.move, e.node);
  }

  struct StateHash {
    std::size_t operator()(State s) const { return s; }
  };

  std::vector<std::string> ids(const Position& p) const {
    std::vector<std::string> out;
    out.reserve(p.size());
    for (auto m : p) out.push_back(moves_[m].id);
    return out;
  }
  std::optional<Position> indices(const std::vector<std::string>& ids) const {
    Position p;
    for (const auto& id : ids) {
      auto m = index_of(id);
      if (!m) return std::nullopt;
      p.push_back(*m);
    }
    return p;
  }
  bool contains(const std::vector<std::string>& ids) const {
    auto p = indices(ids);
    return p && positions_.contains(*p);
  }

  std::set<std::vector<std::string>> position_set() const {
    std::set<std::vector<std::string>> out;
    positions_.walk([&](State n) { out.insert(ids(positions_.sequence(n))); });
    return out;
  }

  // Extensional equality: same labelled move ids and same positions by id.
  friend bool operator==(const Game& a, const Game& b) {
    if (a.moves_.size() != b.moves_.size()) return false;
    for (const auto& m : a.moves_) {
      auto j = b.index_of(m.id);
      if (!j || b.label(*j) != m.label) return false;
    }
    auto mapped = a.positions_.remapped([&](MoveIndex m) { return *b.index_of(a.moves_[m].id); });
    return mapped == b.positions_;
  }

 private:
  std::vector<Move> moves_;
  PositionTree positions_;
  std::unordered_map<std::string, MoveIndex> index_;
};

// ---------------------------------------------------------------------------
// Constructions

inline Game unit() { return Game(); }

inline Game dual(const Game& g) {
  std::vector<Move> moves = g.moves();
  for (auto& m : moves) m.label = flip(m.label);
  return Game(std::move(moves), g.positions());
}

enum class Connective { Tensor, Par, Lollipop };

inline const char* to_string(Connective c) {
  switch (c) {
    case Connective::Tensor: return "tensor";
    case Connective::Par: return "par";
    case Connective::Lollipop: return "lollipop";
  }
  return "?";
}

// Interleavings of a and b: alternating, component restrictions valid, and every
// change of component made by Opponent (tensor) or by Player (par).
// Moves are tagged "1." (left) and "2." (right); lollipop dualizes the left side.
inline Game combine(Connective kind, const Game& a, const Game& b) {
  const bool left_flipped = kind == Connective::Lollipop;
  const Label switcher = kind == Connective::Tensor ? Label::O : Label::P;

  std::vector<Move> moves;
  moves.reserve(a.move_count() + b.move_count());
  for (const auto& m : a.moves()) moves.push_back({"1." + m.id, left_flipped ? flip(m.label) : m.label});
  for (const auto& m : b.moves()) moves.push_back({"2." + m.id, m.label});
  const auto offset = static_cast<MoveIndex>(a.move_count());

  PositionTree out;
  struct Frame {
    Game::State sa, sb, node;
    int side;  // 0 none yet, 1 left, 2 right
  };
  std::vector<Frame> stack{{a.initial(), b.initial(), PositionTree::root(), 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const bool has_last = f.node != PositionTree::root();
    const Label last = has_last ? moves[out.last_move(f.node)].label : Label::P;
    auto try_side = [&](int side, const Game& g, Game::State s, MoveIndex base) {
      for (const auto& e : g.positions().children(s)) {
        const MoveIndex m = base + e.move;
        const Label l = moves[m].label;
        if (has_last && l == last) continue;
        if (f.side != 0 && f.side != side && l != switcher) continue;
        const auto node = out.insert(f.node, m);
        stack.push_back(side == 1 ? Frame{e.node, f.sb, node, 1} : Frame{f.sa, e.node, node, 2});
      }
    };
    try_side(1, a, f.sa, 0);
    try_side(2, b, f.sb, offset);
  }
  return Game(std::move(moves), std::move(out));
}

inline Game tensor(const Game& a, const Game& b) { return combine(Connective::Tensor, a, b); }
inline Game par(const Game& a, const Game& b) { return combine(Connective::Par, a, b); }
inline Game lollipop(const Game& a, const Game& b) { return combine(Connective::Lollipop, a, b); }

// Opponent or Player commits to one side with the opening move; the moves
// are tagged "1." and "2." as for the connectives.
inline Game disjoint_union(const Game& a, const Game& b) {
  std::vector<Move> moves;
  for (const auto& m : a.moves()) moves.push_back({"1." + m.id, m.label});
  for (const auto& m : b.moves()) moves.push_back({"2." + m.id, m.label});
  PositionTree out;
  const auto offset = static_cast<MoveIndex>(a.move_count());
  a.positions().walk([&](PositionTree::NodeId n) { out.insert(a.positions().sequence(n)); });
  b.positions().walk([&](PositionTree::NodeId n) {
    Position p = b.positions().sequence(n);
    for (auto& m : p) m += offset;
    out.insert(p);
  });
  return Game(std::move(moves), std::move(out));
}

// Rename every move id with a function; the positions are unchanged.
inline Game retagged(const Game& g, const std::function<std::string(const std::string&)>& rename) {
  std::vector<Move> moves = g.moves();
  for (auto& m : moves) m.id = rename(m.id);
  return Game(std::move(moves), g.positions());
}

enum class Sign { Plus, Minus };

// A+ drops positions opened by Opponent, A- drops positions opened by Player.
inline Game polarize(Sign sign, const Game& g) {
  const Label dropped = sign == Sign::Plus ? Label::O : Label::P;
  PositionTree out;
  std::vector<PositionTree::NodeId> image(g.positions().size());
  std::vector<bool> keep(g.positions().size(), false);
  keep[0] = true;
  g.positions().walk([&](PositionTree::NodeId n) {
    if (n == PositionTree::root()) return;
    const auto parent = g.positions().parent(n);
    const auto m = g.positions().last_move(n);
    if (!keep[parent] || (parent == PositionTree::root() && g.label(m) == dropped)) return;
    keep[n] = true;
    image[n] = out.insert(image[parent], m);
  });
  return Game(g.moves(), std::move(out));
}

struct GamePolarity {
  Polarity value;
  bool empty;  // no opening moves at all: both +1 and -1 hold vacuously
  friend bool operator==(const GamePolarity&, const GamePolarity&) = default;
};

inline GamePolarity game_polarity(const Game& g) {
  bool any_p = false, any_o = false;
  for (const auto& e : g.positions().children(g.initial())) (g.label(e.move) == Label::P ? any_p : any_o) = true;
  if (!any_p && !any_o) return {Polarity::Neutral, true};
  if (any_p && any_o) return {Polarity::Neutral, false};
  return {any_p ? Polarity::Positive : Polarity::Negative, false};
}

// ---------------------------------------------------------------------------
// Catalog

namespace builtin {

// One Opponent move b.
inline Game B() { return Game::from_description({{{"b", Label::O}}, {{}, {"b"}}}); }
inline Game Bdual() { return dual(B()); }
// Opponent opens with a', Player answers b'.
inline Game C() {
  return Game::from_description({{{"a'", Label::O}, {"b'", Label::P}}, {{}, {"a'"}, {"a'", "b'"}}});
}
inline Game Cflip() { return dual(C()); }

// B + B⊥: either side may open, with a single move.
inline Game BplusBdual() { return disjoint_union(B(), Bdual()); }

// The probe games of the extraction argument.
inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"unit", "B", "Bdual", "C", "Cflip"};
  return n;
}

inline std::optional<Game> by_name(std::string_view name) {
  if (name == "unit") return unit();
  if (name == "B") return B();
  if (name == "Bdual") return Bdual();
  if (name == "C") return C();
  if (name == "Cflip") return Cflip();
  if (name == "B+Bdual") return BplusBdual();
  return std::nullopt;
}

}  // namespace builtin

// ---------------------------------------------------------------------------
// Sequent instantiation

using Assignment = std::map<Atom, Game>;

class MissingAtom : public std::runtime_error {
 public:
  explicit MissingAtom(Atom a)
      : std::runtime_error("no game assigned to atom '" + a.name() + "'"), atom_(std::move(a)) {}
  const Atom& atom() const { return atom_; }

 private:
  Atom atom_;
};

inline const Game& assigned(const Assignment& asg, const Atom& a) {
  auto it = asg.find(a);
  if (it == asg.end()) throw MissingAtom(a);
  return it->second;
}

namespace detail {

inline Game instantiate_formula(const Formula& f, const Assignment& asg) {
  if (f.is_literal()) {
    const Game& g = assigned(asg, f.atom());
    return f.negated() ? dual(g) : g;
  }
  return combine(f.is_tensor() ? Connective::Tensor : Connective::Par, instantiate_formula(f.left(), asg),
                 instantiate_formula(f.right(), asg));
}

// Strip the connective path prefix ("1.2.1.") and return the base move name.
inline std::string base_name(const std::string& id, std::size_t depth) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < depth; ++i) pos = id.find('.', pos) + 1;
  return id.substr(pos);
}

}  // namespace detail

// The game of the par of the sequent, with each constituent's moves tagged by
// its occurrence number: occurrence i contributes moves "i.m".
inline Game instantiate(const Sequent& s, const Assignment& asg) {
  std::vector<std::size_t> depth;  // connective depth of each occurrence, commas included
  std::vector<std::size_t> moves_per;
  std::optional<Game> acc;
  for (std::size_t k = 0; k < s.formulas.size(); ++k) {
    const Formula& f = s.formulas[k];
    std::vector<std::size_t> d;
    std::function<void(const Formula&, std::size_t)> collect = [&](const Formula& g, std::size_t level) {
      if (g.is_literal()) {
        d.push_back(level);
        moves_per.push_back(assigned(asg, g.atom()).move_count());
        return;
      }
      collect(g.left(), level + 1);
      collect(g.right(), level + 1);
    };
    collect(f, 0);
    Game g = detail::instantiate_formula(f, asg);
    if (!acc) {
      acc = std::move(g);
    } else {
      for (auto& x : depth) ++x;
      for (auto& x : d) ++x;
      acc = combine(Connective::Par, *acc, g);
    }
    depth.insert(depth.end(), d.begin(), d.end());
  }
  std::vector<Move> moves = acc->moves();
  std::size_t m = 0;
  for (std::size_t occ = 0; occ < depth.size(); ++occ) {
    for (std::size_t k = 0; k < moves_per[occ]; ++k, ++m)
      moves[m].id = std::to_string(occ + 1) + "." + detail::base_name(moves[m].id, depth[occ]);
  }
  return Game(std::move(moves), acc->positions());
}

// ---------------------------------------------------------------------------
// Serialization: {"moves":[{"id":..,"label":"P"|"O"}], "positions":[[ids..]..]}

inline nlohmann::json to_json(const Game& g) {
  nlohmann::json moves = nlohmann::json::array();
  for (const auto& m : g.moves()) moves.push_back({{"id", m.id}, {"label", to_string(m.label)}});
  nlohmann::json positions = nlohmann::json::array();
  g.positions().walk([&](Game::State n) { positions.push_back(g.ids(g.positions().sequence(n))); });
  return {{"moves", moves}, {"positions", positions}};
}

inline GameDescription description_from_json(const nlohmann::json& j) {
  GameDescription d;
  for (const auto& m : j.at("moves")) {
    const auto label = m.at("label").get<std::string>();
    if (label != "P" && label != "O") throw std::invalid_argument("move label must be \"P\" or \"O\"");
    d.moves.push_back({m.at("id").get<std::string>(), label == "P" ? Label::P : Label::O});
  }
  for (const auto& p : j.at("positions")) d.positions.push_back(p.get<std::vector<std::string>>());
  return d;
}

inline Game game_from_json(const nlohmann::json& j) { return Game::from_description(description_from_json(j)); }

}  // namespace mllgames
