#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "game.hpp"
#include "position_tree.hpp"

namespace mllgames {

// Anything with labelled moves and a legality oracle over its own states.
template <class G>
concept GameLike = requires(const G& g, const typename G::State& s, MoveIndex m) {
  { g.initial() } -> std::convertible_to<typename G::State>;
  { g.advance(s, m) } -> std::convertible_to<std::optional<typename G::State>>;
  { g.label(m) } -> std::convertible_to<Label>;
  { g.move_id(m) } -> std::convertible_to<std::string>;
  { g.move_count() } -> std::convertible_to<std::size_t>;
  { g.index_of(std::string_view{}) } -> std::convertible_to<std::optional<MoveIndex>>;
};

// Player's strategy: prefix-closed plays, as a trie over the game's move indices.
struct Strategy {
  PositionTree positions;
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

// Opponent's strategy, same representation with the roles exchanged.
struct CounterStrategy {
  PositionTree positions;
  friend bool operator==(const CounterStrategy&, const CounterStrategy&) = default;
};

class UnknownMoveId : public std::invalid_argument {
 public:
  explicit UnknownMoveId(const std::string& id) : std::invalid_argument("unknown move '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

template <GameLike G>
MoveIndex move_index(const G& g, const std::string& id) {
  auto m = g.index_of(id);
  if (!m) throw UnknownMoveId(id);
  return *m;
}

template <class T, GameLike G>
T from_ids(const G& g, const std::vector<std::vector<std::string>>& plays) {
  T s;
  for (const auto& p : plays) {
    Position seq;
    for (const auto& id : p) seq.push_back(move_index(g, id));
    s.positions.insert(seq);
  }
  return s;
}

template <GameLike G>
std::vector<std::vector<std::string>> to_ids(const G& g, const PositionTree& t) {
  std::vector<std::vector<std::string>> out;
  t.walk([&](PositionTree::NodeId n) {
    std::vector<std::string> p;
    for (auto m : t.sequence(n)) p.push_back(g.move_id(m));
    out.push_back(std::move(p));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Validation of (s1)-(s3) and the counter-strategy variants

struct StrategyViolation {
  enum class Kind { NotPosition, OpensWithPlayer, Nondeterministic, NotClosed };
  Kind kind;
  std::string detail;
};

inline const char* to_string(StrategyViolation::Kind k) {
  switch (k) {
    case StrategyViolation::Kind::NotPosition: return "not a position of the game";
    case StrategyViolation::Kind::OpensWithPlayer: return "(s1) opens with a Player move";
    case StrategyViolation::Kind::Nondeterministic: return "(s2) more than one response";
    case StrategyViolation::Kind::NotClosed: return "(s3) missing a legal extension";
  }
  return "?";
}

namespace detail {

template <GameLike G>
std::string show(const G& g, const PositionTree& t, PositionTree::NodeId n) {
  std::vector<std::string> ids;
  for (auto m : t.sequence(n)) ids.push_back(g.move_id(m));
  return join_ids(ids);
}

// `chooser` is the side whose moves are a choice (Player for strategies).
template <GameLike G>
std::vector<StrategyViolation> validate(const G& g, const PositionTree& t, Label chooser) {
  using K = StrategyViolation::Kind;
  std::vector<StrategyViolation> out;
  struct Frame {
    PositionTree::NodeId node;
    typename G::State state;
  };
  std::vector<Frame> stack{{PositionTree::root(), g.initial()}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const auto depth = t.depth(f.node);
    const Label to_move = depth % 2 == 0 ? Label::O : Label::P;
    const auto kids = t.children(f.node);
    if (depth == 0)
      for (const auto& e : kids)
        if (g.label(e.move) != Label::O) out.push_back({K::OpensWithPlayer, show(g, t, e.node)});
    if (to_move == chooser && kids.size() > 1) out.push_back({K::Nondeterministic, show(g, t, f.node)});
    if (to_move != chooser) {
      for (MoveIndex m = 0; m < g.move_count(); ++m) {
        if (g.label(m) != to_move || !g.advance(f.state, m)) continue;
        if (!t.child(f.node, m))
          out.push_back({K::NotClosed, show(g, t, f.node) + " lacks " + g.move_id(m)});
      }
    }
    for (const auto& e : kids) {
      auto next = g.advance(f.state, e.move);
      if (!next) {
        out.push_back({K::NotPosition, show(g, t, e.node)});
        continue;
      }
      stack.push_back({e.node, *next});
    }
  }
  return out;
}

}  // namespace detail

template <GameLike G>
std::vector<StrategyViolation> validate_strategy(const G& g, const Strategy& s) {
  return detail::validate(g, s.positions, Label::P);
}

template <GameLike G>
std::vector<StrategyViolation> validate_counter_strategy(const G& g, const CounterStrategy& t) {
  return detail::validate(g, t.positions, Label::O);
}

// ---------------------------------------------------------------------------
// History-free functions

// A partial map from Opponent move ids to Player move ids.
class HistoryFreeFunction {
 public:
  HistoryFreeFunction() = default;
  HistoryFreeFunction(std::initializer_list<std::pair<const std::string, std::string>> init) : map_(init) {}
  explicit HistoryFreeFunction(std::map<std::string, std::string> m) : map_(std::move(m)) {}

  void set(std::string o, std::string p) { map_[std::move(o)] = std::move(p); }
  void erase(const std::string& o) { map_.erase(o); }
  std::optional<std::string> operator()(const std::string& o) const {
    auto it = map_.find(o);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::string, std::string>& entries() const { return map_; }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }

  friend bool operator==(const HistoryFreeFunction&, const HistoryFreeFunction&) = default;

 private:
  std::map<std::string, std::string> map_;
};

inline std::string to_string(const HistoryFreeFunction& f) {
  std::string out;
  for (const auto& [o, p] : f.entries()) out += o + " -> " + p + "\n";
  return out;
}

// Parses the line format "o-move -> p-move"; blank lines and '#' comments are skipped.
inline HistoryFreeFunction parse_function(std::string_view text) {
  HistoryFreeFunction f;
  std::size_t line_no = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'o-move -> p-move'");
    f.set(std::string(trim(line.substr(0, arrow))), std::string(trim(line.substr(arrow + 2))));
  }
  return f;
}

// The function over a particular game's move indices.
using BoundFunction = std::vector<std::optional<MoveIndex>>;

class InvalidFunction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <GameLike G>
BoundFunction bind(const G& g, const HistoryFreeFunction& f) {
  BoundFunction out(g.move_count());
  for (const auto& [o, p] : f.entries()) {
    const auto mo = move_index(g, o);
    const auto mp = move_index(g, p);
    if (g.label(mo) != Label::O) throw InvalidFunction("domain move '" + o + "' is not an Opponent move");
    if (g.label(mp) != Label::P) throw InvalidFunction("range move '" + p + "' is not a Player move");
    out[mo] = mp;
  }
  return out;
}

template <GameLike G>
HistoryFreeFunction unbind(const G& g, const BoundFunction& f) {
  HistoryFreeFunction out;
  for (MoveIndex m = 0; m < f.size(); ++m)
    if (f[m]) out.set(g.move_id(m), g.move_id(*f[m]));
  return out;
}

class StrategyTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

// sigma_f: close {ε} under Opponent moves and the rule s·a -> s·a·f(a) when legal.
template <GameLike G>
Strategy induce(const G& g, const BoundFunction& f, std::size_t max_positions = 1u << 22) {
  Strategy s;
  struct Frame {
    PositionTree::NodeId node;
    typename G::State state;
  };
  std::vector<Frame> stack{{PositionTree::root(), g.initial()}};
  while (!stack.empty()) {
    const Frame fr = stack.back();
    stack.pop_back();
    for (MoveIndex a = 0; a < g.move_count(); ++a) {
      if (g.label(a) != Label::O) continue;
      auto after_o = g.advance(fr.state, a);
      if (!after_o) continue;
      const auto n_o = s.positions.insert(fr.node, a);
      if (!f[a]) continue;
      auto after_p = g.advance(*after_o, *f[a]);
      if (!after_p) continue;
      stack.push_back({s.positions.insert(n_o, *f[a]), *after_p});
    }
    if (s.positions.size() > max_positions) throw StrategyTooLarge("induced strategy exceeds position cap");
  }
  return s;
}

template <GameLike G>
Strategy induce(const G& g, const HistoryFreeFunction& f, std::size_t max_positions = 1u << 22) {
  return induce(g, bind(g, f), max_positions);
}

class NotHistoryFree : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The least function inducing s: only Opponent moves actually answered.
template <GameLike G>
HistoryFreeFunction canonical_function(const G& g, const Strategy& s) {
  BoundFunction f(g.move_count());
  const auto& t = s.positions;
  t.walk([&](PositionTree::NodeId n) {
    if (t.depth(n) % 2 == 0) return;
    const MoveIndex a = t.last_move(n);
    for (const auto& e : t.children(n)) {
      if (f[a] && *f[a] != e.move)
        throw NotHistoryFree("Opponent move " + g.move_id(a) + " is answered by both " + g.move_id(*f[a]) +
                             " and " + g.move_id(e.move));
      f[a] = e.move;
    }
  });
  for (MoveIndex a = 0; a < f.size(); ++a)
    if (f[a] && (g.label(a) != Label::O || g.label(*f[a]) != Label::P))
      throw NotHistoryFree("strategy is not a valid strategy of the game");
  if (!(induce(g, f) == s))
    throw NotHistoryFree("strategy withholds a legal answer that its answers elsewhere dictate");
  return unbind(g, f);
}

// ---------------------------------------------------------------------------
// Plays and winning

struct Play {
  Position moves;
  Label loser;  // the side to move at the end of the play
};

template <GameLike G>
std::vector<std::string> play_ids(const G& g, const Play& p) {
  std::vector<std::string> out;
  for (auto m : p.moves) out.push_back(g.move_id(m));
  return out;
}

inline Label to_move_after(std::size_t length) { return length % 2 == 0 ? Label::O : Label::P; }

// The join of sigma ∩ tau; both are tries, so their intersection is a chain.
inline Play play_out(const Strategy& s, const CounterStrategy& t) {
  Play p;
  auto a = PositionTree::root(), b = PositionTree::root();
  for (;;) {
    bool advanced = false;
    for (const auto& e : s.positions.children(a)) {
      if (auto nb = t.positions.child(b, e.move)) {
        p.moves.push_back(e.move);
        a = e.node;
        b = *nb;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  p.loser = to_move_after(p.moves.size());
  return p;
}

template <GameLike G>
Play play_out(const G&, const Strategy& s, const CounterStrategy& t) {
  return play_out(s, t);
}

// Winning via the finite-play convention: no maximal play has Player to move.
inline bool is_winning_fast(const Strategy& s) {
  bool ok = true;
  s.positions.walk([&](PositionTree::NodeId n) {
    if (s.positions.is_leaf(n) && s.positions.depth(n) % 2 == 1) ok = false;
  });
  return ok;
}

class EnumerationLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

// Enumerates every strategy (chooser = P) or counter-strategy (chooser = O) of
// a materialized game. Nodes where `chooser` moves take zero or one child;
// the other side's moves are all included.
template <class Fn>
void enumerate_strategies(const Game& g, Label chooser, std::size_t limit, Fn&& fn) {
  const auto& pos = g.positions();
  std::vector<PositionTree::NodeId> members{PositionTree::root()};
  std::size_t emitted = 0;

  std::function<void(std::vector<PositionTree::NodeId>)> rec = [&](std::vector<PositionTree::NodeId> pending) {
    if (pending.empty()) {
      if (++emitted > limit) throw EnumerationLimit("strategy enumeration exceeds limit");
      PositionTree t;
      for (auto n : members) t.insert(pos.sequence(n));
      fn(t);
      return;
    }
    const auto n = pending.back();
    pending.pop_back();
    const Label to_move = pos.depth(n) % 2 == 0 ? Label::O : Label::P;
    std::vector<PositionTree::NodeId> options;
    for (const auto& e : pos.children(n))
      if (g.label(e.move) == to_move) options.push_back(e.node);
    const auto mark = members.size();
    if (to_move == chooser) {
      rec(pending);
      for (auto c : options) {
        members.push_back(c);
        auto next = pending;
        next.push_back(c);
        rec(std::move(next));
        members.resize(mark);
      }
    } else {
      for (auto c : options) {
        members.push_back(c);
        pending.push_back(c);
      }
      rec(std::move(pending));
      members.resize(mark);
    }
  };
  rec({PositionTree::root()});
}

}  // namespace detail

template <class Fn>
void for_each_strategy(const Game& g, Fn&& fn, std::size_t limit = 1u << 20) {
  detail::enumerate_strategies(g, Label::P, limit, [&](PositionTree t) { fn(Strategy{std::move(t)}); });
}

template <class Fn>
void for_each_counter_strategy(const Game& g, Fn&& fn, std::size_t limit = 1u << 20) {
  detail::enumerate_strategies(g, Label::O, limit, [&](PositionTree t) { fn(CounterStrategy{std::move(t)}); });
}

// Winning by definition: beats every counter-strategy.
inline bool is_winning_by_enumeration(const Game& g, const Strategy& s, std::size_t limit = 1u << 20) {
  bool ok = true;
  for_each_counter_strategy(
      g,
      [&](const CounterStrategy& t) {
        if (ok && play_out(s, t).loser == Label::P) ok = false;
      },
      limit);
  return ok;
}

inline bool is_winning(const Strategy& s) { return is_winning_fast(s); }

// Winning check for sigma_f without building it: explores distinct game states
// reachable under f, which is enough because f ignores history. On failure the
// returned play ends with Player to move and f giving no legal answer.
struct HistoryFreeOutcome {
  bool winning;
  Position losing_play;
};

template <GameLike G>
HistoryFreeOutcome check_history_free(const G& g, const BoundFunction& f) {
  using State = typename G::State;
  std::unordered_set<State, typename G::StateHash> seen;
  Position path;
  std::function<bool(const State&)> explore = [&](const State& s) -> bool {
    if (!seen.insert(s).second) return true;
    bool ok = true;
    g.for_each_move(s, [&](MoveIndex a, const State& after_o) {
      if (!ok || g.label(a) != Label::O) return;
      path.push_back(a);
      std::optional<State> after_p;
      if (f[a]) after_p = g.advance(after_o, *f[a]);
      if (!after_p) {
        ok = false;
        return;
      }
      path.push_back(*f[a]);
      if (!explore(*after_p)) {
        ok = false;
        return;
      }
      path.pop_back();
      path.pop_back();
    });
    return ok;
  };
  const bool ok = explore(g.initial());
  return {ok, ok ? Position{} : path};
}

}  // namespace mllgames
