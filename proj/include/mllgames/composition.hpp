#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "game.hpp"
#include "strategy.hpp"

namespace mllgames {

class NonStrategyResult : public std::runtime_error {
 public:
  explicit NonStrategyResult(std::vector<StrategyViolation> v)
      : std::runtime_error(summary(v)), violations_(std::move(v)) {}
  const std::vector<StrategyViolation>& violations() const { return violations_; }

 private:
  static std::string summary(const std::vector<StrategyViolation>& v) {
    std::string s = "composite is not a strategy";
    for (const auto& x : v) s += std::string("; ") + to_string(x.kind) + ": " + x.detail;
    return s;
  }
  std::vector<StrategyViolation> violations_;
};

namespace detail {

inline bool has_prefix(std::string_view id, std::string_view prefix) { return id.substr(0, prefix.size()) == prefix; }

inline std::string strip(std::string_view id, std::string_view prefix) { return std::string(id.substr(prefix.size())); }

}  // namespace detail

// sigma;tau over local strings on A, B, C with B hidden. The three games are
// A⊸B, B⊸C and A⊸C as built by lollipop(), so moves carry "1."/"2." tags.
inline Strategy compose_sets(const Game& ab, const Game& bc, const Game& ac, const Strategy& sigma,
                             const Strategy& tau) {
  enum Comp : int { None = 0, A = 1, B = 2, C = 3 };
  struct Role {
    Comp comp;
    MoveIndex target;  // index in A⊸C for A/C moves, in the partner game for B moves
  };
  auto roles = [&](const Game& g, const Game& partner, bool left_is_b) {
    std::vector<Role> out;
    for (const auto& m : g.moves()) {
      const bool left = detail::has_prefix(m.id, "1.");
      const std::string rest = detail::strip(m.id, "2.");
      if (left == left_is_b) {
        const std::string partner_id = (left_is_b ? "2." : "1.") + detail::strip(m.id, left ? "1." : "2.");
        out.push_back({B, move_index(partner, partner_id)});
      } else {
        out.push_back({left ? A : C, move_index(ac, m.id)});
      }
    }
    return out;
  };
  const auto ab_roles = roles(ab, bc, false);
  const auto bc_roles = roles(bc, ab, true);

  Strategy out;
  std::set<std::tuple<PositionTree::NodeId, PositionTree::NodeId, int>> seen;
  struct Frame {
    PositionTree::NodeId s, t, node;
    Comp last;
  };
  std::vector<Frame> stack{{PositionTree::root(), PositionTree::root(), PositionTree::root(), None}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (!seen.emplace(f.s, f.t, f.last).second) continue;
    for (const auto& e : sigma.positions.children(f.s)) {
      const Role r = ab_roles[e.move];
      if (r.comp == A) {
        if (f.last == C) continue;
        stack.push_back({e.node, f.t, out.positions.insert(f.node, r.target), A});
      } else if (auto tn = tau.positions.child(f.t, r.target)) {
        stack.push_back({e.node, *tn, f.node, B});
      }
    }
    for (const auto& e : tau.positions.children(f.t)) {
      const Role r = bc_roles[e.move];
      if (r.comp != C || f.last == A) continue;
      stack.push_back({f.s, e.node, out.positions.insert(f.node, r.target), C});
    }
  }
  auto violations = validate_strategy(ac, out);
  if (!violations.empty()) throw NonStrategyResult(std::move(violations));
  return out;
}

class ChatteringDivergence : public std::runtime_error {
 public:
  explicit ChatteringDivergence(std::vector<std::string> trace)
      : std::runtime_error(summary(trace)), trace_(std::move(trace)) {}
  const std::vector<std::string>& trace() const { return trace_; }

 private:
  static std::string summary(const std::vector<std::string>& t) {
    std::string s = "internal chattering:";
    for (const auto& x : t) s += " " + x;
    return s;
  }
  std::vector<std::string> trace_;
};

// Execution formula: an external Opponent move is passed to f (if in A) or g
// (if in C); answers in B are renamed into the other function's B-copy and
// fed back until one exits into A or C.
inline HistoryFreeFunction compose_exec(const HistoryFreeFunction& f, const HistoryFreeFunction& g) {
  HistoryFreeFunction h;
  auto run = [&](const std::string& input, bool start_with_f) {
    std::set<std::pair<bool, std::string>> visited;
    std::vector<std::string> trace{input};
    bool in_f = start_with_f;
    std::string move = input;
    for (;;) {
      auto r = in_f ? f(move) : g(move);
      if (!r) return;
      trace.push_back(*r);
      const bool exits = in_f ? detail::has_prefix(*r, "1.") : detail::has_prefix(*r, "2.");
      if (exits) {
        h.set(input, *r);
        return;
      }
      move = (in_f ? "1." : "2.") + detail::strip(*r, in_f ? "2." : "1.");
      in_f = !in_f;
      if (!visited.emplace(in_f, move).second) throw ChatteringDivergence(trace);
    }
  };
  for (const auto& [o, p] : f.entries())
    if (detail::has_prefix(o, "1.")) run(o, true);
  for (const auto& [o, p] : g.entries())
    if (detail::has_prefix(o, "2.")) run(o, false);
  return h;
}

// ---------------------------------------------------------------------------
// Copycat and the structure maps, all as history-free functions that copy
// along a bijection between the moves of the two sides of a lollipop.

struct MovePairing {
  Game source, target;
  std::vector<std::pair<std::string, std::string>> pairs;  // (source move id, target move id)
};

// In source⊸target, each pair is ("1."+s, "2."+t) with opposite labels; the
// Opponent end is mapped to the Player end.
inline HistoryFreeFunction copy_along(const MovePairing& p) {
  HistoryFreeFunction f;
  for (const auto& [s, t] : p.pairs) {
    const auto si = p.source.index_of(s);
    const auto ti = p.target.index_of(t);
    if (!si || !ti) throw UnknownMoveId(!si ? s : t);
    if (p.source.label(*si) != p.target.label(*ti))
      throw InvalidFunction("paired moves " + s + " and " + t + " carry different labels");
    if (p.target.label(*ti) == Label::O)
      f.set("2." + t, "1." + s);
    else
      f.set("1." + s, "2." + t);
  }
  return f;
}

inline MovePairing inverse(const MovePairing& p) {
  MovePairing q{p.target, p.source, {}};
  for (const auto& [s, t] : p.pairs) q.pairs.emplace_back(t, s);
  return q;
}

inline MovePairing identity_pairing(const Game& g) {
  MovePairing p{g, g, {}};
  for (const auto& m : g.moves()) p.pairs.emplace_back(m.id, m.id);
  return p;
}

inline HistoryFreeFunction copycat_function(const Game& g) { return copy_along(identity_pairing(g)); }

inline Strategy copycat(const Game& g) { return induce(lollipop(g, g), copycat_function(g)); }

namespace detail {

// Replace a leading prefix according to the first matching rule.
inline std::string retag(const std::string& id, const std::vector<std::pair<std::string, std::string>>& rules) {
  for (const auto& [from, to] : rules)
    if (has_prefix(id, from)) return to + strip(id, from);
  throw std::invalid_argument("move '" + id + "' matches no retagging rule");
}

inline HistoryFreeFunction retag_function(const HistoryFreeFunction& f,
                                          const std::vector<std::pair<std::string, std::string>>& rules) {
  HistoryFreeFunction out;
  for (const auto& [o, p] : f.entries()) out.set(retag(o, rules), retag(p, rules));
  return out;
}

}  // namespace detail

// f: A⊸B and f2: A'⊸B' give (A⊗A')⊸(B⊗B').
inline HistoryFreeFunction tensor_hf(const HistoryFreeFunction& f, const HistoryFreeFunction& f2) {
  HistoryFreeFunction out = detail::retag_function(f, {{"1.", "1.1."}, {"2.", "2.1."}});
  const HistoryFreeFunction right = detail::retag_function(f2, {{"1.", "1.2."}, {"2.", "2.2."}});
  for (const auto& [o, p] : right.entries()) out.set(o, p);
  return out;
}

// Message switching in ((A⊸B)⊗A)⊸B: the function's B part is wired to the
// result and the function's A part to the argument.
inline HistoryFreeFunction apply_hf(const Game& a, const Game& b) {
  const Game ab = lollipop(a, b);
  const Game source = tensor(ab, a);
  MovePairing p{source, b, {}};
  for (const auto& m : b.moves()) p.pairs.emplace_back("1.2." + m.id, m.id);
  HistoryFreeFunction f = copy_along(p);
  for (const auto& m : a.moves()) {
    const std::string fn = "1.1.1." + m.id, arg = "1.2." + m.id;
    // fn carries λ_A(m) and arg its flip inside the whole game
    if (m.label == Label::O)
      f.set(fn, arg);
    else
      f.set(arg, fn);
  }
  return f;
}

// (A⊗B)⊸C to A⊸(B⊸C) and back, by retagging.
inline HistoryFreeFunction curry_hf(const HistoryFreeFunction& f) {
  return detail::retag_function(f, {{"1.1.", "1."}, {"1.2.", "2.1."}, {"2.", "2.2."}});
}

inline HistoryFreeFunction uncurry_hf(const HistoryFreeFunction& f) {
  return detail::retag_function(f, {{"1.", "1.1."}, {"2.1.", "1.2."}, {"2.2.", "2."}});
}

enum class IsoKind { Assoc, Symm, UnitL, UnitR, DualIntro };

inline const char* to_string(IsoKind k) {
  switch (k) {
    case IsoKind::Assoc: return "assoc";
    case IsoKind::Symm: return "symm";
    case IsoKind::UnitL: return "unit_l";
    case IsoKind::UnitR: return "unit_r";
    case IsoKind::DualIntro: return "dual_intro";
  }
  return "?";
}

inline std::size_t iso_arity(IsoKind k) {
  switch (k) {
    case IsoKind::Assoc: return 3;
    case IsoKind::Symm: return 2;
    default: return 1;
  }
}

// Source and target games of a structural isomorphism and its move bijection:
//   assoc       (A⊗B)⊗C ≅ A⊗(B⊗C)
//   symm        A⊗B ≅ B⊗A
//   unit_l      1⊗A ≅ A
//   unit_r      A⊗1 ≅ A
//   dual_intro  A⊸⊥ ≅ A⊥
inline MovePairing iso_pairing(IsoKind kind, const std::vector<Game>& games) {
  if (games.size() != iso_arity(kind))
    throw std::invalid_argument(std::string(to_string(kind)) + " takes " + std::to_string(iso_arity(kind)) +
                                " game(s)");
  MovePairing p;
  auto pair_all = [&](const Game& g, const std::string& s, const std::string& t) {
    for (const auto& m : g.moves()) p.pairs.emplace_back(s + m.id, t + m.id);
  };
  switch (kind) {
    case IsoKind::Assoc: {
      const Game &a = games[0], &b = games[1], &c = games[2];
      p.source = tensor(tensor(a, b), c);
      p.target = tensor(a, tensor(b, c));
      pair_all(a, "1.1.", "1.");
      pair_all(b, "1.2.", "2.1.");
      pair_all(c, "2.", "2.2.");
      break;
    }
    case IsoKind::Symm:
      p.source = tensor(games[0], games[1]);
      p.target = tensor(games[1], games[0]);
      pair_all(games[0], "1.", "2.");
      pair_all(games[1], "2.", "1.");
      break;
    case IsoKind::UnitL:
      p.source = tensor(unit(), games[0]);
      p.target = games[0];
      pair_all(games[0], "2.", "");
      break;
    case IsoKind::UnitR:
      p.source = tensor(games[0], unit());
      p.target = games[0];
      pair_all(games[0], "1.", "");
      break;
    case IsoKind::DualIntro:
      p.source = lollipop(games[0], unit());
      p.target = dual(games[0]);
      pair_all(games[0], "1.", "");
      break;
  }
  return p;
}

inline HistoryFreeFunction structural_iso(IsoKind kind, const std::vector<Game>& games) {
  return copy_along(iso_pairing(kind, games));
}

}  // namespace mllgames
