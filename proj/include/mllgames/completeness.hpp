#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arena.hpp"
#include "formula.hpp"
#include "game.hpp"
#include "proofnet.hpp"
#include "semantics.hpp"
#include "strategy.hpp"

namespace mllgames {

class NotBinary : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSimple : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Empty when every atom occurs exactly once positively and once negatively.
inline std::string binary_problem(const Sequent& s) {
  std::map<Atom, std::pair<int, int>> count;
  for (const auto& o : literal_occurrences(s).occurrences) ++(o.negated ? count[o.atom].second : count[o.atom].first);
  for (const auto& [a, c] : count)
    if (c.first != 1 || c.second != 1)
      return "atom " + a.name() + " occurs " + std::to_string(c.first) + " time(s) positively and " +
             std::to_string(c.second) + " time(s) negatively";
  return {};
}

inline bool is_binary(const Sequent& s) { return binary_problem(s).empty(); }

inline bool is_simple(const Sequent& s) {
  for (const auto& f : s.formulas) {
    if (f.is_literal()) continue;
    if (!f.is_tensor() || !f.left().is_literal() || !f.right().is_literal()) return false;
  }
  return true;
}

// The only linking of a binary sequent.
inline Linking binary_linking(const Sequent& s) {
  if (auto p = binary_problem(s); !p.empty()) throw NotBinary(p);
  std::map<Atom, std::pair<std::size_t, std::size_t>> where;
  for (const auto& o : literal_occurrences(s).occurrences)
    (o.negated ? where[o.atom].second : where[o.atom].first) = o.id.value;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [a, w] : where) pairs.emplace_back(w.first, w.second);
  return Linking(std::move(pairs));
}

// ---------------------------------------------------------------------------
// Simplification to simple sequents

namespace detail {

// A binary sequent as a fixed-size forest rewritten in place. Leaves index
// the input's literal occurrences; the rewrites keep the node count, so a
// copy per branch is all the bookkeeping needed.
class CompactSequent {
 public:
  static constexpr std::size_t max_literals = 64;
  enum Kind : std::uint8_t { Lit, Tensor, Par };
  struct Node {
    Kind kind;
    std::uint8_t l, r;  // children, or the occurrence index (0-based) in l for a literal
  };

  explicit CompactSequent(const Sequent& s) {
    if (s.literal_count() > max_literals)
      throw std::length_error("simplification supports at most " + std::to_string(max_literals) + " literals");
    std::uint8_t next_leaf = 0;
    std::function<std::uint8_t(const Formula&)> add = [&](const Formula& f) -> std::uint8_t {
      if (f.is_literal()) return push({Lit, next_leaf++, 0});
      const auto l = add(f.left());
      const auto r = add(f.right());
      return push({f.is_tensor() ? Tensor : Par, l, r});
    };
    for (const auto& f : s.formulas) roots_[root_count_++] = add(f);
  }

  // Replace top-level pars by their operands, keeping their place.
  void pars_to_commas() {
    std::array<std::uint8_t, 2 * max_literals> out;
    std::uint8_t n = 0;
    std::function<void(std::uint8_t)> unfold = [&](std::uint8_t x) {
      if (nodes_[x].kind == Par) {
        unfold(nodes_[x].l);
        unfold(nodes_[x].r);
      } else {
        out[n++] = x;
      }
    };
    for (std::uint8_t k = 0; k < root_count_; ++k) unfold(roots_[k]);
    roots_ = out;
    root_count_ = n;
  }

  // First tensor in post-order, formulas left to right, with a compound child.
  std::optional<std::uint8_t> redex() const {
    std::function<std::optional<std::uint8_t>(std::uint8_t)> find = [&](std::uint8_t x) -> std::optional<std::uint8_t> {
      const Node& n = nodes_[x];
      if (n.kind == Lit) return std::nullopt;
      if (auto a = find(n.l)) return a;
      if (auto b = find(n.r)) return b;
      if (n.kind == Tensor && (nodes_[n.l].kind != Lit || nodes_[n.r].kind != Lit)) return x;
      return std::nullopt;
    };
    for (std::uint8_t k = 0; k < root_count_; ++k)
      if (auto x = find(roots_[k])) return x;
    return std::nullopt;
  }

  // The two rewrites at tensor t:
  //   A⊗(B⅋C) to (A⊗B)⅋C and (A⊗C)⅋B     (B⅋C)⊗A to (B⊗A)⅋C and (C⊗A)⅋B
  //   A⊗(B⊗C) to A⊗(B⅋C) and A⅋(B⊗C)     (B⊗C)⊗A to (B⅋C)⊗A and (B⊗C)⅋A
  std::pair<CompactSequent, CompactSequent> split(std::uint8_t t) const {
    CompactSequent first = *this, second = *this;
    const Node n = nodes_[t];
    const Node x = nodes_[n.l], y = nodes_[n.r];
    if (y.kind == Par) {
      first.nodes_[t] = {Par, n.r, y.r};
      first.nodes_[n.r] = {Tensor, n.l, y.l};
      second.nodes_[t] = {Par, n.r, y.l};
      second.nodes_[n.r] = {Tensor, n.l, y.r};
    } else if (x.kind == Par) {
      first.nodes_[t] = {Par, n.l, x.r};
      first.nodes_[n.l] = {Tensor, x.l, n.r};
      second.nodes_[t] = {Par, n.l, x.l};
      second.nodes_[n.l] = {Tensor, x.r, n.r};
    } else if (y.kind == Tensor) {
      first.nodes_[n.r].kind = Par;
      second.nodes_[t].kind = Par;
    } else {
      first.nodes_[n.l].kind = Par;
      second.nodes_[t].kind = Par;
    }
    return {first, second};
  }

  // Acyclicity of the unique proof structure of a simple binary sequent.
  bool acyclic(const std::vector<std::size_t>& partner) const {
    std::array<std::uint8_t, max_literals> parent;
    for (std::size_t i = 0; i < max_literals; ++i) parent[i] = static_cast<std::uint8_t>(i);
    auto find = [&](std::uint8_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto unite = [&](std::uint8_t a, std::uint8_t b) {
      a = find(a);
      b = find(b);
      if (a == b) return false;
      parent[a] = b;
      return true;
    };
    for (std::uint8_t k = 0; k < root_count_; ++k) {
      const Node& n = nodes_[roots_[k]];
      if (n.kind == Tensor && !unite(nodes_[n.l].l, nodes_[n.r].l)) return false;
    }
    for (std::size_t i = 0; i < partner.size(); ++i)
      if (i < partner[i] && !unite(static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(partner[i]))) return false;
    return true;
  }

  Sequent to_sequent(const OccurrenceIndex& occ) const {
    std::function<Formula(std::uint8_t)> build = [&](std::uint8_t x) -> Formula {
      const Node& n = nodes_[x];
      if (n.kind == Lit) {
        const auto& o = occ.occurrences[n.l];
        return Formula::literal(o.atom, o.negated);
      }
      return Formula::binary(n.kind == Tensor ? Formula::Kind::Tensor : Formula::Kind::Par, build(n.l), build(n.r));
    };
    Sequent s;
    for (std::uint8_t k = 0; k < root_count_; ++k) s.formulas.push_back(build(roots_[k]));
    return s;
  }

 private:
  std::uint8_t push(Node n) {
    nodes_[node_count_] = n;
    return node_count_++;
  }

  std::array<Node, 2 * max_literals> nodes_{};
  std::uint8_t node_count_ = 0;
  std::array<std::uint8_t, 2 * max_literals> roots_{};
  std::uint8_t root_count_ = 0;
};

// Depth-first over the simple sequents, first output fully before the second;
// `visit` returns false to stop.
template <class Fn>
bool for_each_simple(CompactSequent s, Fn&& visit) {
  s.pars_to_commas();
  if (auto t = s.redex()) {
    auto [first, second] = s.split(*t);
    return for_each_simple(first, visit) && for_each_simple(second, visit);
  }
  return visit(s);
}

}  // namespace detail

// Pars at the top become commas; a tensor over a par or over a tensor splits
// into two sequents. The innermost-leftmost redex is rewritten first and the
// first output is simplified completely before the second.
inline std::vector<Sequent> simplify_to_simple(const Sequent& b) {
  if (auto p = binary_problem(b); !p.empty()) throw NotBinary(p);
  const auto occ = literal_occurrences(b);
  std::vector<Sequent> out;
  detail::for_each_simple(detail::CompactSequent(b), [&](const detail::CompactSequent& s) {
    out.push_back(s.to_sequent(occ));
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Verdicts

struct Counterexample {
  Sequent simple;
  // l1^, l2, l2^, ..., ln^, l1 as occurrence ids: even positions labelled tt.
  std::vector<std::size_t> cycle_literals;
  std::vector<std::string> cycle_nodes;
  Assignment instantiation;
  std::vector<std::string> play;
};

// Simple sequents have no pars, so each is checked under its one switching.
struct CertificateEntry {
  std::size_t simple;  // index into Verdict::simple_sequents
  bool acyclic;
};

struct Verdict {
  bool valid = true;
  std::size_t simple_count = 0;  // simple sequents checked
  std::vector<Sequent> simple_sequents;
  std::vector<CertificateEntry> certificate;
  std::optional<Counterexample> counterexample;
};

inline std::vector<std::string> certificate_lines(const Verdict& v) {
  std::vector<std::string> out;
  for (const auto& e : v.certificate)
    out.push_back(to_string(v.simple_sequents[e.simple]) + " | empty switching | " + (e.acyclic ? "acyclic" : "cycle"));
  return out;
}

inline Verdict check_simple(const Sequent& s) {
  if (!is_simple(s)) throw NotSimple("not a sequent of literals and tensors of two literals: " + to_string(s));
  const Linking linking = binary_linking(s);
  const auto phi = linking.as_map(s.literal_count());
  const FormationForest forest(s);
  const auto occ = literal_occurrences(s);
  auto tensor_of = [&](std::size_t i) { return forest.nodes[forest.leaf_of_occurrence[i - 1]].parent; };
  auto sibling = [&](std::size_t i) -> std::size_t {
    const int t = tensor_of(i);
    if (t < 0) return 0;
    const int other = forest.nodes[t].left == forest.leaf_of_occurrence[i - 1] ? forest.nodes[t].right
                                                                                  : forest.nodes[t].left;
    return forest.nodes[other].number;
  };

  Verdict v;
  v.simple_sequents = {s};
  for (std::size_t x = 1; x <= occ.size(); ++x) {
    std::vector<std::size_t> seq;
    std::size_t y = x;
    bool closed = false;
    for (;;) {
      const std::size_t z = sibling(y);
      if (z == 0) break;
      seq.push_back(y);
      seq.push_back(z);
      y = phi[z];
      if (y == x) {
        closed = true;
        break;
      }
    }
    if (!closed) continue;

    Counterexample c;
    c.simple = s;
    c.cycle_literals = seq;
    for (std::size_t k = 0; k < seq.size(); k += 2) {
      c.cycle_nodes.push_back(forest.node_name(forest.leaf_of_occurrence[seq[k] - 1]));
      c.cycle_nodes.push_back(forest.node_name(tensor_of(seq[k])));
      c.cycle_nodes.push_back(forest.node_name(forest.leaf_of_occurrence[seq[k + 1] - 1]));
    }
    for (const auto& a : atoms_of(s)) c.instantiation.emplace(a, unit());
    for (std::size_t k = 0; k < seq.size(); k += 2) {
      const auto& tt = occ.at(OccurrenceId{seq[k]});
      c.instantiation[tt.atom] = tt.negated ? builtin::B() : builtin::Bdual();
    }
    auto move = [](std::size_t i) { return std::to_string(i) + ".b"; };
    c.play.push_back(move(seq.back()));
    for (std::size_t k = 0; k + 2 < seq.size(); ++k) c.play.push_back(move(seq[k]));
    v.valid = false;
    v.certificate.push_back({0, false});
    v.counterexample = std::move(c);
    return v;
  }
  v.certificate.push_back({0, true});
  return v;
}

enum class Record { Full, Summary };

// With Record::Summary the valid simple sequents are counted but not kept.
inline Verdict full_check(const Sequent& g, const Linking& phi, Record record = Record::Full) {
  const ProofStructure ps(g, phi);
  const Sequent binary = binary_relabel(ps);
  const auto occ = literal_occurrences(binary);
  std::vector<std::size_t> partner(occ.size());
  const Linking links = binary_linking(binary);
  for (const auto& [a, b] : links.pairs()) {
    partner[a - 1] = b - 1;
    partner[b - 1] = a - 1;
  }
  Verdict out;
  detail::for_each_simple(detail::CompactSequent(binary), [&](const detail::CompactSequent& s) {
    const bool ok = s.acyclic(partner);
    if (record == Record::Full || !ok) {
      out.simple_sequents.push_back(s.to_sequent(occ));
      out.certificate.push_back({out.simple_sequents.size() - 1, ok});
    }
    ++out.simple_count;
    if (ok) return true;
    Verdict v = check_simple(out.simple_sequents.back());
    if (v.valid) throw std::logic_error("simple sequent check disagrees with union-find");
    out.valid = false;
    out.counterexample = std::move(v.counterexample);
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Replaying a counterexample

// Opponent follows `play`; wherever Player is to move every legal answer is kept.
template <class G>
CounterStrategy counter_strategy_following(const G& g, const Position& play) {
  CounterStrategy t;
  auto state = g.initial();
  auto node = PositionTree::root();
  for (std::size_t k = 0;; ++k) {
    if (k % 2 == 1)
      g.for_each_move(state, [&](MoveIndex m, const auto&) {
        if (g.label(m) == Label::P) t.positions.insert(node, m);
      });
    if (k == play.size()) break;
    auto next = g.advance(state, play[k]);
    if (!next) throw std::invalid_argument("play leaves the game at move " + g.move_id(play[k]));
    node = t.positions.insert(node, play[k]);
    state = *next;
  }
  return t;
}

template <class G>
bool player_stuck(const G& g, const Position& play) {
  auto state = g.initial();
  for (auto m : play) {
    auto next = g.advance(state, m);
    if (!next) return false;
    state = *next;
  }
  if (to_move_after(play.size()) != Label::P) return false;
  bool any = false;
  g.for_each_move(state, [&](MoveIndex m, const auto&) { any = any || g.label(m) == Label::P; });
  return !any;
}

struct Replay {
  std::vector<std::string> play;
  Label loser;
  bool player_stuck;
  bool follows_counterexample;
};

inline Replay replay_counterexample(const Counterexample& c) {
  const Arena arena = Arena::instantiate(c.simple, c.instantiation);
  const Strategy sigma = induce(arena, denote_bound(arena, binary_linking(c.simple)));
  Position expected;
  for (const auto& id : c.play) expected.push_back(move_index(arena, id));
  const Play p = play_out(sigma, counter_strategy_following(arena, expected));
  return {play_ids(arena, p), p.loser, player_stuck(arena, p.moves), p.moves == expected};
}

inline bool defeats(const Replay& r) { return r.follows_counterexample && r.loser == Label::P && r.player_stuck; }

// ---------------------------------------------------------------------------
// Brute-force oracle over the catalog

// The probe games plus B + B⊥, the disjoint union used to instantiate an atom
// that occurs several times when reducing a sequent to its binary form.
inline const std::vector<std::string>& oracle_catalog() {
  static const std::vector<std::string> c{"C", "Cflip", "B", "Bdual", "B+Bdual", "unit"};
  return c;
}

class SemanticOracle {
 public:
  explicit SemanticOracle(Sequent s, std::vector<std::string> catalog = oracle_catalog())
      : sequent_(std::move(s)), atoms_(atoms_of(sequent_)), catalog_(std::move(catalog)) {
    std::vector<Arena::SharedPair> games;
    for (const auto& name : catalog_) {
      const auto g = builtin::by_name(name);
      if (!g) throw std::invalid_argument("unknown catalog game '" + name + "'");
      games.push_back(Arena::share(*g));
    }
    const auto shape = std::make_shared<const Arena::Shape>(sequent_);
    std::vector<std::size_t> pick(atoms_.size(), 0);
    for (;;) {
      std::map<Atom, Arena::SharedPair> asg;
      for (std::size_t k = 0; k < atoms_.size(); ++k) asg.emplace(atoms_[k], games[pick[k]]);
      entries_.push_back({pick, Arena::instantiate(shape, asg)});
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == catalog_.size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }

  const Sequent& sequent() const { return sequent_; }
  std::size_t assignment_count() const { return entries_.size(); }

  // The first catalog assignment under which the denotation is not winning.
  std::optional<std::string> refutation(const Linking& l) const {
    for (const auto& e : entries_)
      if (!check_history_free(e.arena, denote_bound(e.arena, l)).winning) return describe(e.pick);
    return std::nullopt;
  }

  struct Result {
    bool value;
    std::optional<std::string> refuted_by;
    std::optional<bool> counterexample_defeats;  // set when the verdict is Invalid
  };

  Result evaluate(const Linking& l, const Verdict& v) const {
    Result r{true, refutation(l), std::nullopt};
    if (!v.valid) r.counterexample_defeats = defeats(replay_counterexample(*v.counterexample));
    r.value = !r.refuted_by && r.counterexample_defeats.value_or(true);
    return r;
  }

  Result evaluate(const Linking& l) const { return evaluate(l, full_check(sequent_, l)); }

  bool operator()(const Linking& l) const { return evaluate(l).value; }

 private:
  struct Entry {
    std::vector<std::size_t> pick;
    Arena arena;
  };

  std::string describe(const std::vector<std::size_t>& pick) const {
    std::string out;
    for (std::size_t k = 0; k < atoms_.size(); ++k) out += (k ? ", " : "") + atoms_[k].name() + "=" + catalog_[pick[k]];
    return out;
  }

  Sequent sequent_;
  std::vector<Atom> atoms_;
  std::vector<std::string> catalog_;
  std::vector<Entry> entries_;
};

inline bool semantic_oracle(const Sequent& s, const Linking& l) { return SemanticOracle(s)(l); }

}  // namespace mllgames
