#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "formula.hpp"

namespace mllgames {

// Axiom links: a perfect matching of literal occurrences, stored as sorted
// (smaller, larger) pairs of 1-based occurrence ids.
class Linking {
 public:
  Linking() = default;
  explicit Linking(std::vector<std::pair<std::size_t, std::size_t>> pairs) : pairs_(std::move(pairs)) {
    for (auto& [i, j] : pairs_)
      if (i > j) std::swap(i, j);
    std::sort(pairs_.begin(), pairs_.end());
  }

  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  // Partner of occurrence i, or 0 when i is unmatched.
  std::size_t operator()(std::size_t i) const {
    for (const auto& [a, b] : pairs_) {
      if (a == i) return b;
      if (b == i) return a;
    }
    return 0;
  }

  // phi as a vector indexed by occurrence id (entry 0 unused).
  std::vector<std::size_t> as_map(std::size_t n) const {
    std::vector<std::size_t> phi(n + 1, 0);
    for (const auto& [a, b] : pairs_) {
      if (a <= n) phi[a] = b;
      if (b <= n) phi[b] = a;
    }
    return phi;
  }

  friend bool operator==(const Linking&, const Linking&) = default;
  friend auto operator<=>(const Linking&, const Linking&) = default;

 private:
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

inline std::string to_string(const Linking& l) {
  std::string out;
  for (const auto& [a, b] : l.pairs()) {
    if (!out.empty()) out += ",";
    out += std::to_string(a) + "-" + std::to_string(b);
  }
  return out;
}

inline constexpr std::string_view linking_grammar =
    "links = pair (',' pair)*\n"
    "pair  = occurrence '-' occurrence     (1-based literal positions, left to right)";

class LinkingSyntaxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Linking parse_linking(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  auto number = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw LinkingSyntaxError("bad occurrence '" + std::string(s) + "'");
    return static_cast<std::size_t>(std::stoul(std::string(s)));
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) throw LinkingSyntaxError("expected 'i-j', got '" + std::string(item) + "'");
    pairs.emplace_back(number(item.substr(0, dash)), number(item.substr(dash + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw LinkingSyntaxError("trailing ','");
  }
  return Linking(std::move(pairs));
}

class InvalidLinking : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Empty string when the linking is a fixpoint-free involution pairing dual literals.
inline std::string linking_problem(const OccurrenceIndex& occ, const Linking& l) {
  std::vector<int> seen(occ.size() + 1, 0);
  for (const auto& [a, b] : l.pairs()) {
    if (a == 0 || b > occ.size()) return "occurrence out of range in " + std::to_string(a) + "-" + std::to_string(b);
    if (a == b) return "occurrence " + std::to_string(a) + " linked to itself";
    if (++seen[a] > 1) return "occurrence " + std::to_string(a) + " linked twice";
    if (++seen[b] > 1) return "occurrence " + std::to_string(b) + " linked twice";
    const auto &x = occ.at(OccurrenceId{a}), &y = occ.at(OccurrenceId{b});
    if (x.atom != y.atom || x.negated == y.negated)
      return "occurrences " + std::to_string(a) + " and " + std::to_string(b) + " are not dual literals";
  }
  for (std::size_t i = 1; i <= occ.size(); ++i)
    if (!seen[i]) return "occurrence " + std::to_string(i) + " is not linked";
  return {};
}

struct ProofStructure {
  Sequent sequent;
  Linking linking;

  ProofStructure(Sequent s, Linking l) : sequent(std::move(s)), linking(std::move(l)) {
    if (auto p = linking_problem(literal_occurrences(sequent), linking); !p.empty()) throw InvalidLinking(p);
  }
};

// Every perfect dual matching, in lexicographic order of sorted pair lists.
template <class Fn>
void for_each_linking(const Sequent& s, Fn&& fn) {
  const auto occ = literal_occurrences(s);
  if (!occ.balanced) return;
  const std::size_t n = occ.size();
  std::vector<bool> used(n + 1, false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    while (from <= n && used[from]) ++from;
    if (from > n) {
      fn(Linking(pairs));
      return;
    }
    const auto& x = occ.at(OccurrenceId{from});
    used[from] = true;
    for (std::size_t j = from + 1; j <= n; ++j) {
      const auto& y = occ.at(OccurrenceId{j});
      if (used[j] || y.atom != x.atom || y.negated == x.negated) continue;
      used[j] = true;
      pairs.emplace_back(from, j);
      rec(from + 1);
      pairs.pop_back();
      used[j] = false;
    }
    used[from] = false;
  };
  rec(1);
}

inline std::vector<Linking> enumerate_linkings(const Sequent& s) {
  std::vector<Linking> out;
  for_each_linking(s, [&](Linking l) { out.push_back(std::move(l)); });
  return out;
}

// ---------------------------------------------------------------------------
// Switchings and formation graphs

enum class Side : unsigned char { L, R };

// One choice per par, indexed by par number (pre-order) minus one.
using Switching = std::vector<Side>;

inline std::string to_string(const Switching& sw) {
  std::string out;
  for (std::size_t i = 0; i < sw.size(); ++i) {
    if (i) out += ",";
    out += "par" + std::to_string(i + 1) + "=" + (sw[i] == Side::L ? "L" : "R");
  }
  return out;
}

class SwitchingMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FormationEdge {
  int u, v;  // node indices into the forest
  bool axiom;
  friend bool operator==(const FormationEdge&, const FormationEdge&) = default;
};

struct FormationGraph {
  FormationForest forest;
  std::vector<FormationEdge> edges;

  std::string name(int node) const { return forest.node_name(node); }
  std::string edge_name(const FormationEdge& e) const {
    return (e.axiom ? "ax " : "") + name(e.u) + "-" + name(e.v);
  }
};

inline FormationGraph build_graph(const ProofStructure& ps, const Switching& sw) {
  FormationGraph g{FormationForest(ps.sequent), {}};
  if (sw.size() != g.forest.par_nodes.size())
    throw SwitchingMismatch("switching has " + std::to_string(sw.size()) + " choices but the sequent has " +
                            std::to_string(g.forest.par_nodes.size()) + " pars");
  for (int n = 0; n < static_cast<int>(g.forest.nodes.size()); ++n) {
    const auto& node = g.forest.nodes[n];
    if (node.kind == Formula::Kind::Tensor) {
      g.edges.push_back({n, node.left, false});
      g.edges.push_back({n, node.right, false});
    } else if (node.kind == Formula::Kind::Par) {
      g.edges.push_back({n, sw[node.number - 1] == Side::L ? node.left : node.right, false});
    }
  }
  for (const auto& [a, b] : ps.linking.pairs())
    g.edges.push_back({g.forest.leaf_of_occurrence[a - 1], g.forest.leaf_of_occurrence[b - 1], true});
  return g;
}

// A closed walk through the graph as node indices, first node repeated at the end.
inline std::optional<std::vector<int>> find_cycle(const FormationGraph& g) {
  const int n = static_cast<int>(g.forest.nodes.size());
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbour, edge index)
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    adj[g.edges[e].u].emplace_back(g.edges[e].v, e);
    adj[g.edges[e].v].emplace_back(g.edges[e].u, e);
  }
  std::vector<int> parent_edge(n, -2), stack_path;
  std::vector<int> state(n, 0);  // 0 unseen, 1 on path, 2 done
  std::optional<std::vector<int>> cycle;
  std::function<void(int)> dfs = [&](int u) {
    state[u] = 1;
    stack_path.push_back(u);
    for (const auto& [v, e] : adj[u]) {
      if (cycle) return;
      if (e == parent_edge[u]) continue;
      if (state[v] == 1) {
        auto it = std::find(stack_path.begin(), stack_path.end(), v);
        cycle = std::vector<int>(it, stack_path.end());
        cycle->push_back(v);
        return;
      }
      if (state[v] == 0) {
        parent_edge[v] = e;
        dfs(v);
      }
    }
    stack_path.pop_back();
    state[u] = 2;
  };
  for (int u = 0; u < n && !cycle; ++u)
    if (state[u] == 0) dfs(u);
  return cycle;
}

struct NetVerdict {
  bool net = true;
  std::optional<Switching> switching;  // first failing switching
  std::vector<int> cycle;              // node indices, closed
  std::vector<std::string> cycle_names;
  std::size_t switchings_checked = 0;
};

namespace detail {

inline Switching switching_from_index(std::size_t index, std::size_t pars) {
  Switching sw(pars);
  for (std::size_t j = 0; j < pars; ++j) sw[j] = (index >> (pars - 1 - j)) & 1 ? Side::R : Side::L;
  return sw;
}

// Union-find acyclicity test of one switching, without building names.
inline bool switching_acyclic(const FormationForest& f, const std::vector<std::pair<int, int>>& axioms,
                              std::size_t index) {
  const std::size_t pars = f.par_nodes.size();
  std::vector<int> parent(f.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  };
  for (int n = 0; n < static_cast<int>(f.nodes.size()); ++n) {
    const auto& node = f.nodes[n];
    if (node.kind == Formula::Kind::Tensor) {
      if (!unite(n, node.left) || !unite(n, node.right)) return false;
    } else if (node.kind == Formula::Kind::Par) {
      const bool right = (index >> (pars - node.number)) & 1;
      if (!unite(n, right ? node.right : node.left)) return false;
    }
  }
  for (const auto& [a, b] : axioms)
    if (!unite(a, b)) return false;
  return true;
}

}  // namespace detail

// Acyclic under every switching. Switchings are tried in lexicographic order
// with the first par most significant and L before R.
inline NetVerdict is_proof_net(const ProofStructure& ps) {
  const FormationForest forest(ps.sequent);
  std::vector<std::pair<int, int>> axioms;
  for (const auto& [a, b] : ps.linking.pairs())
    axioms.emplace_back(forest.leaf_of_occurrence[a - 1], forest.leaf_of_occurrence[b - 1]);
  const std::size_t pars = forest.par_nodes.size();
  NetVerdict v;
  for (std::size_t k = 0; k < (std::size_t{1} << pars); ++k) {
    ++v.switchings_checked;
    if (detail::switching_acyclic(forest, axioms, k)) continue;
    v.net = false;
    v.switching = detail::switching_from_index(k, pars);
    const auto g = build_graph(ps, *v.switching);
    v.cycle = *find_cycle(g);
    for (int node : v.cycle) v.cycle_names.push_back(g.name(node));
    return v;
  }
  return v;
}

inline std::vector<Switching> all_switchings(std::size_t pars) {
  std::vector<Switching> out;
  for (std::size_t k = 0; k < (std::size_t{1} << pars); ++k) out.push_back(detail::switching_from_index(k, pars));
  return out;
}

// ---------------------------------------------------------------------------
// Binary relabelling and proof search

inline std::string fresh_atom_name(std::size_t k) {
  std::string s(1, static_cast<char>('a' + k % 26));
  if (k >= 26) s += std::to_string(k / 26);
  return s;
}

// Same shape, one fresh atom per axiom link; fresh names follow the order of
// each link's smaller occurrence.
inline Sequent binary_relabel(const ProofStructure& ps) {
  const auto phi = ps.linking.as_map(ps.sequent.literal_count());
  std::vector<std::string> name_of(phi.size());
  std::size_t next = 0;
  for (const auto& [a, b] : ps.linking.pairs()) name_of[a] = name_of[b] = fresh_atom_name(next++);
  std::size_t occ = 0;
  std::function<Formula(const Formula&)> relabel = [&](const Formula& f) -> Formula {
    if (f.is_literal()) return Formula::literal(name_of[++occ], f.negated());
    Formula l = relabel(f.left());
    Formula r = relabel(f.right());
    return Formula::binary(f.kind(), l, r);
  };
  Sequent out;
  for (const auto& f : ps.sequent.formulas) out.formulas.push_back(relabel(f));
  return out;
}

inline std::vector<Linking> prove(const Sequent& s) {
  std::vector<Linking> nets;
  for_each_linking(s, [&](Linking l) {
    if (is_proof_net(ProofStructure(s, l)).net) nets.push_back(std::move(l));
  });
  return nets;
}

}  // namespace mllgames
