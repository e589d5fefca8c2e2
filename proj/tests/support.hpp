#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mllgames.hpp"

namespace support {

using namespace mllgames;

// ---------------------------------------------------------------------------
// Generators

inline Formula random_formula(std::mt19937& rng, std::size_t leaves, std::size_t atoms) {
  if (leaves == 1) {
    std::uniform_int_distribution<std::size_t> pick(0, atoms - 1);
    return Formula::literal(std::string(1, static_cast<char>('a' + pick(rng))), rng() % 2 == 0);
  }
  std::uniform_int_distribution<std::size_t> split(1, leaves - 1);
  const std::size_t l = split(rng);
  return Formula::binary(rng() % 2 ? Formula::Kind::Tensor : Formula::Kind::Par, random_formula(rng, l, atoms),
                         random_formula(rng, leaves - l, atoms));
}

inline Sequent random_sequent(std::mt19937& rng, std::size_t leaves, std::size_t atoms) {
  Sequent s;
  while (leaves > 0) {
    std::uniform_int_distribution<std::size_t> size(1, leaves);
    const std::size_t k = size(rng);
    s.formulas.push_back(random_formula(rng, k, atoms));
    leaves -= k;
  }
  return s;
}

// Random shape, then leaves paired at random, each pair a dual pair of a
// random atom. `leaves` must be even.
inline Sequent random_balanced_sequent(std::mt19937& rng, std::size_t leaves, std::size_t atoms) {
  const Sequent shape = random_sequent(rng, leaves, 1);
  std::vector<std::size_t> order(leaves);
  for (std::size_t i = 0; i < leaves; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::string> name(leaves + 1);
  std::vector<bool> neg(leaves + 1);
  for (std::size_t k = 0; k + 1 < leaves; k += 2) {
    const std::string atom(1, static_cast<char>('a' + rng() % atoms));
    name[order[k]] = name[order[k + 1]] = atom;
    const bool flip = rng() % 2;
    neg[order[k]] = flip;
    neg[order[k + 1]] = !flip;
  }
  std::size_t occ = 0;
  std::function<Formula(const Formula&)> rebuild = [&](const Formula& f) -> Formula {
    if (f.is_literal()) {
      ++occ;
      return Formula::literal(name[occ], neg[occ]);
    }
    Formula l = rebuild(f.left());
    Formula r = rebuild(f.right());
    return Formula::binary(f.kind(), l, r);
  };
  Sequent out;
  for (const auto& f : shape.formulas) out.formulas.push_back(rebuild(f));
  return out;
}

// A random valid game: at most `moves` moves, positions without repeated moves.
inline Game random_game(std::mt19937& rng, std::size_t moves, std::size_t max_len) {
  GameDescription d;
  for (std::size_t i = 0; i < moves; ++i)
    d.moves.push_back({"m" + std::to_string(i), rng() % 2 ? Label::P : Label::O});
  std::vector<std::vector<std::string>> frontier{{}};
  d.positions.push_back({});
  std::vector<std::vector<std::size_t>> used{{}};
  for (std::size_t k = 0; k < frontier.size(); ++k) {
    if (frontier[k].size() == max_len) continue;
    for (std::size_t i = 0; i < moves; ++i) {
      if (std::find(used[k].begin(), used[k].end(), i) != used[k].end()) continue;
      if (!used[k].empty() && d.moves[used[k].back()].label == d.moves[i].label) continue;
      if (rng() % 3 == 0) continue;
      auto p = frontier[k];
      p.push_back(d.moves[i].id);
      auto u = used[k];
      u.push_back(i);
      d.positions.push_back(p);
      frontier.push_back(std::move(p));
      used.push_back(std::move(u));
    }
  }
  return Game::from_description(d);
}

inline std::vector<Game> catalog_games() {
  std::vector<Game> out;
  for (const auto& n : builtin::names()) out.push_back(*builtin::by_name(n));
  return out;
}

// The canonical functions of every winning history-free strategy of g.
inline std::vector<HistoryFreeFunction> winning_functions(const Game& g) {
  std::vector<HistoryFreeFunction> out;
  for_each_strategy(g, [&](const Strategy& s) {
    if (!is_winning_fast(s)) return;
    try {
      out.push_back(canonical_function(g, s));
    } catch (const NotHistoryFree&) {
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

// Sequent-calculus search for an MLL+MIX proof whose axioms are exactly the
// linking: par is decomposed eagerly, then a tensor or a mix splits the
// context into two parts closed under the linking.
class SequentProver {
 public:
  explicit SequentProver(const ProofStructure& ps) : forest_(ps.sequent), phi_(ps.linking.as_map(ps.sequent.literal_count())) {
    leaves_.resize(forest_.nodes.size());
    for (int n = static_cast<int>(forest_.nodes.size()) - 1; n >= 0; --n) {
      const auto& node = forest_.nodes[n];
      if (node.kind == Formula::Kind::Literal) {
        leaves_[n] = {node.number};
      } else {
        leaves_[n] = leaves_[node.left];
        leaves_[n].insert(leaves_[node.right].begin(), leaves_[node.right].end());
      }
    }
  }

  bool provable() { return prove(std::vector<int>(forest_.roots.begin(), forest_.roots.end())); }

 private:
  bool closed(const std::vector<int>& part) const {
    std::set<std::size_t> lits;
    for (int n : part) lits.insert(leaves_[n].begin(), leaves_[n].end());
    for (auto l : lits)
      if (!lits.count(phi_[l])) return false;
    return true;
  }

  bool prove(std::vector<int> ctx) {
    for (std::size_t k = 0; k < ctx.size(); ++k) {
      const auto& node = forest_.nodes[ctx[k]];
      if (node.kind == Formula::Kind::Par) {
        ctx.push_back(node.left);
        ctx.push_back(node.right);
        ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(k));
        k = static_cast<std::size_t>(-1);
      }
    }
    std::sort(ctx.begin(), ctx.end());
    if (auto it = memo_.find(ctx); it != memo_.end()) return it->second;
    bool result = false;
    const bool all_literals = std::all_of(ctx.begin(), ctx.end(), [&](int n) {
      return forest_.nodes[n].kind == Formula::Kind::Literal;
    });
    if (all_literals) {
      result = closed(ctx);
    } else {
      const std::size_t m = ctx.size();
      for (std::size_t t = 0; t < m && !result; ++t) {
        const auto& node = forest_.nodes[ctx[t]];
        if (node.kind != Formula::Kind::Tensor) continue;
        std::vector<int> rest;
        for (std::size_t k = 0; k < m; ++k)
          if (k != t) rest.push_back(ctx[k]);
        for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()) && !result; ++mask) {
          std::vector<int> left{node.left}, right{node.right};
          for (std::size_t k = 0; k < rest.size(); ++k) ((mask >> k) & 1 ? left : right).push_back(rest[k]);
          if (closed(left) && closed(right)) result = prove(left) && prove(right);
        }
      }
      // mix: both parts nonempty
      for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m) && !result; ++mask) {
        if (!(mask & 1)) continue;
        std::vector<int> left, right;
        for (std::size_t k = 0; k < m; ++k) ((mask >> k) & 1 ? left : right).push_back(ctx[k]);
        if (closed(left) && closed(right)) result = prove(left) && prove(right);
      }
    }
    memo_[ctx] = result;
    return result;
  }

  FormationForest forest_;
  std::vector<std::size_t> phi_;
  std::vector<std::set<std::size_t>> leaves_;
  std::map<std::vector<int>, bool> memo_;
};

inline bool sequent_provable(const ProofStructure& ps) { return SequentProver(ps).provable(); }

// Every perfect matching of the occurrences, filtered afterwards by duality.
inline std::size_t count_dual_matchings(const Sequent& s) {
  const auto occ = literal_occurrences(s);
  const std::size_t n = occ.size();
  std::vector<bool> used(n + 1);
  std::function<std::size_t(std::vector<std::pair<std::size_t, std::size_t>>&)> rec =
      [&](std::vector<std::pair<std::size_t, std::size_t>>& pairs) -> std::size_t {
    std::size_t first = 1;
    while (first <= n && used[first]) ++first;
    if (first > n) {
      for (const auto& [i, j] : pairs) {
        const auto &x = occ.at(OccurrenceId{i}), &y = occ.at(OccurrenceId{j});
        if (x.atom != y.atom || x.negated == y.negated) return 0;
      }
      return 1;
    }
    std::size_t total = 0;
    used[first] = true;
    for (std::size_t j = first + 1; j <= n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      pairs.emplace_back(first, j);
      total += rec(pairs);
      pairs.pop_back();
      used[j] = false;
    }
    used[first] = false;
    return total;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  return n % 2 ? 0 : rec(pairs);
}

// Product over atoms of k! for k positive occurrences.
inline std::size_t factorial_count(const Sequent& s) {
  const auto occ = literal_occurrences(s);
  if (!occ.balanced) return 0;
  std::map<std::string, std::size_t> pos;
  for (const auto& l : occ.occurrences)
    if (!l.negated) ++pos[l.atom.name()];
  std::size_t out = 1;
  for (const auto& [a, k] : pos)
    for (std::size_t i = 2; i <= k; ++i) out *= i;
  return out;
}

// Connective positions by definition: every alternating sequence over the
// tagged moves whose restrictions are positions of the components and whose
// component switches are made by the permitted side.
inline std::set<std::vector<std::string>> brute_combine(Connective kind, const Game& a0, const Game& b) {
  const Game a = kind == Connective::Lollipop ? dual(a0) : a0;
  const Label switcher = kind == Connective::Tensor ? Label::O : Label::P;
  struct M {
    std::string id, base;
    Label label;
    int side;
  };
  std::vector<M> moves;
  for (const auto& m : a.moves()) moves.push_back({"1." + m.id, m.id, m.label, 1});
  for (const auto& m : b.moves()) moves.push_back({"2." + m.id, m.id, m.label, 2});
  std::size_t maxa = 0, maxb = 0;
  for (const auto& p : a.position_set()) maxa = std::max(maxa, p.size());
  for (const auto& p : b.position_set()) maxb = std::max(maxb, p.size());
  std::set<std::vector<std::string>> out;
  std::vector<std::size_t> seq;
  std::function<void()> rec = [&] {
    std::vector<std::string> ids, ra, rb;
    for (auto k : seq) {
      ids.push_back(moves[k].id);
      (moves[k].side == 1 ? ra : rb).push_back(moves[k].base);
    }
    for (std::size_t i = 1; i < seq.size(); ++i) {
      const auto &x = moves[seq[i - 1]], &y = moves[seq[i]];
      if (x.label == y.label) return;
      if (x.side != y.side && y.label != switcher) return;
    }
    if (!a.contains(ra) || !b.contains(rb)) return;
    out.insert(ids);
    if (seq.size() == maxa + maxb) return;
    for (std::size_t k = 0; k < moves.size(); ++k) {
      seq.push_back(k);
      rec();
      seq.pop_back();
    }
  };
  rec();
  return out;
}

// Canonical form of a sequent up to AC of each connective, exchange, atom
// renaming and atom/dual swaps, over atoms 'a' and 'b'.
inline std::string canonical(const Sequent& s) {
  std::string best;
  for (int perm = 0; perm < 2; ++perm)
    for (int flips = 0; flips < 4; ++flips) {
      std::function<std::string(const Formula&)> go = [&](const Formula& f) -> std::string {
        if (f.is_literal()) {
          int atom = f.atom().name()[0] - 'a';
          const bool neg = f.negated() != (((flips >> atom) & 1) != 0);
          if (perm) atom = 1 - atom;
          return std::string(1, static_cast<char>((neg ? 'A' : 'a') + atom));
        }
        const char op = f.is_tensor() ? 'T' : 'P';
        std::vector<std::string> kids;
        for (const auto& child : {f.left(), f.right()}) {
          auto k = go(child);
          if (!child.is_literal() && (child.is_tensor() ? 'T' : 'P') == op) {
            // splice the flattened child's members
            std::size_t depth = 0, start = 2;
            for (std::size_t i = 2; i + 1 < k.size(); ++i) {
              if (k[i] == '(') ++depth;
              if (k[i] == ')') --depth;
              if (k[i] == ',' && depth == 0) {
                kids.push_back(k.substr(start, i - start));
                start = i + 1;
              }
            }
            kids.push_back(k.substr(start, k.size() - 1 - start));
          } else {
            kids.push_back(k);
          }
        }
        std::sort(kids.begin(), kids.end());
        std::string out(1, op);
        out += '(';
        for (std::size_t i = 0; i < kids.size(); ++i) out += (i ? "," : "") + kids[i];
        return out + ")";
      };
      std::vector<std::string> parts;
      for (const auto& f : s.formulas) parts.push_back(go(f));
      std::sort(parts.begin(), parts.end());
      std::string key;
      for (const auto& p : parts) key += p + ";";
      if (best.empty() || key < best) best = key;
    }
  return best;
}

}  // namespace support
