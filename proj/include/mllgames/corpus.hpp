#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "formula.hpp"

namespace mllgames {

// Exhaustive sequent shapes over a few atoms, one representative per class of
// the equivalence generated by associativity and commutativity of each
// connective, exchange of formulas, renaming atoms, and swapping an atom with
// its dual. All of these preserve proof-net-hood and the game up to isomorphism.
//
// Internally a shape is a canonical string: a literal is one character
// ('a'..: positive, 'A'..: negative) and a connective node is "T(...)" or
// "P(...)" over its sorted flattened children.
class CorpusGenerator {
 public:
  explicit CorpusGenerator(std::size_t atoms) : atoms_(atoms) {
    if (atoms_ == 0 || atoms_ > 8) throw std::invalid_argument("corpus atoms must be between 1 and 8");
    for (std::size_t i = 0; i < atoms_; ++i) {
      literals_.push_back(std::string(1, static_cast<char>('a' + i)));
      literals_.push_back(std::string(1, static_cast<char>('A' + i)));
    }
    std::sort(literals_.begin(), literals_.end());
    std::vector<std::size_t> perm(atoms_);
    for (std::size_t i = 0; i < atoms_; ++i) perm[i] = i;
    do {
      for (std::size_t flips = 0; flips < (std::size_t{1} << atoms_); ++flips) maps_.push_back({perm, flips});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  // Balanced sequents with exactly n literals, canonical representatives.
  std::vector<Sequent> sequents(std::size_t n) {
    std::vector<Sequent> out;
    std::set<std::vector<std::string>> seen;
    for (const auto& part : partitions(n, n)) {
      std::vector<std::string> acc;
      choose_formulas(part, 0, acc, [&](const std::vector<std::string>& seq) {
        if (!balanced(seq)) return;
        std::vector<std::string> best;
        for (const auto& m : maps_) {
          std::vector<std::string> img;
          for (const auto& f : seq) img.push_back(apply(f, m));
          std::sort(img.begin(), img.end());
          if (best.empty() || img < best) best = std::move(img);
        }
        if (seen.insert(best).second) out.push_back(to_sequent(best));
      });
    }
    return out;
  }

  std::vector<Sequent> sequents_up_to(std::size_t max_literals) {
    std::vector<Sequent> out;
    for (std::size_t n = 1; n <= max_literals; ++n) {
      auto s = sequents(n);
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }

 private:
  struct Symmetry {
    std::vector<std::size_t> perm;
    std::size_t flips;
  };

  static std::vector<std::vector<std::size_t>> partitions(std::size_t n, std::size_t max_part) {
    if (n == 0) return {{}};
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t p = std::min(n, max_part); p >= 1; --p)
      for (auto rest : partitions(n - p, p)) {
        rest.insert(rest.begin(), p);
        out.push_back(std::move(rest));
      }
    return out;
  }

  // Formulas with k leaves whose root connective differs from `outer` ('T', 'P' or 0).
  const std::vector<std::string>& trees(std::size_t k, char outer) {
    const auto key = std::make_pair(k, outer);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::set<std::string> out;
    if (k == 1) {
      out.insert(literals_.begin(), literals_.end());
    } else {
      for (char op : {'T', 'P'}) {
        if (op == outer) continue;
        for (const auto& part : partitions(k, k)) {
          if (part.size() < 2) continue;
          std::vector<std::string> acc;
          choose_children(part, 0, op, acc, [&](const std::vector<std::string>& ch) {
            std::vector<std::string> sorted = ch;
            std::sort(sorted.begin(), sorted.end());
            std::string s(1, op);
            s += '(';
            for (std::size_t i = 0; i < sorted.size(); ++i) {
              if (i) s += ',';
              s += sorted[i];
            }
            s += ')';
            out.insert(std::move(s));
          });
        }
      }
    }
    return memo_.emplace(key, std::vector<std::string>(out.begin(), out.end())).first->second;
  }

  // Children for a part list; equal sizes are chosen in nondecreasing order.
  void choose_children(const std::vector<std::size_t>& part, std::size_t i, char op, std::vector<std::string>& acc,
                       const std::function<void(const std::vector<std::string>&)>& emit) {
    if (i == part.size()) {
      emit(acc);
      return;
    }
    const auto options = trees(part[i], op);
    for (const auto& t : options) {
      if (i > 0 && part[i] == part[i - 1] && t < acc.back()) continue;
      acc.push_back(t);
      choose_children(part, i + 1, op, acc, emit);
      acc.pop_back();
    }
  }

  void choose_formulas(const std::vector<std::size_t>& part, std::size_t i, std::vector<std::string>& acc,
                       const std::function<void(const std::vector<std::string>&)>& emit) {
    if (i == part.size()) {
      emit(acc);
      return;
    }
    const auto options = trees(part[i], 0);
    for (const auto& t : options) {
      if (i > 0 && part[i] == part[i - 1] && t < acc.back()) continue;
      acc.push_back(t);
      choose_formulas(part, i + 1, acc, emit);
      acc.pop_back();
    }
  }

  bool balanced(const std::vector<std::string>& seq) const {
    std::vector<long> excess(atoms_, 0);
    for (const auto& f : seq)
      for (char c : f) {
        if (c >= 'a' && c < static_cast<char>('a' + atoms_)) ++excess[c - 'a'];
        if (c >= 'A' && c < static_cast<char>('A' + atoms_)) --excess[c - 'A'];
      }
    return std::all_of(excess.begin(), excess.end(), [](long x) { return x == 0; });
  }

  struct Node {
    char op;  // 0 for a literal
    std::string lit;
    std::vector<Node> kids;
  };

  static Node parse(const std::string& s, std::size_t& i) {
    if (s[i] != 'T' && s[i] != 'P') return Node{0, std::string(1, s[i++]), {}};
    Node n{s[i], {}, {}};
    i += 2;
    for (;;) {
      n.kids.push_back(parse(s, i));
      if (s[i++] == ')') return n;
    }
  }

  static std::string print(const Node& n) {
    if (!n.op) return n.lit;
    std::vector<std::string> ch;
    for (const auto& k : n.kids) ch.push_back(print(k));
    std::sort(ch.begin(), ch.end());
    std::string s(1, n.op);
    s += '(';
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (i) s += ',';
      s += ch[i];
    }
    return s + ")";
  }

  std::string apply(const std::string& f, const Symmetry& m) const {
    std::size_t i = 0;
    Node n = parse(f, i);
    std::function<void(Node&)> map = [&](Node& x) {
      if (!x.op) {
        const char c = x.lit[0];
        const bool neg = c < 'a';
        const std::size_t atom = static_cast<std::size_t>(neg ? c - 'A' : c - 'a');
        const bool flipped = neg != (((m.flips >> atom) & 1) != 0);
        const char base = static_cast<char>(m.perm[atom]);
        x.lit = std::string(1, static_cast<char>((flipped ? 'A' : 'a') + base));
        return;
      }
      for (auto& k : x.kids) map(k);
    };
    map(n);
    return print(n);
  }

  static Formula to_formula(const Node& n) {
    if (!n.op) {
      const char c = n.lit[0];
      const bool neg = c < 'a';
      return Formula::literal(std::string(1, static_cast<char>(neg ? c - 'A' + 'a' : c)), neg);
    }
    Formula acc = to_formula(n.kids[0]);
    for (std::size_t i = 1; i < n.kids.size(); ++i)
      acc = Formula::binary(n.op == 'T' ? Formula::Kind::Tensor : Formula::Kind::Par, acc, to_formula(n.kids[i]));
    return acc;
  }

  static Sequent to_sequent(const std::vector<std::string>& seq) {
    Sequent s;
    for (const auto& f : seq) {
      std::size_t i = 0;
      s.formulas.push_back(to_formula(parse(f, i)));
    }
    return s;
  }

  std::size_t atoms_;
  std::vector<std::string> literals_;
  std::vector<Symmetry> maps_;
  std::map<std::pair<std::size_t, char>, std::vector<std::string>> memo_;
};

}  // namespace mllgames
