#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arena.hpp"
#include "formula.hpp"
#include "game.hpp"
#include "proofnet.hpp"
#include "strategy.hpp"

namespace mllgames {

// Occurrence copying: "i.m" answered by "phi(i).m" when that is a Player move.
inline BoundFunction denote_bound(const Arena& arena, const Linking& linking) {
  BoundFunction f(arena.move_count());
  const auto phi = linking.as_map(arena.occurrence_count());
  for (MoveIndex m = 0; m < arena.move_count(); ++m) {
    if (arena.label(m) != Label::O) continue;
    const std::size_t i = arena.occurrence_of(m);
    const std::size_t j = phi[i];
    if (j == 0) continue;
    const std::string& base = arena.constituent(i).move_id(m - arena.offset(i));
    const auto target = arena.constituent(j).index_of(base);
    if (!target) continue;
    const MoveIndex p = arena.offset(j) + *target;
    if (arena.label(p) == Label::P) f[m] = p;
  }
  return f;
}

inline HistoryFreeFunction denote(const ProofStructure& ps, const Assignment& asg) {
  const Arena arena = Arena::instantiate(ps.sequent, asg);
  return unbind(arena, denote_bound(arena, ps.linking));
}

// A family of move functions indexed by instantiations of the atoms.
using StrategySchema = std::function<HistoryFreeFunction(const Assignment&)>;

inline StrategySchema denote_schema(const ProofStructure& ps) {
  return [ps](const Assignment& asg) { return denote(ps, asg); };
}

// ---------------------------------------------------------------------------
// Axiom-link extraction by probing

class NotLinkingForm : public std::runtime_error {
 public:
  explicit NotLinkingForm(const std::string& detail) : std::runtime_error("not of linking form: " + detail) {}
};

namespace detail {

struct SplitId {
  std::size_t occurrence;
  std::string base;
};

inline std::optional<SplitId> split_id(const std::string& id) {
  const auto dot = id.find('.');
  if (dot == std::string::npos || dot == 0) return std::nullopt;
  std::size_t occ = 0;
  for (std::size_t k = 0; k < dot; ++k) {
    if (id[k] < '0' || id[k] > '9') return std::nullopt;
    occ = occ * 10 + static_cast<std::size_t>(id[k] - '0');
  }
  return SplitId{occ, id.substr(dot + 1)};
}

// The assignment making occurrence i's constituent `g` and every other atom empty.
inline Assignment probe_assignment(const Sequent& s, const LiteralOccurrence& target, const Game& g) {
  Assignment asg;
  for (const auto& a : atoms_of(s)) asg.emplace(a, unit());
  asg[target.atom] = target.negated ? dual(g) : g;
  return asg;
}

}  // namespace detail

inline Linking extract_linking(const Sequent& s, const StrategySchema& schema) {
  const auto occ = literal_occurrences(s);
  const std::size_t n = occ.size();
  std::vector<std::size_t> phi(n + 1, 0);
  auto who = [](std::size_t i) { return "occurrence " + std::to_string(i); };

  for (std::size_t i = 1; i <= n; ++i) {
    const auto& li = occ.at(OccurrenceId{i});
    const auto f = schema(detail::probe_assignment(s, li, builtin::B()));
    const std::string probe = std::to_string(i) + ".b";
    const auto r = f(probe);
    if (!r) throw NotLinkingForm(who(i) + ": no response to " + probe);
    const auto sp = detail::split_id(*r);
    if (!sp || sp->occurrence == 0 || sp->occurrence > n)
      throw NotLinkingForm(who(i) + ": response " + *r + " is not a constituent move");
    const auto& lj = occ.at(OccurrenceId{sp->occurrence});
    if (lj.atom != li.atom || lj.negated == li.negated)
      throw NotLinkingForm(who(i) + ": response " + *r + " lands in a non-dual constituent");
    if (sp->base != "b") throw NotLinkingForm(who(i) + ": response " + *r + " changes the move");
    phi[i] = sp->occurrence;
  }

  for (std::size_t i = 1; i <= n; ++i) {
    const auto& li = occ.at(OccurrenceId{i});
    const auto f = schema(detail::probe_assignment(s, li, builtin::C()));
    const std::string here = std::to_string(i), there = std::to_string(phi[i]);
    const auto a = f(here + ".a'");
    if (a != there + ".a'")
      throw NotLinkingForm(who(i) + ": two-move probe answers " + here + ".a' with " + a.value_or("nothing") +
                           ", expected " + there + ".a'");
    const auto b = f(there + ".b'");
    if (b != here + ".b'")
      throw NotLinkingForm(who(i) + ": involution fails, " + there + ".b' answered by " + b.value_or("nothing") +
                           ", expected " + here + ".b'");
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i <= n; ++i) {
    if (phi[phi[i]] != i) throw NotLinkingForm(who(i) + ": partner's partner is not itself");
    if (i < phi[i]) pairs.emplace_back(i, phi[i]);
  }
  Linking l(std::move(pairs));
  if (auto p = linking_problem(occ, l); !p.empty()) throw NotLinkingForm(p);
  return l;
}

// ---------------------------------------------------------------------------
// Embeddings and the naturality square

struct Embedding {
  Game source, target;
  std::map<std::string, std::string> map;  // source move id -> target move id
};

struct EmbeddingViolation {
  enum class Kind { NotTotal, UnknownMove, NotInjective, LabelMismatch, PositionNotPreserved };
  Kind kind;
  std::string detail;
};

inline const char* to_string(EmbeddingViolation::Kind k) {
  switch (k) {
    case EmbeddingViolation::Kind::NotTotal: return "map not total on source moves";
    case EmbeddingViolation::Kind::UnknownMove: return "unknown move";
    case EmbeddingViolation::Kind::NotInjective: return "map not one-to-one";
    case EmbeddingViolation::Kind::LabelMismatch: return "(e1) label not preserved";
    case EmbeddingViolation::Kind::PositionNotPreserved: return "(e2) position image not a position";
  }
  return "?";
}

inline std::vector<EmbeddingViolation> check_embedding(const Embedding& e) {
  using K = EmbeddingViolation::Kind;
  std::vector<EmbeddingViolation> out;
  std::map<std::string, std::string> inverse;
  for (const auto& [s, t] : e.map) {
    const auto si = e.source.index_of(s);
    const auto ti = e.target.index_of(t);
    if (!si) out.push_back({K::UnknownMove, "source has no move " + s});
    if (!ti) out.push_back({K::UnknownMove, "target has no move " + t});
    if (!inverse.emplace(t, s).second) out.push_back({K::NotInjective, s + " and " + inverse[t] + " both map to " + t});
    if (si && ti && e.source.label(*si) != e.target.label(*ti))
      out.push_back({K::LabelMismatch, s + " is " + to_string(e.source.label(*si)) + " but " + t + " is " +
                                           to_string(e.target.label(*ti))});
  }
  for (const auto& m : e.source.moves())
    if (!e.map.count(m.id)) out.push_back({K::NotTotal, m.id + " has no image"});
  if (!out.empty()) return out;
  for (const auto& p : e.source.position_set()) {
    std::vector<std::string> image;
    for (const auto& id : p) image.push_back(e.map.at(id));
    if (!e.target.contains(image)) out.push_back({K::PositionNotPreserved, join_ids(p) + " maps to " + join_ids(image)});
  }
  return out;
}

inline Embedding identity_embedding(const Game& g) {
  Embedding e{g, g, {}};
  for (const auto& m : g.moves()) e.map.emplace(m.id, m.id);
  return e;
}

struct CatalogEmbedding {
  std::string source, target;
  Embedding embedding;
};

// Every embedding between two catalog games, identities included.
inline std::vector<CatalogEmbedding> catalog_embeddings() {
  std::vector<CatalogEmbedding> out;
  for (const auto& sn : builtin::names())
    for (const auto& tn : builtin::names()) {
      const Game s = *builtin::by_name(sn), t = *builtin::by_name(tn);
      const std::size_t k = s.move_count();
      if (k > t.move_count()) continue;
      std::vector<std::size_t> image(t.move_count());
      for (std::size_t i = 0; i < image.size(); ++i) image[i] = i;
      std::set<std::vector<std::size_t>> tried;
      do {
        std::vector<std::size_t> prefix(image.begin(), image.begin() + static_cast<std::ptrdiff_t>(k));
        if (!tried.insert(prefix).second) continue;
        Embedding e{s, t, {}};
        for (std::size_t i = 0; i < k; ++i) e.map.emplace(s.move_id(static_cast<MoveIndex>(i)), t.move_id(static_cast<MoveIndex>(prefix[i])));
        if (check_embedding(e).empty()) out.push_back({sn, tn, std::move(e)});
      } while (std::next_permutation(image.begin(), image.end()));
    }
  return out;
}

// Checks f_{A'}(F(e)(x)) and F(e)(f_A(x)) agree (both undefined or equal) for
// every Opponent move x of the source instantiation, where F(e) renames "i.m"
// to "i.e(m)" through the embedding of occurrence i's atom.
inline bool naturality_probe(const Sequent& s, const StrategySchema& schema, const std::map<Atom, Embedding>& e) {
  Assignment from, to;
  for (const auto& a : atoms_of(s)) {
    const auto it = e.find(a);
    if (it == e.end()) throw MissingAtom(a);
    from.emplace(a, it->second.source);
    to.emplace(a, it->second.target);
  }
  const Arena arena = Arena::instantiate(s, from);
  const auto occ = literal_occurrences(s);
  auto lift = [&](const std::string& id) -> std::optional<std::string> {
    const auto sp = detail::split_id(id);
    if (!sp || sp->occurrence == 0 || sp->occurrence > occ.size()) return std::nullopt;
    const auto& map = e.at(occ.at(OccurrenceId{sp->occurrence}).atom).map;
    const auto it = map.find(sp->base);
    if (it == map.end()) return std::nullopt;
    return std::to_string(sp->occurrence) + "." + it->second;
  };
  const auto fa = schema(from);
  const auto fb = schema(to);
  for (MoveIndex m = 0; m < arena.move_count(); ++m) {
    if (arena.label(m) != Label::O) continue;
    const auto x = arena.move_id(m);
    const auto ex = lift(x);
    const auto left = ex ? fb(*ex) : std::nullopt;
    const auto fx = fa(x);
    const auto right = fx ? lift(*fx) : std::nullopt;
    if (left != right) return false;
  }
  return true;
}

inline bool naturality_probe(const Sequent& s, const StrategySchema& schema, const Embedding& e) {
  std::map<Atom, Embedding> per;
  for (const auto& a : atoms_of(s)) per.emplace(a, e);
  return naturality_probe(s, schema, per);
}

}  // namespace mllgames
