#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace mllgames;

namespace {

ProofStructure ps(const char* seq, const char* links) { return ProofStructure(parse_sequent(seq), parse_linking(links)); }

Assignment all(const Sequent& s, const Game& g) {
  Assignment asg;
  for (const auto& a : atoms_of(s)) asg.emplace(a, g);
  return asg;
}

bool mentions_c(const Assignment& asg) {
  for (const auto& [a, g] : asg)
    if (g.move_count() == 2) return true;
  return false;
}

}  // namespace

TEST(Denote, IdentityAxiom) {
  const auto p = ps("a^, a", "1-2");
  const Assignment asg = all(p.sequent, builtin::B());
  const auto f = denote(p, asg);
  EXPECT_EQ(f, (HistoryFreeFunction{{"2.b", "1.b"}}));
  EXPECT_TRUE(is_winning_fast(induce(instantiate(p.sequent, asg), f)));
}

TEST(Denote, ExampleNetCopiesAlongLinks) {
  const auto p = ps("a^ | a^, a * a", "1-4,2-3");
  const auto on_b = denote(p, all(p.sequent, builtin::B()));
  EXPECT_EQ(on_b, (HistoryFreeFunction{{"3.b", "2.b"}, {"4.b", "1.b"}}));
  const auto on_c = denote(p, all(p.sequent, builtin::C()));
  EXPECT_EQ(on_c, (HistoryFreeFunction{{"1.b'", "4.b'"}, {"2.b'", "3.b'"}, {"3.a'", "2.a'"}, {"4.a'", "1.a'"}}));
  for (const auto& g : support::catalog_games()) {
    const Assignment asg = all(p.sequent, g);
    EXPECT_TRUE(is_winning_fast(induce(instantiate(p.sequent, asg), denote(p, asg))));
  }
}

TEST(Denote, NonNetLosesUnderCounterexampleInstantiation) {
  const auto p = ps("a^ * b, b^ * a", "1-4,2-3");
  const Verdict v = full_check(p.sequent, p.linking);
  ASSERT_TRUE(v.counterexample);
  const Game g = instantiate(v.counterexample->simple, v.counterexample->instantiation);
  EXPECT_FALSE(is_winning_fast(induce(g, denote(ProofStructure(v.counterexample->simple,
                                                               binary_linking(v.counterexample->simple)),
                                               v.counterexample->instantiation))));
}

TEST(Denote, ResponsesKeepBaseMoveAndLandOnPartner) {
  std::mt19937 rng(51);
  const auto games = support::catalog_games();
  for (int k = 0; k < 200; ++k) {
    const Sequent s = support::random_balanced_sequent(rng, 2 + 2 * (k % 4), 2);
    const Assignment asg{{Atom("a"), games[rng() % games.size()]}, {Atom("b"), games[rng() % games.size()]}};
    for (const auto& l : enumerate_linkings(s)) {
      const auto phi = l.as_map(s.literal_count());
      const auto f = denote(ProofStructure(s, l), asg);
      for (const auto& [o, p] : f.entries()) {
        const auto so = detail::split_id(o), sp = detail::split_id(p);
        ASSERT_TRUE(so && sp);
        EXPECT_EQ(so->base, sp->base);
        EXPECT_EQ(sp->occurrence, phi[so->occurrence]);
      }
    }
  }
}

TEST(Extract, RoundTripOnRandomSequents) {
  std::mt19937 rng(52);
  for (int k = 0; k < 200; ++k) {
    const Sequent s = support::random_balanced_sequent(rng, 2 + 2 * (k % 4), 2);
    for (const auto& l : enumerate_linkings(s)) EXPECT_EQ(extract_linking(s, denote_schema(ProofStructure(s, l))), l);
  }
}

TEST(Extract, SamePolarityResponseRejected) {
  const Sequent s = parse_sequent("a^, a^, a, a");
  const StrategySchema schema = [](const Assignment&) { return HistoryFreeFunction{{"1.b", "2.b"}}; };
  try {
    extract_linking(s, schema);
    FAIL() << "expected NotLinkingForm";
  } catch (const NotLinkingForm& e) {
    EXPECT_NE(std::string(e.what()).find("non-dual"), std::string::npos) << e.what();
  }
}

TEST(Extract, InvolutionFailureRejected) {
  const Sequent s = parse_sequent("a^, a, a^, a");
  const auto honest = denote_schema(ProofStructure(s, parse_linking("1-2,3-4")));
  const StrategySchema schema = [&](const Assignment& asg) {
    if (!mentions_c(asg)) return honest(asg);
    auto f = honest(asg);
    f.set("2.b'", "3.b'");
    return f;
  };
  try {
    extract_linking(s, schema);
    FAIL() << "expected NotLinkingForm";
  } catch (const NotLinkingForm& e) {
    EXPECT_NE(std::string(e.what()).find("involution"), std::string::npos) << e.what();
  }
}

TEST(Extract, MissingAndRenamedResponsesRejected) {
  const Sequent s = parse_sequent("a^, a");
  EXPECT_THROW(extract_linking(s, [](const Assignment&) { return HistoryFreeFunction{}; }), NotLinkingForm);
  EXPECT_THROW(extract_linking(s, [](const Assignment&) { return HistoryFreeFunction{{"1.b", "2.c"}, {"2.b", "1.c"}}; }),
               NotLinkingForm);
  EXPECT_THROW(extract_linking(s, [](const Assignment&) { return HistoryFreeFunction{{"1.b", "7.b"}}; }),
               NotLinkingForm);
}

TEST(Embedding, Examples) {
  EXPECT_TRUE(check_embedding(identity_embedding(builtin::C())).empty());
  const Embedding b_into_c{builtin::B(), builtin::C(), {{"b", "a'"}}};
  EXPECT_TRUE(check_embedding(b_into_c).empty());
  const Embedding flip{builtin::B(), builtin::Bdual(), {{"b", "b"}}};
  const auto v = check_embedding(flip);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, EmbeddingViolation::Kind::LabelMismatch);
  const Game loose = Game::from_description({{{"a'", Label::O}, {"b'", Label::P}}, {{}, {"a'"}, {"b'"}}});
  const auto e2 = check_embedding({builtin::C(), loose, {{"a'", "a'"}, {"b'", "b'"}}});
  ASSERT_EQ(e2.size(), 1u);
  EXPECT_EQ(e2[0].kind, EmbeddingViolation::Kind::PositionNotPreserved);
  const auto partial = check_embedding({builtin::C(), builtin::C(), {{"a'", "a'"}}});
  ASSERT_FALSE(partial.empty());
  EXPECT_EQ(partial[0].kind, EmbeddingViolation::Kind::NotTotal);
}

TEST(Embedding, CatalogHasElevenEmbeddings) {
  // five identities, the empty map from unit into the four others, B into C and B⊥ into C flipped
  const auto all_e = catalog_embeddings();
  EXPECT_EQ(all_e.size(), 11u);
  std::set<std::pair<std::string, std::string>> kinds;
  for (const auto& e : all_e) kinds.emplace(e.source, e.target);
  EXPECT_TRUE(kinds.count({"B", "C"}));
  EXPECT_TRUE(kinds.count({"Bdual", "Cflip"}));
  EXPECT_FALSE(kinds.count({"B", "Cflip"}));
}

TEST(Naturality, DenotationsAreNatural) {
  std::mt19937 rng(53);
  const auto embeddings = catalog_embeddings();
  for (int k = 0; k < 60; ++k) {
    const Sequent s = support::random_balanced_sequent(rng, 2 + 2 * (k % 3), 2);
    for (const auto& l : enumerate_linkings(s)) {
      const auto schema = denote_schema(ProofStructure(s, l));
      for (const auto& e : embeddings) EXPECT_TRUE(naturality_probe(s, schema, e.embedding)) << e.source << "->" << e.target;
      std::map<Atom, Embedding> mixed;
      for (const auto& a : atoms_of(s)) mixed.emplace(a, embeddings[(k + mixed.size()) % embeddings.size()].embedding);
      EXPECT_TRUE(naturality_probe(s, schema, mixed));
    }
  }
}

TEST(Naturality, InstantiationDependentSchemaFails) {
  const Sequent s = parse_sequent("a^, a, a^, a");
  const auto one = denote_schema(ProofStructure(s, parse_linking("1-2,3-4")));
  const auto other = denote_schema(ProofStructure(s, parse_linking("1-4,2-3")));
  const StrategySchema schema = [&](const Assignment& asg) { return mentions_c(asg) ? other(asg) : one(asg); };
  const Embedding b_into_c{builtin::B(), builtin::C(), {{"b", "a'"}}};
  EXPECT_FALSE(naturality_probe(s, schema, b_into_c));
  EXPECT_TRUE(naturality_probe(s, schema, identity_embedding(builtin::B())));
}
