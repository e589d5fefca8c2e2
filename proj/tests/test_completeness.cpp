#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace mllgames;

namespace {

std::vector<std::string> printed(const std::vector<Sequent>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(to_string(s));
  return out;
}

Verdict check(const char* seq, const char* links) { return full_check(parse_sequent(seq), parse_linking(links)); }

// A random binary sequent: a random shape whose leaves are paired off with fresh atoms.
Sequent random_binary(std::mt19937& rng, std::size_t leaves) {
  const Sequent s = support::random_balanced_sequent(rng, leaves, 1);
  const auto ls = enumerate_linkings(s);
  return binary_relabel(ProofStructure(s, ls[rng() % ls.size()]));
}

bool unique_net(const Sequent& s) { return is_proof_net(ProofStructure(s, binary_linking(s))).net; }

}  // namespace

TEST(Shapes, BinaryAndSimple) {
  EXPECT_TRUE(is_binary(parse_sequent("a^ | b^, b * a")));
  EXPECT_FALSE(is_binary(parse_sequent("a^ | a^, a * a")));
  EXPECT_TRUE(is_simple(parse_sequent("a^, b^, b * a")));
  EXPECT_FALSE(is_simple(parse_sequent("a^ | b^, b * a")));
  EXPECT_FALSE(is_simple(parse_sequent("a * (b * c), a^, b^, c^")));
  EXPECT_THROW(simplify_to_simple(parse_sequent("a, a")), NotBinary);
  EXPECT_THROW(check_simple(parse_sequent("a^ | a, b^, b")), NotSimple);
}

TEST(Simplify, Examples) {
  EXPECT_EQ(printed(simplify_to_simple(parse_sequent("a^ | b^, b * a"))), (std::vector<std::string>{"a^, b^, b * a"}));
  EXPECT_EQ(printed(simplify_to_simple(parse_sequent("a * (b | c), a^, b^, c^"))),
            (std::vector<std::string>{"a * b, c, a^, b^, c^", "a * c, b, a^, b^, c^"}));
  EXPECT_EQ(printed(simplify_to_simple(parse_sequent("a^, a"))), (std::vector<std::string>{"a^, a"}));
}

TEST(Simplify, OutputsAreSimpleAndPreserveNetHood) {
  std::mt19937 rng(61);
  for (int k = 0; k < 400; ++k) {
    const Sequent b = random_binary(rng, 2 + 2 * (k % 5));
    const auto outs = simplify_to_simple(b);
    ASSERT_FALSE(outs.empty());
    bool all = true;
    for (const auto& o : outs) {
      EXPECT_TRUE(is_simple(o)) << to_string(o);
      all = all && unique_net(o);
    }
    EXPECT_EQ(all, unique_net(b)) << to_string(b);
    EXPECT_EQ(all, support::sequent_provable(ProofStructure(b, binary_linking(b)))) << to_string(b);
  }
}

TEST(CheckSimple, Examples) {
  EXPECT_TRUE(check_simple(parse_sequent("a^, b^, b * a")).valid);
  EXPECT_TRUE(check_simple(parse_sequent("a^, a")).valid);
  const Verdict v = check_simple(parse_sequent("a^ * b, b^ * a"));
  ASSERT_FALSE(v.valid);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->cycle_literals.size(), 4u);
  EXPECT_EQ(v.counterexample->play.size(), 3u);
}

// The cycle schema l1⊥ ⊗ l2, l2⊥ ⊗ l3, ..., ln⊥ ⊗ l1: Opponent opens in l1,
// Player copies into l1⊥, and so on until Player would have to switch sides
// of the last tensor.
TEST(CheckSimple, CycleSchemaTwo) {
  const Verdict v = check("a^ * b, b^ * a", "1-4,2-3");
  ASSERT_TRUE(v.counterexample);
  const auto& c = *v.counterexample;
  EXPECT_EQ(c.play, (std::vector<std::string>{"4.b", "1.b", "2.b"}));
  EXPECT_EQ(c.instantiation, (Assignment{{Atom("a"), builtin::B()}, {Atom("b"), builtin::B()}}));
  const Replay r = replay_counterexample(c);
  EXPECT_TRUE(defeats(r));
  EXPECT_EQ(r.loser, Label::P);
}

TEST(CheckSimple, CycleSchemaThree) {
  const Verdict v = check("a^ * b, b^ * c, c^ * a", "1-6,2-3,4-5");
  ASSERT_TRUE(v.counterexample);
  const auto& c = *v.counterexample;
  EXPECT_EQ(c.play, (std::vector<std::string>{"6.b", "1.b", "2.b", "3.b", "4.b"}));
  const Replay r = replay_counterexample(c);
  EXPECT_TRUE(defeats(r));
  EXPECT_EQ(r.play, c.play);
}

TEST(FullCheck, Examples) {
  EXPECT_TRUE(check("a^ | a^, a * a", "1-4,2-3").valid);
  const Verdict bad = check("a^ * a^, a * a", "1-3,2-4");
  EXPECT_FALSE(bad.valid);
  ASSERT_TRUE(bad.counterexample);
  EXPECT_TRUE(defeats(replay_counterexample(*bad.counterexample)));
  EXPECT_TRUE(check("a^, a", "1-2").valid);
}

TEST(FullCheck, CertificateListsEverySimpleSequent) {
  const Verdict v = check("a * (b | c), a^, b^, c^", "1-4,2-5,3-6");
  ASSERT_TRUE(v.valid);
  EXPECT_EQ(v.simple_count, 2u);
  EXPECT_EQ(certificate_lines(v).size(), 2u);
}

TEST(FullCheck, AgreesWithNetAndSequentSearch) {
  std::mt19937 rng(62);
  std::size_t invalid = 0;
  for (int k = 0; k < 300; ++k) {
    const Sequent s = support::random_balanced_sequent(rng, 2 + 2 * (k % 4), 2);
    for (const auto& l : enumerate_linkings(s)) {
      const ProofStructure p(s, l);
      const Verdict v = full_check(s, l);
      EXPECT_EQ(v.valid, is_proof_net(p).net);
      EXPECT_EQ(v.valid, support::sequent_provable(p));
      if (!v.valid) {
        ++invalid;
        ASSERT_TRUE(v.counterexample);
        EXPECT_EQ(v.counterexample->play.size() % 2, 1u);
        EXPECT_TRUE(defeats(replay_counterexample(*v.counterexample)));
      }
    }
  }
  EXPECT_GT(invalid, 0u);
}

TEST(Replay, PlayerStuckMeansNoLegalAnswer) {
  const Verdict v = check("a^ * b, b^ * a", "1-4,2-3");
  const auto& c = *v.counterexample;
  const Game g = instantiate(c.simple, c.instantiation);
  Position p;
  for (const auto& id : c.play) p.push_back(move_index(g, id));
  EXPECT_TRUE(player_stuck(g, p));
  p.pop_back();
  EXPECT_FALSE(player_stuck(g, p));
}

TEST(Oracle, Examples) {
  EXPECT_TRUE(semantic_oracle(parse_sequent("a^, a"), parse_linking("1-2")));
  EXPECT_FALSE(semantic_oracle(parse_sequent("a^ * a^, a * a"), parse_linking("1-3,2-4")));
  const SemanticOracle o(parse_sequent("a^ * a^, a * a"));
  const auto r = o.evaluate(parse_linking("1-3,2-4"));
  EXPECT_FALSE(r.value);
  EXPECT_TRUE(r.refuted_by.has_value());
  EXPECT_EQ(o.assignment_count(), oracle_catalog().size());
}

TEST(Oracle, AgreesWithFullCheckOnRandomSequents) {
  std::mt19937 rng(63);
  for (int k = 0; k < 150; ++k) {
    const Sequent s = support::random_balanced_sequent(rng, 2 + 2 * (k % 3), 2);
    const SemanticOracle o(s);
    for (const auto& l : enumerate_linkings(s)) EXPECT_EQ(o(l), full_check(s, l).valid) << to_string(s);
  }
}
