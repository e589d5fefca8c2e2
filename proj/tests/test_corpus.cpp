#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace mllgames;

namespace {

// Every formula over the literals a, a^, b, b^ with exactly k leaves.
std::vector<Formula> all_formulas(std::size_t k) {
  std::vector<Formula> out;
  if (k == 1) {
    for (const char* a : {"a", "b"})
      for (bool neg : {false, true}) out.push_back(Formula::literal(a, neg));
    return out;
  }
  for (std::size_t l = 1; l < k; ++l)
    for (const auto& x : all_formulas(l))
      for (const auto& y : all_formulas(k - l))
        for (auto kind : {Formula::Kind::Tensor, Formula::Kind::Par}) out.push_back(Formula::binary(kind, x, y));
  return out;
}

// Canonical forms of every balanced sequent with exactly n leaves.
std::set<std::string> brute_classes(std::size_t n) {
  std::set<std::string> out;
  std::function<void(std::size_t, Sequent&)> rec = [&](std::size_t left, Sequent& s) {
    if (left == 0) {
      if (literal_occurrences(s).balanced) out.insert(support::canonical(s));
      return;
    }
    for (std::size_t k = 1; k <= left; ++k)
      for (const auto& f : all_formulas(k)) {
        s.formulas.push_back(f);
        rec(left - k, s);
        s.formulas.pop_back();
      }
  };
  Sequent s;
  rec(n, s);
  return out;
}

std::set<std::string> corpus_classes(CorpusGenerator& gen, std::size_t n, std::size_t* count) {
  std::set<std::string> out;
  const auto seqs = gen.sequents(n);
  *count = seqs.size();
  for (const auto& s : seqs) {
    EXPECT_TRUE(literal_occurrences(s).balanced);
    EXPECT_EQ(s.literal_count(), n);
    out.insert(support::canonical(s));
  }
  return out;
}

}  // namespace

TEST(Corpus, SmallSizesMatchBruteForceClasses) {
  CorpusGenerator gen(2);
  for (std::size_t n : {2u, 4u}) {
    std::size_t count = 0;
    const auto classes = corpus_classes(gen, n, &count);
    EXPECT_EQ(classes.size(), count) << "two corpus members are equivalent";
    EXPECT_EQ(classes, brute_classes(n));
  }
}

TEST(Corpus, FrozenCounts) {
  CorpusGenerator gen(2);
  EXPECT_EQ(gen.sequents(2).size(), 3u);
  EXPECT_EQ(gen.sequents(4).size(), 66u);
  EXPECT_EQ(gen.sequents(6).size(), 1976u);
  EXPECT_TRUE(gen.sequents(3).empty());
}

TEST(Corpus, SixLiteralsCoverRandomSequents) {
  CorpusGenerator gen(2);
  std::size_t count = 0;
  const auto classes = corpus_classes(gen, 6, &count);
  EXPECT_EQ(classes.size(), count);
  std::mt19937 rng(71);
  for (int k = 0; k < 3000; ++k) {
    const Sequent s = support::random_balanced_sequent(rng, 6, 2);
    EXPECT_TRUE(classes.count(support::canonical(s))) << to_string(s);
  }
}

TEST(Corpus, LinkingCountsAtSmallSizes) {
  CorpusGenerator gen(2);
  std::size_t linkings = 0, nets = 0;
  for (std::size_t n : {2u, 4u, 6u})
    for (const auto& s : gen.sequents(n))
      for (const auto& l : enumerate_linkings(s)) {
        ++linkings;
        nets += is_proof_net(ProofStructure(s, l)).net;
      }
  EXPECT_EQ(linkings, 3u + 99u + 5968u);
  EXPECT_EQ(nets, 2u + 43u + 1466u);
}

TEST(Corpus, AtomBounds) {
  EXPECT_THROW(CorpusGenerator(0), std::invalid_argument);
  EXPECT_THROW(CorpusGenerator(9), std::invalid_argument);
}
