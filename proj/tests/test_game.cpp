#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace mllgames;

namespace {

using Positions = std::set<std::vector<std::string>>;

std::vector<Game> game_corpus() {
  auto out = support::catalog_games();
  out.push_back(builtin::BplusBdual());
  std::mt19937 rng(31);
  for (int k = 0; k < 12; ++k) out.push_back(support::random_game(rng, 1 + k % 3, 3));
  return out;
}

bool has_violation(const GameDescription& d, GameViolation::Kind k) {
  for (const auto& v : validate_game(d))
    if (v.kind == k) return true;
  return false;
}

}  // namespace

TEST(Validate, Examples) {
  EXPECT_TRUE(validate_game({{{"a", Label::O}}, {{}, {"a"}}}).empty());
  EXPECT_TRUE(has_violation({{{"a", Label::O}}, {{"a"}}}, GameViolation::Kind::MissingEmpty));
  EXPECT_TRUE(
      has_violation({{{"a", Label::O}, {"b", Label::O}}, {{}, {"a"}, {"a", "b"}}}, GameViolation::Kind::NotAlternating));
  EXPECT_TRUE(has_violation({{{"a", Label::O}}, {{}, {"a", "a"}}}, GameViolation::Kind::NotPrefixClosed));
  EXPECT_TRUE(has_violation({{{"a", Label::O}}, {{}, {"z"}}}, GameViolation::Kind::UnknownMove));
  EXPECT_THROW(Game::from_description({{{"a", Label::O}}, {{"a"}}}), InvalidGame);
}

TEST(Dual, FlipsLabelsAndIsInvolution) {
  const Game b = builtin::B();
  const Game d = dual(b);
  EXPECT_EQ(d.label(0), Label::P);
  EXPECT_EQ(d.position_set(), b.position_set());
  EXPECT_EQ(dual(unit()), unit());
  for (const auto& g : game_corpus()) EXPECT_EQ(dual(dual(g)), g);
}

TEST(Combine, TensorOfB) {
  const Game t = tensor(builtin::B(), builtin::B());
  EXPECT_EQ(t.position_set(), (Positions{{}, {"1.b"}, {"2.b"}}));
}

TEST(Combine, ParOfB) {
  const Game p = par(builtin::B(), builtin::B());
  EXPECT_EQ(p.position_set(), (Positions{{}, {"1.b"}, {"2.b"}}));
  EXPECT_EQ(p.label(*p.index_of("1.b")), Label::O);
  EXPECT_EQ(p, dual(tensor(dual(builtin::B()), dual(builtin::B()))));
}

TEST(Combine, LollipopOfB) {
  const Game l = lollipop(builtin::B(), builtin::B());
  EXPECT_EQ(l.label(*l.index_of("1.b")), Label::P);
  EXPECT_EQ(l.label(*l.index_of("2.b")), Label::O);
  EXPECT_EQ(l.position_set(), (Positions{{}, {"1.b"}, {"2.b"}, {"2.b", "1.b"}}));
}

TEST(Combine, UnitIsNeutralForTensor) {
  for (const auto& g : game_corpus()) {
    const Game t = tensor(unit(), g);
    Positions stripped;
    for (const auto& p : t.position_set()) {
      std::vector<std::string> q;
      for (const auto& id : p) q.push_back(id.substr(2));
      stripped.insert(q);
    }
    EXPECT_EQ(stripped, g.position_set());
  }
}

TEST(Combine, AgreesWithBruteForceFilter) {
  const auto games = game_corpus();
  for (const auto& a : games)
    for (const auto& b : games)
      for (auto kind : {Connective::Tensor, Connective::Par, Connective::Lollipop}) {
        const Game g = combine(kind, a, b);
        EXPECT_EQ(g.position_set(), support::brute_combine(kind, a, b)) << to_string(kind);
        EXPECT_TRUE(validate_game(g.description()).empty());
      }
}

TEST(Combine, DeMorganExtensionally) {
  const auto games = game_corpus();
  for (const auto& a : games)
    for (const auto& b : games) {
      EXPECT_EQ(par(a, b), dual(tensor(dual(a), dual(b))));
      EXPECT_EQ(lollipop(a, b), par(dual(a), b));
    }
}

TEST(Combine, RestrictionsAndSwitchDiscipline) {
  const auto games = game_corpus();
  for (const auto& a : games)
    for (const auto& b : games)
      for (auto kind : {Connective::Tensor, Connective::Par}) {
        const Game g = combine(kind, a, b);
        const Label switcher = kind == Connective::Tensor ? Label::O : Label::P;
        for (const auto& p : g.position_set()) {
          std::vector<std::string> ra, rb;
          for (const auto& id : p) (id[0] == '1' ? ra : rb).push_back(id.substr(2));
          EXPECT_TRUE(a.contains(ra));
          EXPECT_TRUE(b.contains(rb));
          for (std::size_t i = 1; i < p.size(); ++i)
            if (p[i][0] != p[i - 1][0]) EXPECT_EQ(g.label(*g.index_of(p[i])), switcher);
        }
      }
}

TEST(Instantiate, IdentitySequentOverB) {
  const Game g = instantiate(parse_sequent("a^, a"), {{Atom("a"), builtin::B()}});
  EXPECT_EQ(g.label(*g.index_of("1.b")), Label::P);
  EXPECT_EQ(g.label(*g.index_of("2.b")), Label::O);
  // only Player may switch in a par, so 1.b·2.b is not a position
  EXPECT_EQ(g.position_set(), (Positions{{}, {"1.b"}, {"2.b"}, {"2.b", "1.b"}}));
}

TEST(Instantiate, UnitAndTensor) {
  EXPECT_EQ(instantiate(parse_sequent("a"), {{Atom("a"), unit()}}).move_count(), 0u);
  const Game t = instantiate(parse_sequent("a * a"), {{Atom("a"), builtin::B()}});
  EXPECT_EQ(t.position_set(), (Positions{{}, {"1.b"}, {"2.b"}}));
}

TEST(Instantiate, MissingAtom) {
  EXPECT_THROW(instantiate(parse_sequent("a^, b"), {{Atom("a"), builtin::B()}}), MissingAtom);
}

TEST(Instantiate, MoveCountIsSumOverOccurrences) {
  std::mt19937 rng(32);
  const auto games = support::catalog_games();
  for (int k = 0; k < 100; ++k) {
    const Sequent s = support::random_sequent(rng, 1 + k % 5, 2);
    const Assignment asg{{Atom("a"), games[k % games.size()]}, {Atom("b"), games[(k / 5) % games.size()]}};
    std::size_t want = 0;
    for (const auto& l : literal_occurrences(s).occurrences) want += asg.at(l.atom).move_count();
    const Game g = instantiate(s, asg);
    EXPECT_EQ(g.move_count(), want);
    EXPECT_EQ(Arena::instantiate(s, asg).materialize(), g) << to_string(s);
  }
}

TEST(GamePolarity, Examples) {
  EXPECT_EQ(game_polarity(builtin::B()).value, Polarity::Negative);
  EXPECT_EQ(game_polarity(builtin::Bdual()).value, Polarity::Positive);
  EXPECT_EQ(game_polarity(instantiate(parse_sequent("a^, a"), {{Atom("a"), builtin::B()}})).value, Polarity::Neutral);
  EXPECT_TRUE(game_polarity(unit()).empty);
}

TEST(Polarize, Examples) {
  EXPECT_EQ(polarize(Sign::Plus, builtin::B()).position_set(), (Positions{{}}));
  EXPECT_EQ(polarize(Sign::Minus, builtin::B()), builtin::B());
  for (const auto& g : game_corpus()) {
    EXPECT_EQ(dual(polarize(Sign::Minus, g)), polarize(Sign::Plus, dual(g)));
    const auto plus = game_polarity(polarize(Sign::Plus, g));
    EXPECT_TRUE(plus.empty || plus.value == Polarity::Positive);
  }
}

TEST(Serialization, JsonRoundTrip) {
  for (const auto& g : game_corpus()) EXPECT_EQ(game_from_json(to_json(g)), g);
}

TEST(DisjointUnion, EitherSideOpens) {
  const Game u = builtin::BplusBdual();
  EXPECT_EQ(u.position_set(), (Positions{{}, {"1.b"}, {"2.b"}}));
  EXPECT_EQ(game_polarity(u).value, Polarity::Neutral);
}
