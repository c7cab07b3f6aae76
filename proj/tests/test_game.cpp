#include <random>

#include <gtest/gtest.h>

#include "regame/game.hpp"
#include "regame/solver.hpp"

using namespace regame;

namespace {

const Alphabet ab("ab");

Position re(int k, WordSet a, WordSet b) { return make_position(Dialect::re, k, std::nullopt, ab, a, b); }
Position gre(int k, int s, WordSet a, WordSet b) { return make_position(Dialect::gre, k, s, ab, a, b); }
Position resf(int k, int s, WordSet a, WordSet b) { return make_position(Dialect::resf, k, s, ab, a, b); }

WordSet random_set(std::mt19937_64& rng, const WordSet& pool, std::size_t max_card) {
  WordSet out;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_card)(rng);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
  return canonical(out);
}

}  // namespace

TEST(Position, Invariants) {
  EXPECT_THROW(make_position(Dialect::re, 2, 1, ab, {}, {}), invalid_position);
  EXPECT_THROW(make_position(Dialect::gre, 1, 2, ab, {}, {}), invalid_position);
  EXPECT_THROW(make_position(Dialect::gre, -1, 0, ab, {}, {}), invalid_position);
  EXPECT_THROW(make_position(Dialect::gre, 2, 0, ab, {"c"}, {}), alphabet_error);
  const Position p = gre(3, 1, {"b", "a", "b"}, {});
  EXPECT_EQ(p.a, (WordSet{"a", "b"}));
  EXPECT_EQ(gre(2, 2, {}, {}).s, 1);
  EXPECT_EQ(make_position(Dialect::gre, 3, std::nullopt, ab, {}, {}).s, 0);
}

TEST(Validate, StarWithEpsilonInB) {
  const auto v = validate_move(gre(3, 1, {"a"}, {""}), StarMove{{{"a"}}, {}});
  ASSERT_TRUE(v);
  EXPECT_NE(v->find("D wins on ε"), std::string::npos);
}

TEST(Validate, UnionBudgetArithmetic) {
  const Position p = re(5, {"a", "b"}, {"ab"});
  EXPECT_FALSE(validate_move(p, UnionMove{{"a"}, {"b"}, 2, 2}));
  EXPECT_TRUE(validate_move(p, UnionMove{{"a"}, {"b"}, 2, 3}));
  EXPECT_TRUE(validate_move(p, UnionMove{{"a"}, {}, 2, 2}));
  EXPECT_TRUE(validate_move(p, UnionMove{{"a"}, {"b"}, 2, 2, 1, 0}));
}

TEST(Validate, UnionStarBudgets) {
  const Position p = gre(5, 2, {"a"}, {});
  EXPECT_FALSE(validate_move(p, UnionMove{{"a"}, {}, 2, 2, 1, 1}));
  EXPECT_TRUE(validate_move(p, UnionMove{{"a"}, {}, 2, 2, 2, 1}));
  EXPECT_TRUE(validate_move(p, UnionMove{{"a"}, {}, 0, 4, 1, 1}));
}

TEST(Validate, NegationIsNotAnReMove) {
  const auto v = validate_move(re(3, {"a"}, {}), NegMove{});
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, "no ¬-move in RE");
  EXPECT_FALSE(validate_move(resf(3, 0, {"a"}, {}), NegMove{}));
}

TEST(Validate, CatShape) {
  const Position p = re(3, {"ab"}, {"a"});
  EXPECT_FALSE(validate_move(p, CatMove{{1}, {{2, 1}}, 1, 1}));
  EXPECT_TRUE(validate_move(p, CatMove{{3}, {{2, 1}}, 1, 1}));
  EXPECT_TRUE(validate_move(p, CatMove{{1}, {{2}}, 1, 1}));
  EXPECT_TRUE(validate_move(p, CatMove{{1}, {{2, 3}}, 1, 1}));
  EXPECT_TRUE(validate_move(p, CatMove{{1}, {}, 1, 1}));
}

TEST(Validate, StarShape) {
  const Position p = gre(3, 1, {"", "aab"}, {"ab"});
  EXPECT_FALSE(validate_move(p, StarMove{{{}, {"aa", "b"}}, {"a", "ab"}}));
  EXPECT_FALSE(validate_move(p, StarMove{{{}, {"a", "ab"}}, {"a", "ab"}}));
  EXPECT_TRUE(validate_move(p, StarMove{{{}, {"aa", "a"}}, {"a", "ab"}}));
  EXPECT_TRUE(validate_move(p, StarMove{{{}, {"aa", "", "b"}}, {"a", "ab"}}));
  EXPECT_TRUE(validate_move(p, StarMove{{{"a"}, {"aab"}}, {"a", "ab"}}));
  EXPECT_TRUE(validate_move(p, StarMove{{{"aab"}}, {"a", "ab"}}));
  EXPECT_TRUE(validate_move(p, StarMove{{{}, {"aab"}}, {"ab", "a"}}));
  EXPECT_TRUE(validate_move(gre(3, 0, {"a"}, {}), StarMove{{{"a"}}, {}}));
}

TEST(Validate, StarHittingSetNeedsEveryComposition) {
  // ab = a·b, so B' = {ab} leaves the composition (a, b) unhit
  const Position p = gre(3, 1, {"a"}, {"ab"});
  EXPECT_TRUE(validate_move(p, StarMove{{{"a"}}, {"ab"}}));
  EXPECT_FALSE(validate_move(p, StarMove{{{"a"}}, {"b", "ab"}}));
  EXPECT_FALSE(validate_move(p, StarMove{{{"a"}}, {"a", "ab"}}));
  EXPECT_TRUE(validate_move(p, StarMove{{{"a"}}, {"a"}}));
}

TEST(Apply, AtomMoves) {
  const Outcome win = apply_move(gre(1, 0, {"a"}, {"b", ""}), AtomMove{'a'});
  EXPECT_EQ(std::get<Terminal>(win).winner, Player::S);
  const Outcome lose = apply_move(gre(1, 0, {"a", "b"}, {}), AtomMove{'a'});
  EXPECT_EQ(std::get<Terminal>(lose).winner, Player::D);
  EXPECT_EQ(std::get<Terminal>(apply_move(re(1, {""}, {"a"}), AtomMove{})).winner, Player::S);
  EXPECT_EQ(std::get<Terminal>(apply_move(re(1, {}, {"a"}), AtomMove{'a'})).winner, Player::D);
}

TEST(Apply, EmptyMove) {
  EXPECT_EQ(std::get<Terminal>(apply_move(re(1, {}, {"a"}), EmptyMove{})).winner, Player::S);
  EXPECT_EQ(std::get<Terminal>(apply_move(re(1, {"a"}, {}), EmptyMove{})).winner, Player::D);
}

TEST(Apply, CatSplitsAndSides) {
  const Position p = gre(4, 1, {"ab"}, {"a"});
  // sides[0][c] is the side of the 2-split (a[:c], a[c:]): (ε,a) → 2, (a,ε) → 1
  const Outcome out = apply_move(p, CatMove{{1}, {{2, 1}}, 1, 2, 0, 1});
  const auto& two = std::get<TwoChildren>(out);
  EXPECT_EQ(two.first, gre(1, 0, {"a"}, {"a"}));
  EXPECT_EQ(two.second, gre(2, 1, {"b"}, {"a"}));
}

TEST(Apply, UnionChildren) {
  const auto two = std::get<TwoChildren>(apply_move(re(5, {"a", "b"}, {"ab"}), UnionMove{{"a"}, {"b"}, 2, 2}));
  EXPECT_EQ(two.first, re(2, {"a"}, {"ab"}));
  EXPECT_EQ(two.second, re(2, {"b"}, {"ab"}));
}

TEST(Apply, StarChild) {
  const auto one = std::get<OneChild>(apply_move(gre(4, 2, {"", "aab"}, {"ab"}), StarMove{{{}, {"aa", "b"}}, {"a", "ab"}}));
  EXPECT_EQ(one.child, gre(3, 1, {"aa", "b"}, {"a", "ab"}));
}

TEST(Apply, NegationRules) {
  const auto g = std::get<OneChild>(apply_move(gre(4, 2, {"a"}, {"b"}), NegMove{}));
  EXPECT_EQ(g.child, gre(3, 2, {"b"}, {"a"}));
  const auto r = std::get<OneChild>(apply_move(resf(4, 2, {"a"}, {"b"}), NegMove{}));
  EXPECT_EQ(r.child, resf(3, 0, {"b"}, {"a"}));
  Rules literal;
  literal.resf_negation_costs_size = false;
  const auto l = std::get<OneChild>(apply_move(resf(4, 2, {"a"}, {"b"}), NegMove{}, literal));
  EXPECT_EQ(l.child, resf(4, 0, {"b"}, {"a"}));
}

TEST(Apply, RejectsInvalidMoves) {
  EXPECT_THROW(apply_move(re(3, {"a"}, {}), NegMove{}), std::invalid_argument);
}

TEST(Lemmas, SharedWord) {
  EXPECT_TRUE(d_winning_by_lemma5(re(3, {"ab"}, {"ab", "b"})));
  EXPECT_FALSE(d_winning_by_lemma5(re(3, {"a"}, {"b"})));
  EXPECT_FALSE(d_winning_by_lemma5(re(3, {}, {})));
}

TEST(Lemmas, ChainCondition) {
  EXPECT_TRUE(d_winning_by_chain_lemma(gre(3, 0, {"aaaaab"}, {"aaaaaab"})));
  EXPECT_FALSE(d_winning_by_chain_lemma(gre(5, 0, {"aaaaab"}, {"aaaaaab"})));
  EXPECT_FALSE(d_winning_by_chain_lemma(gre(2, 1, {"aaaaab"}, {"aaaaaab"})));
  EXPECT_FALSE(d_winning_by_chain_lemma(re(1, {"aaaaab"}, {"aaaaaab"})));
  EXPECT_FALSE(d_winning_by_chain_lemma(gre(3, 0, {"aaaaab"}, {"aaaaaabb"})));
  EXPECT_TRUE(d_winning_by_chain_lemma(gre(1, 0, {"aabbb"}, {"aaabb"})));
}

TEST(Play, GameStateFlow) {
  GameState g = start_game(re(3, {"ab"}, {"a", "b", ""}));
  EXPECT_EQ(g.awaiting(), Player::S);
  // B = {ε, a, b}: the sides of ab's strategy put ε and b left, and the ε of (a, ε) right
  auto next = play_s(g, CatMove{{1}, {{1}, {1, 2}, {1, 1}}, 1, 1});
  ASSERT_TRUE(std::holds_alternative<GameState>(next));
  g = std::get<GameState>(next);
  EXPECT_EQ(g.awaiting(), Player::D);
  EXPECT_TRUE(std::holds_alternative<std::string>(play_s(g, EmptyMove{})));
  EXPECT_TRUE(std::holds_alternative<std::string>(play_d(g, 3)));
  g = std::get<GameState>(play_d(g, 2));
  EXPECT_EQ(g.position, re(1, {"b"}, {""}));
  g = std::get<GameState>(play_s(g, AtomMove{'b'}));
  ASSERT_TRUE(g.over());
  EXPECT_EQ(*g.winner, Player::S);
  EXPECT_TRUE(std::holds_alternative<std::string>(play_d(g, 1)));
}

TEST(Play, ZeroBudgetIsLostForS) {
  const GameState g = start_game(re(0, {}, {}));
  ASSERT_TRUE(g.over());
  EXPECT_EQ(*g.winner, Player::D);
}

namespace {

struct MoveSample {
  Position p;
  std::vector<SMove> moves;
};

std::vector<MoveSample> sample_moves(std::uint64_t seed, int count, bool shared) {
  std::mt19937_64 rng(seed);
  const WordSet pool = words_upto(ab, 2);
  SolverOptions raw;
  raw.generation = MoveGeneration::raw;
  Solver solver(raw);
  std::vector<MoveSample> out;
  const Dialect dialects[] = {Dialect::re, Dialect::resf, Dialect::gre};
  while (static_cast<int>(out.size()) < count) {
    WordSet a = random_set(rng, pool, 2), b = random_set(rng, pool, 2);
    if (shared) {
      const Word w = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
      a = set_union(a, {w});
      b = set_union(b, {w});
    }
    const Dialect d = dialects[std::uniform_int_distribution<int>(0, 2)(rng)];
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    std::optional<int> s;
    if (d != Dialect::re) s = std::uniform_int_distribution<int>(0, std::min(k, 2))(rng);
    const Position p = make_position(d, k, s, ab, a, b);
    out.push_back({p, solver.enumerate_s_moves(p)});
  }
  return out;
}

}  // namespace

TEST(Properties, EveryMoveShrinksTheBudget) {
  for (const auto& [p, moves] : sample_moves(1, 150, false)) {
    for (const auto& m : moves) {
      ASSERT_FALSE(validate_move(p, m)) << *validate_move(p, m);
      const Outcome out = apply_move(p, m);
      if (const auto* one = std::get_if<OneChild>(&out)) EXPECT_LT(one->child.k, p.k);
      if (const auto* two = std::get_if<TwoChildren>(&out)) {
        EXPECT_LT(two->first.k, p.k);
        EXPECT_LT(two->second.k, p.k);
      }
    }
  }
}

TEST(Properties, BudgetConservation) {
  for (const auto& [p, moves] : sample_moves(2, 150, false)) {
    for (const auto& m : moves) {
      auto check = [&](int k1, int k2, int s1, int s2) {
        EXPECT_EQ(k1 + k2 + 1, p.k);
        EXPECT_EQ(s1 + s2, p.stars_or_zero());
        const auto two = std::get<TwoChildren>(apply_move(p, m));
        EXPECT_GE(two.first.k, two.first.stars_or_zero());
        EXPECT_GE(two.second.k, two.second.stars_or_zero());
      };
      if (const auto* u = std::get_if<UnionMove>(&m)) check(u->k1, u->k2, u->s1, u->s2);
      if (const auto* c = std::get_if<CatMove>(&m)) check(c->k1, c->k2, c->s1, c->s2);
    }
  }
}

TEST(Properties, SharedWordSurvivesEveryMove) {
  std::size_t checked = 0;
  for (const auto& [p, moves] : sample_moves(3, 150, true)) {
    ASSERT_TRUE(d_winning_by_lemma5(p));
    for (const auto& m : moves) {
      ++checked;
      const Outcome out = apply_move(p, m);
      if (const auto* t = std::get_if<Terminal>(&out)) {
        EXPECT_EQ(t->winner, Player::D);
      } else if (const auto* one = std::get_if<OneChild>(&out)) {
        EXPECT_TRUE(d_winning_by_lemma5(one->child));
      } else {
        const auto& two = std::get<TwoChildren>(out);
        EXPECT_TRUE(d_winning_by_lemma5(two.first) || d_winning_by_lemma5(two.second));
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Properties, NegationAndStarBudgets) {
  for (const auto& [p, moves] : sample_moves(4, 100, false)) {
    for (const auto& m : moves) {
      if (!std::holds_alternative<NegMove>(m)) continue;
      const auto child = std::get<OneChild>(apply_move(p, m)).child;
      if (p.dialect == Dialect::resf) EXPECT_EQ(child.s, 0);
      if (p.dialect == Dialect::gre) EXPECT_EQ(*child.s, std::min(*p.s, std::max(child.k - 1, 0)));
    }
  }
}
