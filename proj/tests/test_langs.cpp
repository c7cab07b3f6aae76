#include <gtest/gtest.h>

#include "regame/certify.hpp"
#include "regame/fo.hpp"
#include "regame/langs.hpp"

using namespace regame;

namespace {

bool balanced(const Word& w) {
  int depth = 0;
  for (char c : w) {
    depth += c == '(' ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

}  // namespace

TEST(Tower, SmallValuesAndOverflow) {
  EXPECT_EQ(twr(0), 1u);
  EXPECT_EQ(twr(1), 2u);
  EXPECT_EQ(twr(3), 16u);
  EXPECT_EQ(twr(4), 65536u);
  EXPECT_THROW(twr(5), std::overflow_error);
}

TEST(Encodings, SmallLevels) {
  EXPECT_EQ(enc_language(0), (WordSet{"()"}));
  EXPECT_EQ(enc_language(1), (WordSet{"()", "(())"}));
  EXPECT_EQ(enc_language(2).size(), 5u);
  EXPECT_EQ(enc_language(3).size(), 114u);
}

TEST(Encodings, WordsAreBalancedAndCanonical) {
  const WordSet enc = enc_language(3);
  EXPECT_EQ(enc, canonical(enc));
  for (const auto& w : enc) {
    EXPECT_TRUE(balanced(w)) << w;
    EXPECT_EQ(w.front(), '(');
    EXPECT_EQ(w.back(), ')');
  }
}

TEST(Encodings, OrderingsOfOneSet) {
  EXPECT_EQ(encodings_of("(()(()))"), (WordSet{"((())())", "(()(()))"}));
  EXPECT_EQ(encodings_of("()"), (WordSet{"()"}));
  // Every encoding of a member of V_3 stays inside enc(2)
  const WordSet enc2 = enc_language(2);
  for (const auto& w : enc2)
    for (const auto& v : encodings_of(w)) EXPECT_TRUE(contains(enc2, v));
}

TEST(EvenChains, Membership) {
  EXPECT_TRUE(even_chain_member("aabbb", 2));
  EXPECT_FALSE(even_chain_member("ababa", 2));
  EXPECT_TRUE(even_chain_member("", 2));
  EXPECT_TRUE(even_chain_member("a", 2));  // no b at all
  EXPECT_FALSE(even_chain_member("ab", 2));
  EXPECT_THROW(even_chain_member("abc", 2), alphabet_error);
}

TEST(EvenChains, LnkWords) {
  const WordSet l = make_lnk(2, 2);
  EXPECT_EQ(l, (WordSet{"aaaaabbbb", "aaaabbbbb"}));
  for (const auto& w : l) EXPECT_TRUE(even_chain_member(w, 2));
  for (const auto& w : lengthen_even_chains(l)) EXPECT_FALSE(even_chain_member(w, 2)) << w;
  EXPECT_EQ(make_lnk(3, 1), (WordSet{"aaabbbcc", "aaabbccc", "aabbbccc"}));
  EXPECT_THROW(make_lnk(2, 0), std::invalid_argument);
  EXPECT_EQ(lengthen_even_chains({"aabab", ""}), (WordSet{"", "aaabab"}));
}

TEST(Formula, PhiIsClosedWithFrozenSizes) {
  const std::size_t want[] = {23, 149, 1087, 8087};
  for (int n = 0; n <= 3; ++n) {
    const auto phi = fo::build_phi(n);
    EXPECT_TRUE(fo::is_closed(phi));
    EXPECT_EQ(fo::fo_size(phi), want[n]);
  }
  EXPECT_THROW(fo::build_phi(4), std::invalid_argument);
}

TEST(Formula, SizeConvention) {
  using namespace fo;
  EXPECT_EQ(fo_size(Top()), 1u);
  EXPECT_EQ(fo_size(Leq("x", "y")), 3u);
  EXPECT_EQ(fo_size(Neq("x", "y")), 2u);
  EXPECT_EQ(fo_size(Macro("L", -1, {"x"}, P("x"))), 1u);
  EXPECT_EQ(fo_size(Exists("x", And(P("x"), Not(P("x"))))), 5u);
}

TEST(Formula, FreeVariables) {
  using namespace fo;
  EXPECT_EQ(free_variables(And(P("x"), Exists("y", Less("x", "y")))), (std::set<std::string>{"x"}));
  EXPECT_TRUE(is_closed(ForAll("x", Exists("y", Eq("x", "y")))));
  EXPECT_THROW(Evaluator(P("x")), std::invalid_argument);
}

TEST(Formula, MacroDefinitions) {
  const auto defs = fo::macro_definitions(1);
  ASSERT_FALSE(defs.empty());
  bool eq0_top = false;
  for (const auto& d : defs)
    if (d.rfind("=₀", 0) == 0 && d.find("⊤") != std::string::npos) eq0_top = true;
  EXPECT_TRUE(eq0_top);
  EXPECT_NE(defs.back().find("φ₁"), std::string::npos);
  EXPECT_EQ(fo::render(fo::build_phi(0)), "φ₀");
  const std::string expanded = fo::render(fo::build_phi(0), true);
  EXPECT_EQ(expanded.find("set₀"), std::string::npos);
  EXPECT_NE(expanded.find("∃"), std::string::npos);
}

TEST(Evaluate, SmallFormulas) {
  using namespace fo;
  const auto some_open = Exists("x", P("x"));
  EXPECT_FALSE(fo_eval(some_open, WordModel::of(")")));
  EXPECT_TRUE(fo_eval(some_open, WordModel::of(")(")));
  EXPECT_FALSE(fo_eval(some_open, WordModel::of("")));
  EXPECT_TRUE(fo_eval(ForAll("x", P("x")), WordModel::of("")));
  const auto ordered = Exists("x", Exists("y", And({P("x"), Not(P("y")), Less("x", "y")})));
  EXPECT_TRUE(fo_eval(ordered, WordModel::of(")()")));
  EXPECT_FALSE(fo_eval(ordered, WordModel::of("))((")));
}

TEST(Evaluate, PhiOnExamples) {
  fo::Evaluator phi1(fo::build_phi(1));
  EXPECT_TRUE(phi1("(())"));
  EXPECT_TRUE(phi1("()"));
  EXPECT_FALSE(phi1("(("));
  EXPECT_FALSE(phi1("(()())"));  // two equal elements
  EXPECT_FALSE(phi1(""));
}

TEST(Evaluate, PhiMatchesGenerator) {
  const WordSet words = words_upto(paren_alphabet(), 10);
  for (int n = 0; n <= 2; ++n) {
    fo::Evaluator phi(fo::build_phi(n));
    const WordSet enc = enc_language(static_cast<unsigned>(n));
    WordSet accepted;
    for (const auto& w : words)
      if (phi(w)) accepted.push_back(w);
    WordSet expected;
    for (const auto& w : enc)
      if (w.size() <= 10) expected.push_back(w);
    EXPECT_EQ(accepted, expected) << "n = " << n;
  }
}

TEST(Certify, EvenChainCertificate) {
  const WordSet a = make_lnk(2, 2);
  const WordPredicate in_b0 = [](const Word& w) { return !even_chain_member(w, 2); };
  const EnumSpec spec{Alphabet("ab"), Dialect::resf, 9, 1};
  const auto seed = default_seed(a, spec.alphabet, in_b0);
  for (const auto& w : seed) EXPECT_TRUE(in_b0(w));
  const CegisResult r = certify_lower_bound(a, in_b0, spec, seed);
  EXPECT_EQ(r.status, CegisStatus::certificate);
  EXPECT_TRUE(replay_certificate(r));
  for (const auto& w : r.b_sample) EXPECT_TRUE(in_b0(w));
}

TEST(Certify, RefutedByCandidate) {
  const Alphabet ab("ab");
  const WordPredicate nonempty = [](const Word& w) { return !w.empty(); };
  const CegisResult r = certify_lower_bound({""}, nonempty, {ab, Dialect::re, 1, std::nullopt}, {});
  EXPECT_EQ(r.status, CegisStatus::refuted);
  ASSERT_TRUE(r.refuting);
  EXPECT_EQ(render_expr(*r.refuting), "\\e");
  EXPECT_FALSE(replay_certificate(r));
}

TEST(Certify, CounterexampleRounds) {
  const Alphabet ab("ab");
  const WordPredicate not_aa = [](const Word& w) { return w != "aa"; };
  const EnumSpec spec{ab, Dialect::re, 4, std::nullopt};
  const CegisResult cut = certify_lower_bound({"aa"}, not_aa, spec, {}, {10, 1});
  EXPECT_EQ(cut.status, CegisStatus::inconclusive);
  ASSERT_EQ(cut.rounds.size(), 1u);
  EXPECT_EQ(render_expr(cut.rounds[0].candidate), "a*");
  EXPECT_EQ(cut.rounds[0].counterexample, "");

  const CegisResult full = certify_lower_bound({"aa"}, not_aa, spec, {});
  EXPECT_EQ(full.status, CegisStatus::refuted);
  EXPECT_EQ(render_expr(*full.refuting), "aa");
}

TEST(Certify, RejectsBadInputs) {
  const Alphabet ab("ab");
  const WordPredicate nonempty = [](const Word& w) { return !w.empty(); };
  EXPECT_THROW(certify_lower_bound({"a"}, nonempty, {ab, Dialect::re, 2, std::nullopt}, {}), std::invalid_argument);
  EXPECT_THROW(certify_lower_bound({""}, nonempty, {ab, Dialect::re, 2, std::nullopt}, {""}), std::invalid_argument);
}
