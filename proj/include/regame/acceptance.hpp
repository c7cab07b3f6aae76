#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "regame/certify.hpp"
#include "regame/crosscheck.hpp"
#include "regame/fo.hpp"
#include "regame/langs.hpp"
#include "regame/oracle.hpp"
#include "regame/solver.hpp"
#include "regame/strategy.hpp"

/// Desk-scale acceptance checks. Reports contain no timings, so two runs must print the
/// same bytes.
namespace regame::acceptance {

struct Report {
  int number = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;

  std::string verdict_line() const {
    return std::string(pass ? "[PASS]" : "[FAIL]") + " criterion " + std::to_string(number) + ": " + title +
           ": " + summary;
  }

  std::string text() const {
    std::string out;
    for (const auto& d : details) out += "    " + d + "\n";
    out += verdict_line() + "\n";
    return out;
  }
};

inline std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline const Alphabet& ab() {
  static const Alphabet sigma("ab");
  return sigma;
}

// ---------------------------------------------------------------------------
// The grid: Σ = {a,b}, A, B ⊆ Σ^{<=2}, |A|, |B| <= 2, disjoint, k <= 5.
// ---------------------------------------------------------------------------

inline std::vector<WordSet> small_subsets(const WordSet& universe, std::size_t max_card) {
  std::vector<WordSet> out;
  for (std::uint32_t m = 0; m < (1u << universe.size()); ++m) {
    if (static_cast<std::size_t>(__builtin_popcount(m)) > max_card) continue;
    WordSet s;
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (m >> i & 1u) s.push_back(universe[i]);
    out.push_back(canonical(std::move(s)));
  }
  return out;
}

struct GridPair {
  WordSet a, b;
};

inline std::vector<GridPair> grid_pairs() {
  const auto subsets = small_subsets(words_upto(ab(), 2), 2);
  std::vector<GridPair> out;
  for (const auto& a : subsets)
    for (const auto& b : subsets)
      if (!intersects(a, b)) out.push_back({a, b});
  return out;
}

/// RE, then GRE with s = 0 and s = 1, for every k in 0..5 where k >= s.
inline std::vector<Position> grid_positions(const std::vector<Dialect>& dialects = {Dialect::re, Dialect::gre}) {
  std::vector<Position> out;
  for (const auto& [a, b] : grid_pairs())
    for (int k = 0; k <= 5; ++k)
      for (Dialect d : dialects) {
        if (d == Dialect::re) {
          out.push_back(make_position(d, k, std::nullopt, ab(), a, b));
          continue;
        }
        for (int s = 0; s <= std::min(1, k); ++s) out.push_back(make_position(d, k, s, ab(), a, b));
      }
  return out;
}

inline std::string describe(const Position& p) {
  std::string out = std::string(to_string(p.dialect)) + " k=" + std::to_string(p.k);
  if (p.s) out += " s=" + std::to_string(*p.s);
  return out + " A={" + format_word_list(p.a) + "} B={" + format_word_list(p.b) + "}";
}

struct GridRun {
  std::vector<Position> positions;
  std::vector<SolveResult> results;
  std::size_t pairs = 0;
};

inline GridRun solve_grid(SolverOptions opt = {}) {
  GridRun g;
  g.pairs = grid_pairs().size();
  g.positions = grid_positions();
  Solver solver(opt);
  for (const auto& p : g.positions) g.results.push_back(solver.solve(p));
  return g;
}

/// Game value against an independent enumeration of all expressions up to size 5.
inline Report criterion1(const GridRun& g) {
  Report r{1, "theorem equivalence grid"};
  const WordSet universe = words_upto(ab(), 2);
  GridOracle re_oracle({ab(), Dialect::re, 5, std::nullopt}, universe);
  GridOracle gre_oracle({ab(), Dialect::gre, 5, 1}, universe);
  r.details.push_back("oracle expressions: RE<=5 " + std::to_string(re_oracle.size()) + ", GRE<=5 with <=1 star " +
                      std::to_string(gre_oracle.size()));
  std::size_t disagree = 0, s_wins = 0;
  for (std::size_t i = 0; i < g.positions.size(); ++i) {
    const Position& p = g.positions[i];
    const auto k = static_cast<std::size_t>(p.k);
    const auto sep = p.dialect == Dialect::re ? re_oracle.find(p.a, p.b, k)
                                              : gre_oracle.find(p.a, p.b, k, static_cast<std::size_t>(*p.s));
    const bool s_wins_here = g.results[i].winner == Player::S;
    s_wins += s_wins_here;
    if (s_wins_here != sep.has_value()) {
      ++disagree;
      if (disagree <= 10)
        r.details.push_back("disagreement at " + describe(p) + ": solver " +
                            std::string(to_string(g.results[i].winner)) + ", oracle " +
                            (sep ? render_expr(*sep) : std::string("none")));
    }
  }
  r.pass = disagree == 0;
  r.summary = std::to_string(g.pairs) + " pairs, " + std::to_string(g.positions.size()) + " positions, " +
              std::to_string(s_wins) + " S wins, " + std::to_string(disagree) + " disagreements";
  return r;
}

/// Plays the fixed-expression strategy of e against every D reply; counts the leaves.
inline bool fixed_expr_wins_everywhere(const Expr& e, const Position& p, std::size_t& leaves, std::string& why) {
  if (auto v = check_fixed_expr(e, p)) {
    why = "at " + describe(p) + ": " + *v;
    return false;
  }
  const PlannedMove plan = fixed_expr_move(e, p);
  if (auto v = validate_move(p, plan.move)) {
    why = "illegal " + std::string(move_name(plan.move)) + " move from " + render_expr(e) + " at " + describe(p) +
          ": " + *v;
    return false;
  }
  const Outcome out = apply_move(p, plan.move);
  if (const auto* t = std::get_if<Terminal>(&out)) {
    ++leaves;
    if (t->winner != Player::S) why = "D wins at " + describe(p) + " against " + render_expr(e);
    return t->winner == Player::S;
  }
  if (const auto* one = std::get_if<OneChild>(&out)) return fixed_expr_wins_everywhere(plan.next[0], one->child, leaves, why);
  const auto& two = std::get<TwoChildren>(out);
  return fixed_expr_wins_everywhere(plan.next[0], two.first, leaves, why) &&
         fixed_expr_wins_everywhere(plan.next[1], two.second, leaves, why);
}

inline Report criterion2(const GridRun& g) {
  Report r{2, "witness soundness"};
  std::size_t checked = 0, bad_witness = 0, bad_playout = 0, leaves = 0;
  for (std::size_t i = 0; i < g.positions.size(); ++i) {
    const auto& res = g.results[i];
    if (res.winner != Player::S) continue;
    ++checked;
    const Position& p = g.positions[i];
    if (!res.witness) {
      ++bad_witness;
      r.details.push_back("S win without witness at " + describe(p));
      continue;
    }
    if (auto why = witness_problem(*res.witness, p); !why.empty()) {
      ++bad_witness;
      if (bad_witness <= 10) r.details.push_back(why + " at " + describe(p));
      continue;
    }
    std::string why;
    if (!fixed_expr_wins_everywhere(*res.witness, p, leaves, why)) {
      ++bad_playout;
      if (bad_playout <= 10) r.details.push_back("playout of " + render_expr(*res.witness) + " fails: " + why);
    }
  }
  r.pass = checked > 0 && bad_witness == 0 && bad_playout == 0;
  r.summary = std::to_string(checked) + " witnesses checked, " + std::to_string(bad_witness) + " unsound, " +
              std::to_string(leaves) + " playout leaves over all D replies, " + std::to_string(bad_playout) +
              " playouts lost";
  return r;
}

// ---------------------------------------------------------------------------
// Pruning lemmas.
// ---------------------------------------------------------------------------

/// Random positions with a word planted in both A and B; k <= 4 over Σ^{<=3}.
inline std::vector<Position> planted_positions(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const WordSet pool = words_upto(ab(), 3);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(lo, hi)(rng));
  };
  const Dialect dialects[] = {Dialect::re, Dialect::resf, Dialect::gre};
  std::vector<Position> out;
  while (out.size() < count) {
    const Word shared = pool[pick(0, pool.size() - 1)];
    WordSet a{shared}, b{shared};
    for (std::size_t n = pick(0, 2); n > 0; --n) a.push_back(pool[pick(0, pool.size() - 1)]);
    for (std::size_t n = pick(0, 2); n > 0; --n) b.push_back(pool[pick(0, pool.size() - 1)]);
    const Dialect d = dialects[pick(0, 2)];
    const int k = static_cast<int>(pick(0, 4));
    std::optional<int> s;
    if (d != Dialect::re) s = static_cast<int>(pick(0, static_cast<std::size_t>(std::min(k, 2))));
    out.push_back(make_position(d, k, s, ab(), std::move(a), std::move(b)));
  }
  return out;
}

/// Star-free positions (s = 0) with w ∈ A, w' ∈ B differing only in chains longer than k.
inline std::vector<Position> chain_positions() {
  auto rep = [](char c, int n) { return Word(static_cast<std::size_t>(n), c); };
  std::vector<Position> out;
  for (Dialect d : {Dialect::resf, Dialect::gre})
    for (int k = 1; k <= 3; ++k) {
      const int m = k + 1;
      const std::vector<std::pair<WordSet, WordSet>> sets = {
          {{rep('a', m)}, {rep('a', m + 1)}},
          {{rep('a', m) + "b"}, {rep('a', m + 2) + "b"}},
          {{"b" + rep('a', m) + "b"}, {"b" + rep('a', m + 1) + "b"}},
          {{rep('a', m) + rep('b', m)}, {rep('a', m + 1) + rep('b', m + 2)}},
          {{rep('b', m) + "a", "b"}, {rep('b', m + 1) + "a", "a"}},
      };
      for (const auto& [a, b] : sets) out.push_back(make_position(d, k, 0, ab(), a, b));
    }
  return out;
}

inline Report criterion3() {
  Report r{3, "lemma suite"};
  bool ok = true;

  SolverOptions no_pruning;
  no_pruning.lemma5_pruning = false;
  no_pruning.chain_pruning = false;
  {
    Solver solver(no_pruning);
    std::size_t d_wins = 0;
    const auto planted = planted_positions(1000, 0x5eed0001);
    for (const auto& p : planted) {
      const bool d = solver.solve(p).winner == Player::D;
      d_wins += d;
      if (!d) r.details.push_back("planted position won by S: " + describe(p));
    }
    ok = ok && d_wins == planted.size();
    r.details.push_back("planted shared word, searched without pruning: " + std::to_string(d_wins) + "/" +
                        std::to_string(planted.size()) + " D");
  }
  {
    SolverOptions with_chain;
    with_chain.chain_pruning = true;
    Solver plain(no_pruning), pruned(with_chain);
    std::size_t d_plain = 0, d_pruned = 0, flagged = 0;
    const auto chained = chain_positions();
    for (const auto& p : chained) {
      flagged += d_winning_by_chain_lemma(p);
      const bool a = plain.solve(p).winner == Player::D;
      const bool b = pruned.solve(p).winner == Player::D;
      d_plain += a;
      d_pruned += b;
      if (!a || !b) r.details.push_back("chain position not won by D: " + describe(p));
    }
    ok = ok && flagged == chained.size() && d_plain == chained.size() && d_pruned == chained.size();
    r.details.push_back("chain positions: " + std::to_string(chained.size()) + " flagged by the chain condition, " +
                        std::to_string(d_plain) + " D without pruning, " + std::to_string(d_pruned) +
                        " D with chain pruning");
  }
  {
    SolverOptions all_pruning;
    all_pruning.chain_pruning = true;
    Solver plain(no_pruning), pruned(all_pruning);
    std::size_t changed = 0;
    const auto grid = grid_positions({Dialect::re, Dialect::resf, Dialect::gre});
    for (const auto& p : grid)
      if (plain.solve(p).winner != pruned.solve(p).winner) {
        ++changed;
        if (changed <= 10) r.details.push_back("pruning changes the winner at " + describe(p));
      }
    ok = ok && changed == 0;
    r.details.push_back("grid (RE, RESF, GRE) with both prunings on vs off: " + std::to_string(grid.size()) +
                        " positions, " + std::to_string(changed) + " winners changed");
  }
  r.pass = ok;
  r.summary = ok ? "planted and chain positions are D wins; pruning preserves every grid winner"
                 : "a lemma check failed";
  return r;
}

// ---------------------------------------------------------------------------
// Size lower bound for finite languages.
// ---------------------------------------------------------------------------

/// Least RE separating L from Σ^{<=4} \ L, searched up to `bound`.
inline std::optional<Separator> min_re_against_rest(const WordSet& l, std::size_t bound) {
  const WordSet rest = set_difference(words_upto(ab(), 4), l);
  return min_separating(l, rest, {ab(), Dialect::re, bound, std::nullopt}, OracleMode::observational);
}

/// 2^size >= |L|, i.e. size >= log2 |L| without floating point.
inline bool meets_log_bound(std::size_t size, std::size_t card) {
  return size >= 63 || (std::uint64_t{1} << size) >= card;
}

inline Report criterion4() {
  Report r{4, "finite language size bound"};
  bool ok = true;
  const WordSet cube = words_of_length(ab(), 3);
  const auto sep = min_re_against_rest(cube, 12);
  if (sep) {
    r.details.push_back("L = Σ^3 (8 words): minimal RE " + render_expr(sep->expr) + " of size " +
                        std::to_string(sep->size) + " >= 3");
    ok = ok && sep->size >= 3 && meets_log_bound(sep->size, cube.size());
  } else {
    r.details.push_back("L = Σ^3: no separator up to size 12");
    ok = false;
  }

  constexpr std::size_t bound = 12;
  std::mt19937_64 rng(0x5eed0004);
  const WordSet pool = words_upto(ab(), 3);
  std::size_t exact = 0;
  for (int i = 1; i <= 20; ++i) {
    WordSet l;
    while (l.empty())
      for (const auto& w : pool)
        if (rng() & 1u) l.push_back(w);
    l = canonical(std::move(l));
    const auto s = min_re_against_rest(l, bound);
    // With nothing found up to the bound the minimum exceeds it.
    const std::size_t lower = s ? s->size : bound + 1;
    const bool good = meets_log_bound(lower, l.size());
    ok = ok && good;
    exact += s.has_value();
    r.details.push_back("L" + std::to_string(i) + " |L|=" + std::to_string(l.size()) + " {" + format_word_list(l) +
                        "}: " + (s ? "min size " + std::to_string(s->size) : "min size > " + std::to_string(bound)) +
                        (good ? " >= " : " < ") + "log2|L|");
  }
  r.pass = ok;
  r.summary = ok ? "Σ^3 needs size " + std::to_string(sep->size) + "; 20 random languages meet the bound (" +
                       std::to_string(exact) + " with exact minimum)"
                 : "a language beats the logarithmic bound";
  return r;
}

// ---------------------------------------------------------------------------
// Encodings of the cumulative hierarchy and their FO definitions.
// ---------------------------------------------------------------------------

inline Report criterion5() {
  Report r{5, "hierarchy encodings"};
  bool ok = true;
  const std::size_t frozen_n3 = 114;
  for (unsigned n = 1; n <= 3; ++n) {
    const std::size_t count = enc_language(n).size();
    const std::uint64_t tower = twr(n);
    const bool good = count >= tower && (n != 1 || count == 2) && (n != 2 || count == 5) &&
                      (n != 3 || (count == frozen_n3 && count >= 16));
    ok = ok && good;
    r.details.push_back("|enc(" + std::to_string(n) + ")| = " + std::to_string(count) + ", twr(" + std::to_string(n) +
                        ") = " + std::to_string(tower));
  }
  const WordSet all12 = words_upto(paren_alphabet(), 12);
  for (int n = 1; n <= 2; ++n) {
    fo::Evaluator phi(fo::build_phi(n));
    WordSet defined, generated;
    for (const auto& w : all12)
      if (phi(w)) defined.push_back(w);
    for (const auto& w : enc_language(static_cast<unsigned>(n)))
      if (w.size() <= 12) generated.push_back(w);
    defined = canonical(std::move(defined));
    generated = canonical(std::move(generated));
    const bool same = defined == generated;
    ok = ok && same;
    r.details.push_back("n=" + std::to_string(n) + ": φ defines " + std::to_string(defined.size()) +
                        " words of length <= 12, generator gives " + std::to_string(generated.size()) +
                        (same ? ", identical" : ", DIFFERENT"));
  }
  std::vector<std::size_t> sizes;
  for (int n = 0; n <= 3; ++n) sizes.push_back(fo::fo_size(fo::build_phi(n)));
  std::string line = "fo_size(φ0..φ3) =";
  for (auto s : sizes) line += " " + std::to_string(s);
  line += "; growth ratios";
  for (std::size_t i = 1; i < sizes.size(); ++i)
    line += " " + fixed2(static_cast<double>(sizes[i]) / static_cast<double>(sizes[i - 1]));
  r.details.push_back(line);
  r.pass = ok;
  r.summary = ok ? "counts 2, 5, 114 meet the tower; FO definitions match the generator for n=1,2"
                 : "an encoding check failed";
  return r;
}

// ---------------------------------------------------------------------------
// Even-chain languages.
// ---------------------------------------------------------------------------

inline Report criterion6() {
  Report r{6, "even-chain lower bound"};
  const WordSet a = make_lnk(2, 2);
  const WordPredicate in_b0 = [](const Word& w) { return !even_chain_member(w, 2); };
  const EnumSpec spec{ab(), Dialect::resf, 9, 1};
  const CegisResult cert = certify_lower_bound(a, in_b0, spec, default_seed(a, ab(), in_b0));
  r.details.push_back("A = {" + format_word_list(a) + "}, RESF size <= 9, stars <= 1, horizon " +
                      std::to_string(cert.horizon) + ": " + std::string(to_string(cert.status)) + " after " +
                      std::to_string(cert.rounds.size()) + " rounds, final sample of " +
                      std::to_string(cert.b_sample.size()) + " words");
  for (const auto& rd : cert.rounds)
    r.details.push_back("  candidate " + render_expr(rd.candidate) + " refuted by " + format_word(rd.counterexample));
  if (!cert.diagnostic.empty()) r.details.push_back(cert.diagnostic);
  const bool replayed = replay_certificate(cert);
  r.details.push_back(std::string("certificate replay: ") + (replayed ? "confirmed" : "failed"));

  const Expr two_star = parse_expr("(a|bb)*|(aa|b)*", ab());
  const Matcher m(two_star);
  std::size_t disagree = 0;
  const WordSet probe = words_upto(ab(), 10);
  for (const auto& w : probe)
    if (m(w) != even_chain_member(w, 2)) ++disagree;
  r.details.push_back(render_expr(two_star) + " (size " + std::to_string(two_star.size()) + ", " +
                      std::to_string(two_star.stars()) + " stars) vs even chains on " + std::to_string(probe.size()) +
                      " words: " + std::to_string(disagree) + " disagreements");

  r.pass = cert.status == CegisStatus::certificate && replayed && disagree == 0;
  r.summary = std::string(to_string(cert.status)) + (replayed ? " (replayed)" : "") + "; two-star RE " +
              (disagree == 0 ? "agrees" : "disagrees") + " on Σ^{<=10}";
  return r;
}

// ---------------------------------------------------------------------------
// Whole suite.
// ---------------------------------------------------------------------------

/// Criteria 1-6 in order; `progress` sees each report as it completes.
inline std::vector<Report> run_criteria_1_to_6(const std::function<void(const Report&)>& progress = {}) {
  std::vector<Report> out;
  auto add = [&](Report r) {
    if (progress) progress(r);
    out.push_back(std::move(r));
  };
  const GridRun grid = solve_grid();
  add(criterion1(grid));
  add(criterion2(grid));
  add(criterion3());
  add(criterion4());
  add(criterion5());
  add(criterion6());
  return out;
}

inline std::string text_of(const std::vector<Report>& reports) {
  std::string out;
  for (const auto& r : reports) out += r.text();
  return out;
}

/// Compares the text of a finished run with a fresh one.
inline Report criterion7(const std::vector<Report>& first_run) {
  Report r{7, "determinism"};
  const std::string a = text_of(first_run);
  const std::string b = text_of(run_criteria_1_to_6());
  r.pass = a == b;
  if (!r.pass) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    r.details.push_back("first difference at byte " + std::to_string(i));
  }
  r.summary = "second run of criteria 1-6 " + std::string(r.pass ? "is byte-identical" : "differs") + " (" +
              std::to_string(a.size()) + " bytes)";
  return r;
}

}  // namespace regame::acceptance
