#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regame/expr.hpp"
#include "regame/langs.hpp"
#include "regame/matcher.hpp"
#include "regame/oracle.hpp"
#include "regame/words.hpp"

namespace regame {

/// Membership in the (possibly infinite) negative language B0.
using WordPredicate = std::function<bool(const Word&)>;

struct CegisOptions {
  /// Counterexamples are searched in Σ^{<=horizon}, shortest first.
  std::size_t horizon = 10;
  std::size_t max_rounds = 500;
  OracleMode mode = OracleMode::observational;
};

enum class CegisStatus : std::uint8_t {
  /// No expression within bounds separates A from the final sample, hence none separates A from B0.
  certificate,
  /// A candidate matches no word of B0 up to the horizon.
  refuted,
  /// Round budget exhausted with candidates still being refuted.
  inconclusive,
};

inline std::string_view to_string(CegisStatus s) {
  switch (s) {
    case CegisStatus::certificate: return "certificate";
    case CegisStatus::refuted: return "refuted";
    case CegisStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CegisRound {
  Expr candidate;
  Word counterexample;
};

struct CegisResult {
  CegisStatus status = CegisStatus::inconclusive;
  EnumSpec spec;
  std::size_t horizon = 0;
  WordSet a;
  WordSet b_sample;
  std::vector<CegisRound> rounds;
  std::optional<Expr> refuting;
  std::string diagnostic;
};

/// ε, every word of length <= 2, and A with one symbol added to each even chain, kept
/// where they belong to B0.
inline WordSet default_seed(const WordSet& a, const Alphabet& sigma, const WordPredicate& in_b0) {
  WordSet seed = set_union(words_upto(sigma, 2), lengthen_even_chains(a));
  WordSet out;
  for (const auto& w : seed)
    if (in_b0(w)) out.push_back(w);
  return out;
}

/// Counterexample-guided search for a proof that no expression within the spec separates
/// A from B0: synthesize a separator for the current sample, refute it with the shortest
/// word of B0 it matches, repeat.
inline CegisResult certify_lower_bound(const WordSet& a, const WordPredicate& in_b0, const EnumSpec& spec,
                                       const WordSet& seed, const CegisOptions& opt = {}) {
  CegisResult res;
  res.spec = spec;
  res.horizon = opt.horizon;
  res.a = canonical(a);
  for (const auto& w : res.a) {
    spec.alphabet.check_word(w);
    if (in_b0(w)) throw std::invalid_argument("word '" + format_word(w) + "' of A lies in B0");
  }
  for (const auto& w : seed) {
    spec.alphabet.check_word(w);
    if (!in_b0(w)) throw std::invalid_argument("seed word '" + format_word(w) + "' is not in B0");
  }
  res.b_sample = canonical(seed);

  const WordSet probe = words_upto(spec.alphabet, opt.horizon);
  for (std::size_t round = 0; round < opt.max_rounds; ++round) {
    auto cand = min_separating(res.a, res.b_sample, spec, opt.mode);
    if (!cand) {
      res.status = CegisStatus::certificate;
      return res;
    }
    Matcher m(cand->expr);
    std::optional<Word> cex;
    for (const auto& w : probe)
      if (m(w) && in_b0(w)) {
        cex = w;
        break;
      }
    if (!cex) {
      res.status = CegisStatus::refuted;
      res.refuting = cand->expr;
      res.diagnostic = "candidate " + render_expr(cand->expr) + " matches no word of B0 up to length " +
                       std::to_string(opt.horizon);
      return res;
    }
    res.rounds.push_back({cand->expr, *cex});
    res.b_sample = set_union(res.b_sample, WordSet{*cex});
  }
  res.status = CegisStatus::inconclusive;
  res.diagnostic = "no decision after " + std::to_string(opt.max_rounds) + " rounds at horizon " +
                   std::to_string(opt.horizon);
  return res;
}

/// Re-runs the final search of a certificate against its stored sample.
inline bool replay_certificate(const CegisResult& r, OracleMode mode = OracleMode::observational) {
  if (r.status != CegisStatus::certificate) return false;
  return !min_separating(r.a, r.b_sample, r.spec, mode).has_value();
}

}  // namespace regame
