#pragma once

#include <optional>
#include <string>

#include "regame/game.hpp"
#include "regame/matcher.hpp"
#include "regame/oracle.hpp"
#include "regame/solver.hpp"

namespace regame {

struct CrosscheckReport {
  bool agree = false;
  Player solver_winner = Player::D;
  std::optional<Expr> witness;
  std::optional<Expr> oracle_expr;
  /// Empty when the witness (if any) passes every check.
  std::string witness_problem;
};

/// Checks a solver witness against the position it came from.
inline std::string witness_problem(const Expr& w, const Position& p) {
  if (!separates(w, p.a, p.b)) return "witness " + render_expr(w) + " does not separate";
  if (w.size() > static_cast<std::size_t>(p.k)) return "witness " + render_expr(w) + " exceeds size budget";
  if (p.s && w.stars() > static_cast<std::size_t>(*p.s)) return "witness " + render_expr(w) + " exceeds star budget";
  if (!conforms(w, p.dialect)) return "witness " + render_expr(w) + " leaves the dialect";
  return {};
}

/// Game value from the solver against existence of a separator from the oracle.
inline CrosscheckReport crosscheck(Solver& solver, const Position& p,
                                   OracleMode mode = OracleMode::structural) {
  CrosscheckReport r;
  const auto res = solver.solve(p);
  r.solver_winner = res.winner;
  r.witness = res.witness;
  if (p.k >= 1) {
    EnumSpec spec{p.alphabet, p.dialect, static_cast<std::size_t>(p.k), std::nullopt};
    if (p.s) spec.max_stars = static_cast<std::size_t>(*p.s);
    if (auto sep = min_separating(p.a, p.b, spec, mode)) r.oracle_expr = sep->expr;
  }
  r.agree = (res.winner == Player::S) == r.oracle_expr.has_value();
  if (res.witness) r.witness_problem = witness_problem(*res.witness, p);
  return r;
}

}  // namespace regame
