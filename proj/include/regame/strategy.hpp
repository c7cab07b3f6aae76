#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regame/expr.hpp"
#include "regame/game.hpp"
#include "regame/matcher.hpp"
#include "regame/solver.hpp"
#include "regame/words.hpp"

namespace regame {

/// D's engine reply after a ∪- or cat-move: a branch D wins, the smaller budget if both,
/// branch 1 otherwise.
inline int engine_reply_for_d(Solver& solver, const Position& first, const Position& second) {
  const bool d1 = solver.solve(first).winner == Player::D;
  const bool d2 = solver.solve(second).winner == Player::D;
  if (d1 && d2) return second.k < first.k ? 2 : 1;
  if (d2) return 2;
  return 1;
}

inline int engine_reply_for_d(Solver& solver, const Position& p, const SMove& m, const Rules& rules = {}) {
  const Outcome out = apply_move(p, m, rules);
  const auto* two = std::get_if<TwoChildren>(&out);
  if (!two) throw std::invalid_argument("move does not give D a choice");
  return engine_reply_for_d(solver, two->first, two->second);
}

/// Does e fit the position's dialect and budgets (separation aside)?
inline std::optional<std::string> check_fits(const Expr& e, const Position& p) {
  if (!conforms(e, p.dialect))
    return "expression is " + std::string(to_string(dialect_of(e))) + ", outside the " +
           std::string(to_string(p.dialect)) + " game";
  if (e.size() > static_cast<std::size_t>(p.k))
    return "expression has size " + std::to_string(e.size()) + " > k = " + std::to_string(p.k);
  if (p.s && e.stars() > static_cast<std::size_t>(*p.s))
    return "expression has " + std::to_string(e.stars()) + " stars > s = " + std::to_string(*p.s);
  return std::nullopt;
}

/// Why e is not a winning strategy at p, or nothing if it separates within budget.
inline std::optional<std::string> check_fixed_expr(const Expr& e, const Position& p) {
  if (auto v = check_fits(e, p)) return v;
  Matcher m(e);
  for (const auto& w : p.a)
    if (!m(w)) return "expression does not match '" + format_word(w) + "' from A";
  for (const auto& w : p.b)
    if (m(w)) return "expression matches '" + format_word(w) + "' from B";
  return std::nullopt;
}

/// The S move induced by e's outermost operator, and the sub-expressions that take over
/// in the child positions (one per child, in child order).
struct PlannedMove {
  SMove move;
  std::vector<Expr> next;
};

namespace detail {

/// Splits w into nonempty pieces each in L(inner), preferring long pieces from the left.
inline std::vector<Word> star_pieces(const Matcher& inner, const Word& w) {
  const std::size_t n = w.size();
  // ok[i]: w[i:] is a catenation of nonempty pieces from L(inner)
  std::vector<char> ok(n + 1, 0);
  ok[n] = 1;
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = n; j > i && !ok[i]; --j) ok[i] = ok[j] && inner(w.substr(i, j - i));
  if (!ok[0]) return {w};
  std::vector<Word> pieces;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = n;
    while (!(ok[j] && inner(w.substr(i, j - i)))) --j;
    pieces.push_back(w.substr(i, j - i));
    i = j;
  }
  return pieces;
}

}  // namespace detail

/// S strategy read off a separating expression. Requires check_fits(e, p).
inline PlannedMove fixed_expr_move(const Expr& e, const Position& p) {
  switch (e.kind()) {
    case Kind::empty: return {EmptyMove{}, {}};
    case Kind::epsilon: return {AtomMove{std::nullopt}, {}};
    case Kind::atom: return {AtomMove{e.symbol()}, {}};
    case Kind::unite: {
      Matcher m1(e.left()), m2(e.right());
      UnionMove u;
      for (const auto& w : p.a) {
        const bool in1 = m1(w);
        const bool in2 = m2(w);
        if (in1 || !in2) u.a1.push_back(w);
        if (in2) u.a2.push_back(w);
      }
      u.k1 = static_cast<int>(e.left().size());
      u.k2 = p.k - u.k1 - 1;
      if (p.s) {
        u.s1 = std::max(static_cast<int>(e.left().stars()), *p.s - u.k2);
        u.s2 = *p.s - u.s1;
      }
      return {u, {e.left(), e.right()}};
    }
    case Kind::cat: {
      Matcher m1(e.left()), m2(e.right());
      CatMove c;
      for (const auto& w : p.a) {
        std::size_t cut = 0;
        for (std::size_t i = 0; i <= w.size(); ++i)
          if (m1(w.substr(0, i)) && m2(w.substr(i))) {
            cut = i;
            break;
          }
        c.cuts.push_back(cut);
      }
      for (const auto& v : p.b) {
        std::vector<int> sides;
        for (std::size_t i = 0; i <= v.size(); ++i) sides.push_back(m1(v.substr(0, i)) ? 2 : 1);
        c.sides.push_back(std::move(sides));
      }
      c.k1 = static_cast<int>(e.left().size());
      c.k2 = p.k - c.k1 - 1;
      if (p.s) {
        c.s1 = std::max(static_cast<int>(e.left().stars()), *p.s - c.k2);
        c.s2 = *p.s - c.s1;
      }
      return {c, {e.left(), e.right()}};
    }
    case Kind::star: {
      Matcher inner(e.inner());
      StarMove st;
      for (const auto& w : p.a)
        st.compositions.push_back(w.empty() ? std::vector<Word>{} : detail::star_pieces(inner, w));
      for (const auto& f : nonempty_factors(p.b))
        if (!inner(f)) st.b_prime.push_back(f);
      // A non-separating e can leave B' too thin; fall back to a set that is always valid.
      for (const auto& v : p.b)
        if (escapes_hitting_set(v, st.b_prime)) {
          st.b_prime = nonempty_factors(p.b);
          break;
        }
      return {st, {e.inner()}};
    }
    case Kind::negate: return {NegMove{}, {e.inner()}};
  }
  return {EmptyMove{}, {}};
}

/// S's engine move from the solver: the memoized winning move, or at a lost position
/// the first move that does not lose on the spot.
inline SMove solver_move_for_s(Solver& solver, const Position& p) {
  if (auto best = solver.best_move(p)) return *best;
  for (const auto& m : solver.enumerate_s_moves(p))
    if (!std::holds_alternative<AtomMove>(m) && !std::holds_alternative<EmptyMove>(m)) return m;
  return AtomMove{std::nullopt};
}

}  // namespace regame
