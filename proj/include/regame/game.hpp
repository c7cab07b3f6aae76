#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "regame/error.hpp"
#include "regame/expr.hpp"
#include "regame/words.hpp"

namespace regame {

enum class Player : std::uint8_t { S, D };

inline std::string_view to_string(Player p) { return p == Player::S ? "S" : "D"; }

/// Rule switches that are not fixed by the game definition.
struct Rules {
  /// RESF ¬-move leads to (k-1, 0, B, A). When false the literal (k, 0, B, A) is used,
  /// which lets S negate for free; kept only for experimentation.
  bool resf_negation_costs_size = true;
};

/// Game position (k, s, A, B) of the GRES/RESFS/RES games.
///
/// Word sets are canonical and the star budget is normalized to at most k-1: an
/// expression of size k has at most k-1 stars, and the budget-split rules cannot
/// distribute s = k over binary moves.
struct Position {
  Dialect dialect = Dialect::re;
  int k = 0;
  std::optional<int> s;  ///< absent in the RE game
  Alphabet alphabet;
  WordSet a;
  WordSet b;

  int stars_or_zero() const { return s.value_or(0); }

  friend bool operator==(const Position&, const Position&) = default;
};

inline Position make_position(Dialect dialect, int k, std::optional<int> s, Alphabet alphabet,
                              WordSet a, WordSet b) {
  if (k < 0) throw invalid_position("k must be a natural number");
  if (dialect == Dialect::re) {
    if (s) throw invalid_position("the RE game has no star budget");
  } else {
    if (!s) s = 0;
    if (*s < 0) throw invalid_position("s must be a natural number");
    if (*s > k) throw invalid_position("star budget must satisfy k >= s");
    s = std::min(*s, std::max(k - 1, 0));
  }
  for (const auto& w : a) alphabet.check_word(w);
  for (const auto& w : b) alphabet.check_word(w);
  return Position{dialect, k, s, std::move(alphabet), canonical(std::move(a)), canonical(std::move(b))};
}

// ---------------------------------------------------------------------------
// S moves in explicit form.
// ---------------------------------------------------------------------------

/// a-move; no symbol means ε.
struct AtomMove {
  std::optional<char> symbol;
  friend bool operator==(const AtomMove&, const AtomMove&) = default;
};

struct EmptyMove {
  friend bool operator==(const EmptyMove&, const EmptyMove&) = default;
};

struct UnionMove {
  WordSet a1, a2;
  int k1 = 0, k2 = 0, s1 = 0, s2 = 0;
  friend bool operator==(const UnionMove&, const UnionMove&) = default;
};

/// cat-move. cuts[i] splits the i-th word of A at that index; sides[j][c] ∈ {1,2}
/// is f_v for the j-th word v of B at the 2-split (v[:c], v[c:]).
struct CatMove {
  std::vector<std::size_t> cuts;
  std::vector<std::vector<int>> sides;
  int k1 = 0, k2 = 0, s1 = 0, s2 = 0;
  friend bool operator==(const CatMove&, const CatMove&) = default;
};

/// *-move. compositions[i] splits the i-th word of A into nonempty pieces (empty for ε).
/// b_prime is the resulting B' directly; it must hit every composition of every B-word.
struct StarMove {
  std::vector<std::vector<Word>> compositions;
  WordSet b_prime;
  friend bool operator==(const StarMove&, const StarMove&) = default;
};

struct NegMove {
  friend bool operator==(const NegMove&, const NegMove&) = default;
};

using SMove = std::variant<AtomMove, EmptyMove, UnionMove, CatMove, StarMove, NegMove>;

inline std::string_view move_name(const SMove& m) {
  static constexpr std::string_view names[] = {"atom", "empty", "union", "cat", "star", "neg"};
  return names[m.index()];
}

/// Result of applying an S move.
struct Terminal {
  Player winner;
};
struct OneChild {
  Position child;
};
struct TwoChildren {
  Position first, second;
};
using Outcome = std::variant<Terminal, OneChild, TwoChildren>;

// ---------------------------------------------------------------------------
// Validation.
// ---------------------------------------------------------------------------

/// True iff some composition of v into nonempty pieces avoids `hit` entirely.
inline bool escapes_hitting_set(std::string_view v, const WordSet& hit) {
  std::vector<char> reach(v.size() + 1, 0);
  reach[0] = 1;
  for (std::size_t j = 1; j <= v.size(); ++j)
    for (std::size_t i = 0; i < j && !reach[j]; ++i)
      reach[j] = reach[i] && !contains(hit, v.substr(i, j - i));
  return reach[v.size()];
}

namespace detail {

inline std::optional<std::string> check_budgets(const Position& p, int k1, int k2, int s1, int s2) {
  if (k1 < 0 || k2 < 0) return "budgets k1, k2 must be natural numbers";
  if (k1 + k2 + 1 != p.k)
    return "budget split must satisfy k1 + k2 + 1 = k (" + std::to_string(k1) + " + " +
           std::to_string(k2) + " + 1 != " + std::to_string(p.k) + ")";
  if (!p.s) {
    if (s1 != 0 || s2 != 0) return "the RE game has no star budget to split";
    return std::nullopt;
  }
  if (s1 < 0 || s2 < 0) return "star budgets must be natural numbers";
  if (s1 + s2 != *p.s)
    return "star split must satisfy s1 + s2 = s (" + std::to_string(s1) + " + " +
           std::to_string(s2) + " != " + std::to_string(*p.s) + ")";
  if (k1 < s1 || k2 < s2) return "each child needs k_i >= s_i";
  return std::nullopt;
}

}  // namespace detail

/// Checks every side condition of an S move; returns a violation description or nothing.
inline std::optional<std::string> validate_move(const Position& p, const SMove& move,
                                                const Rules& = {}) {
  if (p.k < 1) return "game over: k = 0 and D wins";
  return std::visit(
      [&](const auto& m) -> std::optional<std::string> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, AtomMove>) {
          if (m.symbol && !p.alphabet.contains(*m.symbol))
            return std::string("symbol '") + *m.symbol + "' is not in the alphabet";
          return std::nullopt;
        } else if constexpr (std::is_same_v<M, EmptyMove>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<M, UnionMove>) {
          if (m.a1 != canonical(m.a1) || m.a2 != canonical(m.a2))
            return "A1 and A2 must be duplicate-free word sets";
          if (!is_subset(m.a1, p.a) || !is_subset(m.a2, p.a)) return "A1 and A2 must be subsets of A";
          if (set_union(m.a1, m.a2) != p.a) return "A1 and A2 must cover A";
          return detail::check_budgets(p, m.k1, m.k2, m.s1, m.s2);
        } else if constexpr (std::is_same_v<M, CatMove>) {
          if (m.cuts.size() != p.a.size()) return "cat-move needs one 2-split per word of A";
          for (std::size_t i = 0; i < p.a.size(); ++i)
            if (m.cuts[i] > p.a[i].size())
              return "cut " + std::to_string(m.cuts[i]) + " is outside word '" + p.a[i] + "'";
          if (m.sides.size() != p.b.size()) return "cat-move needs a side choice for every word of B";
          for (std::size_t j = 0; j < p.b.size(); ++j) {
            if (m.sides[j].size() != p.b[j].size() + 1)
              return "word '" + p.b[j] + "' of B has " + std::to_string(p.b[j].size() + 1) +
                     " 2-splits, each needs a side";
            for (int side : m.sides[j])
              if (side != 1 && side != 2) return "split sides must be 1 or 2";
          }
          return detail::check_budgets(p, m.k1, m.k2, m.s1, m.s2);
        } else if constexpr (std::is_same_v<M, StarMove>) {
          if (contains(p.b, "")) return "D wins on ε: the empty word is in B, so no star can separate";
          if (p.s && *p.s < 1) return "no stars left: star budget s = 0";
          if (m.compositions.size() != p.a.size()) return "*-move needs one split per word of A";
          for (std::size_t i = 0; i < p.a.size(); ++i) {
            const auto& pieces = m.compositions[i];
            if (p.a[i].empty()) {
              if (!pieces.empty()) return "the empty word in A takes no split";
              continue;
            }
            std::string joined;
            for (const auto& piece : pieces) {
              if (piece.empty()) return "split pieces of '" + p.a[i] + "' must be nonempty";
              joined += piece;
            }
            if (joined != p.a[i]) return "pieces do not spell '" + p.a[i] + "'";
          }
          if (m.b_prime != canonical(m.b_prime)) return "B' must be a duplicate-free word set";
          for (const auto& w : m.b_prime)
            if (!p.alphabet.contains_word(w)) return "B' word '" + w + "' is outside the alphabet";
          for (const auto& v : p.b)
            if (escapes_hitting_set(v, m.b_prime))
              return "B' misses a split of '" + v + "': it can be written with pieces all outside B'";
          return std::nullopt;
        } else {
          if (p.dialect == Dialect::re) return "no ¬-move in RE";
          return std::nullopt;
        }
      },
      move);
}

// ---------------------------------------------------------------------------
// Application.
// ---------------------------------------------------------------------------

namespace detail {

inline Position child(const Position& p, int k, std::optional<int> s, WordSet a, WordSet b) {
  Position c;
  c.dialect = p.dialect;
  c.k = k;
  if (p.s) c.s = std::min(std::max(*s, 0), std::max(k - 1, 0));
  c.alphabet = p.alphabet;
  c.a = canonical(std::move(a));
  c.b = canonical(std::move(b));
  return c;
}

}  // namespace detail

/// Applies a valid S move. Throws std::invalid_argument on an invalid one.
inline Outcome apply_move(const Position& p, const SMove& move, const Rules& rules = {}) {
  if (auto v = validate_move(p, move, rules)) throw std::invalid_argument(*v);
  return std::visit(
      [&](const auto& m) -> Outcome {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, AtomMove>) {
          const Word a = m.symbol ? Word(1, *m.symbol) : Word();
          const bool ok = std::all_of(p.a.begin(), p.a.end(), [&](const Word& w) { return w == a; }) &&
                          !contains(p.b, a);
          return Terminal{ok ? Player::S : Player::D};
        } else if constexpr (std::is_same_v<M, EmptyMove>) {
          return Terminal{p.a.empty() ? Player::S : Player::D};
        } else if constexpr (std::is_same_v<M, UnionMove>) {
          return TwoChildren{detail::child(p, m.k1, m.s1, m.a1, p.b), detail::child(p, m.k2, m.s2, m.a2, p.b)};
        } else if constexpr (std::is_same_v<M, CatMove>) {
          WordSet a1, a2, b1, b2;
          for (std::size_t i = 0; i < p.a.size(); ++i) {
            a1.push_back(p.a[i].substr(0, m.cuts[i]));
            a2.push_back(p.a[i].substr(m.cuts[i]));
          }
          for (std::size_t j = 0; j < p.b.size(); ++j) {
            const Word& v = p.b[j];
            for (std::size_t c = 0; c <= v.size(); ++c) {
              if (m.sides[j][c] == 1) b1.push_back(v.substr(0, c));
              else b2.push_back(v.substr(c));
            }
          }
          return TwoChildren{detail::child(p, m.k1, m.s1, std::move(a1), std::move(b1)),
                             detail::child(p, m.k2, m.s2, std::move(a2), std::move(b2))};
        } else if constexpr (std::is_same_v<M, StarMove>) {
          WordSet pieces;
          for (const auto& comp : m.compositions) pieces.insert(pieces.end(), comp.begin(), comp.end());
          return OneChild{detail::child(p, p.k - 1, p.stars_or_zero() - 1, std::move(pieces), m.b_prime)};
        } else {
          if (p.dialect == Dialect::resf) {
            const int k = rules.resf_negation_costs_size ? p.k - 1 : p.k;
            return OneChild{detail::child(p, k, 0, p.b, p.a)};
          }
          return OneChild{detail::child(p, p.k - 1, p.s, p.b, p.a)};
        }
      },
      move);
}

// ---------------------------------------------------------------------------
// Sound D-win certificates.
// ---------------------------------------------------------------------------

/// A word shared by A and B: D wins from here.
inline bool d_winning_by_lemma5(const Position& p) { return intersects(p.a, p.b); }

/// Maximal same-symbol runs of a word.
inline std::vector<std::pair<char, std::size_t>> chains(std::string_view w) {
  std::vector<std::pair<char, std::size_t>> out;
  for (char c : w) {
    if (!out.empty() && out.back().first == c) ++out.back().second;
    else out.emplace_back(c, 1);
  }
  return out;
}

/// True iff u and v agree except for the lengths of one or more chains, each of which
/// is longer than `bound` in both words.
inline bool differ_only_in_long_chains(std::string_view u, std::string_view v, std::size_t bound) {
  const auto cu = chains(u);
  const auto cv = chains(v);
  if (cu.size() != cv.size()) return false;
  bool differs = false;
  for (std::size_t i = 0; i < cu.size(); ++i) {
    if (cu[i].first != cv[i].first) return false;
    if (cu[i].second == cv[i].second) continue;
    if (cu[i].second <= bound || cv[i].second <= bound) return false;
    differs = true;
  }
  return differs;
}

/// Chain condition for star-free play: only meaningful (and only sound) when s = 0.
inline bool d_winning_by_chain_lemma(const Position& p) {
  if (!p.s || *p.s != 0) return false;
  const auto bound = static_cast<std::size_t>(std::max(p.k, 0));
  for (const auto& u : p.a)
    for (const auto& v : p.b)
      if (differ_only_in_long_chains(u, v, bound)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// A single play of the game.
// ---------------------------------------------------------------------------

struct PendingChoice {
  SMove move;
  Position first, second;
  friend bool operator==(const PendingChoice&, const PendingChoice&) = default;
};

/// Ongoing (awaiting S at `position`, or awaiting D when `pending` is set) or won.
struct GameState {
  Position position;
  std::optional<PendingChoice> pending;
  std::optional<Player> winner;

  bool over() const { return winner.has_value(); }
  Player awaiting() const { return pending ? Player::D : Player::S; }
  friend bool operator==(const GameState&, const GameState&) = default;
};

inline GameState start_game(Position p) {
  GameState g{std::move(p), std::nullopt, std::nullopt};
  if (g.position.k == 0) g.winner = Player::D;
  return g;
}

namespace detail {

inline GameState enter(Position p) { return start_game(std::move(p)); }

}  // namespace detail

/// S plays `move`. Returns the violation instead when it is not legal.
inline std::variant<GameState, std::string> play_s(const GameState& g, const SMove& move,
                                                   const Rules& rules = {}) {
  if (g.over()) return std::string("game over");
  if (g.pending) return std::string("it is D's turn to choose a branch");
  if (auto v = validate_move(g.position, move, rules)) return *v;
  Outcome out = apply_move(g.position, move, rules);
  if (auto* t = std::get_if<Terminal>(&out)) {
    GameState next = g;
    next.winner = t->winner;
    return next;
  }
  if (auto* one = std::get_if<OneChild>(&out)) return detail::enter(std::move(one->child));
  auto& two = std::get<TwoChildren>(out);
  GameState next = g;
  next.pending = PendingChoice{move, std::move(two.first), std::move(two.second)};
  return next;
}

/// D picks branch 1 or 2 after a ∪- or cat-move.
inline std::variant<GameState, std::string> play_d(const GameState& g, int branch) {
  if (g.over()) return std::string("game over");
  if (!g.pending) return std::string("it is S's turn to move");
  if (branch != 1 && branch != 2) return std::string("branch must be 1 or 2");
  return detail::enter(branch == 1 ? g.pending->first : g.pending->second);
}

}  // namespace regame
