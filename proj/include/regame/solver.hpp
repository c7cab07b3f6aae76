#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "regame/error.hpp"
#include "regame/expr.hpp"
#include "regame/game.hpp"
#include "regame/words.hpp"

namespace regame {

/// How S's moves are generated.
///
/// `reduced` keeps one representative per dominance class: disjoint ∪ covers, B1 drawn
/// from the distinct prefixes of B-words with the smallest compatible B2, ⊆-minimal B'
/// drawn from nonempty factors of B-words, and child budgets k_i >= 1. Every dropped
/// move leads to positions with larger word sets or smaller budgets than a kept one,
/// and separation is monotone in both, so the game value is unchanged.
/// `raw` enumerates overlapping covers, every f_v, every valid B' and zero budgets.
enum class MoveGeneration : std::uint8_t { reduced, raw };

struct SolverOptions {
  bool lemma5_pruning = true;
  bool chain_pruning = false;
  MoveGeneration generation = MoveGeneration::reduced;
  std::size_t max_positions = 4'000'000;
  std::size_t max_moves = 2'000'000'000;
  /// Largest free candidate set for B1 (cat) or B' (star) subset enumeration.
  std::size_t max_subset_universe = 18;
  Rules rules;
};

struct SolveStats {
  std::size_t positions_visited = 0;
  std::size_t memo_hits = 0;
  std::size_t max_depth = 0;
  std::size_t moves_examined = 0;
};

struct SolveResult {
  Player winner = Player::D;
  std::optional<Expr> witness;  ///< present iff winner is S
  SolveStats stats;
};

class Solver {
 public:
  explicit Solver(SolverOptions options = {}) : opt_(std::move(options)) {}

  const SolverOptions& options() const { return opt_; }
  const SolveStats& stats() const { return stats_; }
  std::size_t table_size() const { return memo_.size(); }

  void clear() {
    memo_.clear();
    stats_ = {};
  }

  /// Exact game value of p with a witness expression for S wins.
  SolveResult solve(const Position& p) {
    const Key key = to_key(p);
    const Entry& e = solve_key(key, 0);
    SolveResult r;
    r.winner = e.winner;
    if (e.winner == Player::S) r.witness = e.witness;
    r.stats = stats_;
    return r;
  }

  /// The memoized winning S move, if p is an S win.
  std::optional<SMove> best_move(const Position& p) {
    const Key key = to_key(p);
    const Entry& e = solve_key(key, 0);
    if (e.winner != Player::S) return std::nullopt;
    return materialize(p, key, e.move);
  }

  /// All S moves at p under the configured generation mode, in search order.
  std::vector<SMove> enumerate_s_moves(const Position& p) {
    std::vector<SMove> out;
    if (p.k < 1) return out;
    const Key key = to_key(p);
    for_each_choice(key, [&](const Choice& c) {
      if (c.kind == MoveKind::unite || c.kind == MoveKind::cat) {
        for_each_budget(key, [&](int k1, int s1, int k2, int s2) {
          out.push_back(materialize(p, key, record(c, k1, s1, k2, s2)));
          return false;
        });
      } else {
        out.push_back(materialize(p, key, record(c, 0, 0, 0, 0)));
      }
      return false;
    });
    return out;
  }

  /// Smallest k <= max_k at which S wins, by iterative deepening; the witness has that size bound.
  std::optional<Expr> synthesize(Dialect dialect, const Alphabet& sigma, const WordSet& a,
                                 const WordSet& b, int max_k, std::optional<int> max_s) {
    for (int k = 1; k <= max_k; ++k) {
      std::optional<int> s;
      if (dialect != Dialect::re) s = std::min(max_s.value_or(k), k);
      auto r = solve(make_position(dialect, k, s, sigma, a, b));
      if (r.winner == Player::S) return r.witness;
    }
    return std::nullopt;
  }

 private:
  using Id = std::uint32_t;
  using IdSet = std::vector<Id>;

  enum class MoveKind : std::uint8_t { atom, empty, unite, cat, star, negate };

  struct Key {
    std::uint8_t dialect = 0;
    std::int8_t k = 0;
    std::int8_t s = -1;  // -1: no star budget (RE)
    std::uint8_t neg_ok = 1;
    std::uint16_t alphabet = 0;
    IdSet a, b;
    friend bool operator==(const Key&, const Key&) = default;
  };

  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = (std::size_t{k.dialect} << 24) ^ (std::size_t(std::uint8_t(k.k)) << 16) ^
                      (std::size_t(std::uint8_t(k.s)) << 8) ^ (std::size_t{k.neg_ok} << 4) ^
                      (std::size_t{k.alphabet} << 32);
      auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
      for (Id x : k.a) mix(x);
      mix(0xa5a5a5a5);
      for (Id x : k.b) mix(x);
      return h;
    }
  };

  /// Internal form of a chosen move, aligned with the owning key's id order.
  struct Recorded {
    MoveKind kind = MoveKind::atom;
    std::optional<char> symbol;
    IdSet a1, a2;
    std::vector<std::size_t> cuts;             // per key.a index
    std::vector<std::vector<std::int8_t>> sides;  // per key.b index
    std::vector<std::vector<Id>> comps;        // per key.a index
    IdSet b_prime;
    int k1 = 0, k2 = 0, s1 = 0, s2 = 0;
  };

  struct Entry {
    Player winner = Player::D;
    Expr witness;
    Recorded move;
  };

  struct Choice {
    MoveKind kind;
    std::optional<char> symbol;
    const IdSet* a1 = nullptr;
    const IdSet* b1 = nullptr;
    const IdSet* a2 = nullptr;
    const IdSet* b2 = nullptr;
    const std::vector<std::size_t>* cuts = nullptr;
    const std::vector<std::vector<std::int8_t>>* sides = nullptr;
    const std::vector<std::vector<Id>>* comps = nullptr;
  };

  struct WordInfo {
    Word text;
    bool splits_ready = false;
    std::vector<Id> prefix, suffix;  // index c -> id of text[:c], text[c:]
    bool comps_ready = false;
    std::vector<std::vector<Id>> comps;
  };

  // --- interning -----------------------------------------------------------

  Id intern(const Word& w) {
    if (auto it = index_.find(w); it != index_.end()) return it->second;
    const Id id = static_cast<Id>(words_.size());
    words_.push_back(WordInfo{w});
    index_.emplace(w, id);
    return id;
  }

  const WordInfo& splits_of(Id id) {
    if (!words_[id].splits_ready) {
      const Word text = words_[id].text;
      std::vector<Id> pre, suf;
      for (std::size_t c = 0; c <= text.size(); ++c) {
        pre.push_back(intern(text.substr(0, c)));
        suf.push_back(intern(text.substr(c)));
      }
      words_[id].prefix = std::move(pre);
      words_[id].suffix = std::move(suf);
      words_[id].splits_ready = true;
    }
    return words_[id];
  }

  const std::vector<std::vector<Id>>& comps_of(Id id) {
    if (!words_[id].comps_ready) {
      std::vector<std::vector<Id>> out;
      for (const auto& pieces : compositions(words_[id].text)) {
        std::vector<Id> ids;
        for (const auto& piece : pieces) ids.push_back(intern(piece));
        out.push_back(std::move(ids));
      }
      words_[id].comps = std::move(out);
      words_[id].comps_ready = true;
    }
    return words_[id].comps;
  }

  std::uint16_t intern_alphabet(const Alphabet& sigma) {
    for (std::size_t i = 0; i < alphabets_.size(); ++i)
      if (alphabets_[i] == sigma) return static_cast<std::uint16_t>(i);
    alphabets_.push_back(sigma);
    return static_cast<std::uint16_t>(alphabets_.size() - 1);
  }

  static void normalize(IdSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  static bool has(const IdSet& s, Id x) { return std::binary_search(s.begin(), s.end(), x); }

  static bool meets(const IdSet& x, const IdSet& y) {
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
      if (*i < *j) ++i;
      else if (*j < *i) ++j;
      else return true;
    }
    return false;
  }

  Key to_key(const Position& p) {
    if (p.k > 100) throw invalid_position("size budget too large for the solver");
    Key key;
    key.dialect = static_cast<std::uint8_t>(p.dialect);
    key.k = static_cast<std::int8_t>(p.k);
    key.s = p.s ? static_cast<std::int8_t>(*p.s) : std::int8_t{-1};
    key.alphabet = intern_alphabet(p.alphabet);
    for (const auto& w : p.a) key.a.push_back(intern(w));
    for (const auto& w : p.b) key.b.push_back(intern(w));
    normalize(key.a);
    normalize(key.b);
    return key;
  }

  Key child_key(const Key& parent, int k, int s, IdSet a, IdSet b, bool neg_ok = true) const {
    Key c;
    c.dialect = parent.dialect;
    c.k = static_cast<std::int8_t>(k);
    c.s = parent.s < 0 ? std::int8_t{-1}
                       : static_cast<std::int8_t>(std::min(std::max(s, 0), std::max(k - 1, 0)));
    c.neg_ok = neg_ok ? 1 : 0;
    c.alphabet = parent.alphabet;
    c.a = std::move(a);
    c.b = std::move(b);
    return c;
  }

  // --- chain lemma on ids ----------------------------------------------------

  bool chain_condition(const Key& key) const {
    if (key.s != 0) return false;
    for (Id u : key.a)
      for (Id v : key.b)
        if (differ_only_in_long_chains(words_[u].text, words_[v].text, static_cast<std::size_t>(key.k)))
          return true;
    return false;
  }

  // --- move generation -------------------------------------------------------

  template <class F>
  void for_each_budget(const Key& key, F&& fn) const {
    const int k = key.k;
    const bool raw = opt_.generation == MoveGeneration::raw;
    const int lo = raw ? 0 : 1;
    for (int k1 = lo; k1 <= k - 1 - lo; ++k1) {
      const int k2 = k - 1 - k1;
      if (key.s < 0) {
        if (fn(k1, 0, k2, 0)) return;
        continue;
      }
      for (int s1 = 0; s1 <= key.s; ++s1) {
        const int s2 = key.s - s1;
        if (s1 > k1 || s2 > k2) continue;
        if (fn(k1, s1, k2, s2)) return;
      }
    }
  }

  void count_move() {
    if (++stats_.moves_examined > opt_.max_moves)
      throw resource_limit_exceeded("move budget exhausted (" + std::to_string(opt_.max_moves) + " moves)");
  }

  void check_universe(std::size_t n, const char* what) const {
    if (n > opt_.max_subset_universe)
      throw resource_limit_exceeded(std::string(what) + " candidate set has " + std::to_string(n) +
                                    " words, above the configured limit of " +
                                    std::to_string(opt_.max_subset_universe));
  }

  /// Calls fn for every structural choice in search order; stops when fn returns true.
  template <class F>
  void for_each_choice(const Key& key, F&& fn) {
    const bool raw = opt_.generation == MoveGeneration::raw;
    const bool prune = opt_.lemma5_pruning;
    const int k = key.k;
    const Alphabet& sigma = alphabets_[key.alphabet];

    // Terminal moves.
    {
      Choice c{MoveKind::atom};
      if (fn(c)) return;
      for (char ch : sigma.symbols()) {
        c.symbol = ch;
        if (fn(c)) return;
      }
      Choice e{MoveKind::empty};
      if (fn(e)) return;
    }

    const int min_binary = raw ? 1 : 3;

    // ∪-moves.
    if (k >= min_binary) {
      const std::size_t n = key.a.size();
      if (raw) {
        // every cover: each word goes to side 1, side 2 or both
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
          IdSet a1, a2;
          std::size_t c = code;
          for (std::size_t i = 0; i < n; ++i, c /= 3) {
            if (c % 3 != 1) a1.push_back(key.a[i]);
            if (c % 3 != 0) a2.push_back(key.a[i]);
          }
          Choice ch{MoveKind::unite};
          ch.a1 = &a1;
          ch.b1 = &key.b;
          ch.a2 = &a2;
          ch.b2 = &key.b;
          if (fn(ch)) return;
        }
      } else if (n >= 2) {
        check_universe(n - 1, "union");
        // disjoint partitions with key.a[0] on side 1; budgets cover both orientations
        for (std::size_t mask = 1; mask < (std::size_t{1} << (n - 1)); ++mask) {
          IdSet a1{key.a[0]}, a2;
          for (std::size_t i = 1; i < n; ++i) {
            if (mask & (std::size_t{1} << (i - 1))) a2.push_back(key.a[i]);
            else a1.push_back(key.a[i]);
          }
          Choice ch{MoveKind::unite};
          ch.a1 = &a1;
          ch.b1 = &key.b;
          ch.a2 = &a2;
          ch.b2 = &key.b;
          if (fn(ch)) return;
        }
      }
    }

    // cat-moves.
    if (k >= min_binary && cat_moves(key, raw, prune, fn)) return;

    // *-moves.
    const bool star_budget = key.s < 0 || key.s >= 1;
    if (k >= (raw ? 1 : 2) && star_budget && !has_eps(key.b) && star_moves(key, raw, prune, fn)) return;

    // ¬-move.
    if (key.dialect != static_cast<std::uint8_t>(Dialect::re) && key.neg_ok) {
      if (neg_child_k(key) >= (raw ? 0 : 1)) {
        Choice ch{MoveKind::negate};
        if (fn(ch)) return;
      }
    }
  }

  bool has_eps(const IdSet& s) const {
    return std::any_of(s.begin(), s.end(), [this](Id x) { return words_[x].text.empty(); });
  }

  int neg_child_k(const Key& key) const {
    if (key.dialect == static_cast<std::uint8_t>(Dialect::resf) && !opt_.rules.resf_negation_costs_size)
      return key.k;
    return key.k - 1;
  }

  template <class F>
  bool cat_moves(const Key& key, bool raw, bool prune, F& fn) {
    const std::size_t na = key.a.size();
    const std::size_t nb = key.b.size();
    std::vector<std::size_t> cuts(na, 0);
    for (Id w : key.a) splits_of(w);
    for (Id v : key.b) splits_of(v);

    // distinct prefixes of B-words
    IdSet prefixes;
    for (Id v : key.b)
      for (Id p : words_[v].prefix) prefixes.push_back(p);
    normalize(prefixes);

    while (true) {
      IdSet a1, a2;
      for (std::size_t i = 0; i < na; ++i) {
        a1.push_back(words_[key.a[i]].prefix[cuts[i]]);
        a2.push_back(words_[key.a[i]].suffix[cuts[i]]);
      }
      normalize(a1);
      normalize(a2);

      if (raw) {
        if (cat_raw_sides(key, a1, a2, cuts, fn)) return true;
      } else {
        // Smallest B2 for a given B1: every split whose prefix is outside B1 sends its suffix to B2.
        IdSet forced, free;
        bool dead = false;
        if (prune) {
          for (Id v : key.b) {
            const auto& info = words_[v];
            for (std::size_t c = 0; c < info.prefix.size(); ++c)
              if (has(a2, info.suffix[c])) forced.push_back(info.prefix[c]);
          }
          normalize(forced);
          dead = meets(forced, a1);
          if (!dead)
            for (Id p : prefixes)
              if (!has(forced, p) && !has(a1, p)) free.push_back(p);
        } else {
          free = prefixes;
        }
        if (!dead) {
          check_universe(free.size(), "cat B1");
          std::vector<std::vector<std::int8_t>> sides(nb);
          for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
            IdSet b1 = forced;
            for (std::size_t i = 0; i < free.size(); ++i)
              if (mask & (std::size_t{1} << i)) b1.push_back(free[i]);
            normalize(b1);
            IdSet b2;
            for (std::size_t j = 0; j < nb; ++j) {
              const auto& info = words_[key.b[j]];
              sides[j].assign(info.prefix.size(), 1);
              for (std::size_t c = 0; c < info.prefix.size(); ++c) {
                if (!has(b1, info.prefix[c])) {
                  sides[j][c] = 2;
                  b2.push_back(info.suffix[c]);
                }
              }
            }
            normalize(b2);
            Choice ch{MoveKind::cat};
            ch.a1 = &a1;
            ch.b1 = &b1;
            ch.a2 = &a2;
            ch.b2 = &b2;
            ch.cuts = &cuts;
            ch.sides = &sides;
            if (fn(ch)) return true;
          }
        }
      }

      // next A-split assignment
      std::size_t i = 0;
      for (; i < na; ++i) {
        if (cuts[i] < words_[key.a[i]].text.size()) {
          ++cuts[i];
          break;
        }
        cuts[i] = 0;
      }
      if (i == na) return false;
    }
  }

  template <class F>
  bool cat_raw_sides(const Key& key, const IdSet& a1, const IdSet& a2,
                     const std::vector<std::size_t>& cuts, F& fn) {
    const std::size_t nb = key.b.size();
    std::size_t bits = 0;
    for (Id v : key.b) bits += words_[v].prefix.size();
    check_universe(bits, "cat f_v");
    std::vector<std::vector<std::int8_t>> sides(nb);
    for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
      IdSet b1, b2;
      std::size_t bit = 0;
      for (std::size_t j = 0; j < nb; ++j) {
        const auto& info = words_[key.b[j]];
        sides[j].assign(info.prefix.size(), 1);
        for (std::size_t c = 0; c < info.prefix.size(); ++c, ++bit) {
          if (mask & (std::size_t{1} << bit)) {
            sides[j][c] = 2;
            b2.push_back(info.suffix[c]);
          } else {
            b1.push_back(info.prefix[c]);
          }
        }
      }
      normalize(b1);
      normalize(b2);
      Choice ch{MoveKind::cat};
      ch.a1 = &a1;
      ch.b1 = &b1;
      ch.a2 = &a2;
      ch.b2 = &b2;
      ch.cuts = &cuts;
      ch.sides = &sides;
      if (fn(ch)) return true;
    }
    return false;
  }

  bool escapes(Id v, const IdSet& hit) {
    for (const auto& comp : comps_of(v)) {
      bool avoided = true;
      for (Id piece : comp)
        if (has(hit, piece)) {
          avoided = false;
          break;
        }
      if (avoided) return true;
    }
    return false;
  }

  bool hits_all(const Key& key, const IdSet& hit) {
    for (Id v : key.b)
      if (escapes(v, hit)) return false;
    return true;
  }

  template <class F>
  bool star_moves(const Key& key, bool raw, bool prune, F& fn) {
    const std::size_t na = key.a.size();
    std::vector<std::size_t> choice(na, 0);
    std::vector<std::vector<Id>> comps(na);
    std::vector<std::size_t> counts(na, 1);
    for (std::size_t i = 0; i < na; ++i) {
      const std::size_t c = comps_of(key.a[i]).size();
      counts[i] = std::max<std::size_t>(c, 1);
    }

    IdSet factors;
    for (Id v : key.b) {
      for (const auto& comp : comps_of(v))
        for (Id piece : comp) factors.push_back(piece);
    }
    normalize(factors);

    while (true) {
      IdSet a_prime;
      for (std::size_t i = 0; i < na; ++i) {
        const auto& cs = comps_of(key.a[i]);
        comps[i] = cs.empty() ? std::vector<Id>{} : cs[choice[i]];
        a_prime.insert(a_prime.end(), comps[i].begin(), comps[i].end());
      }
      normalize(a_prime);

      IdSet pool;
      for (Id f : factors)
        if (!(prune && has(a_prime, f))) pool.push_back(f);

      if (hits_all(key, pool)) {
        // B-words themselves are forced: each has the one-piece split (v).
        IdSet mandatory, optional;
        for (Id f : pool) (has(key.b, f) ? mandatory : optional).push_back(f);
        check_universe(optional.size(), "star B'");
        const std::size_t m = optional.size();
        std::vector<std::size_t> masks;
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) masks.push_back(mask);
        // smaller sets first so the search meets cheap children early
        std::stable_sort(masks.begin(), masks.end(), [](std::size_t x, std::size_t y) {
          return __builtin_popcountll(x) < __builtin_popcountll(y);
        });
        for (std::size_t mask : masks) {
          IdSet bp = mandatory;
          for (std::size_t i = 0; i < m; ++i)
            if (mask & (std::size_t{1} << i)) bp.push_back(optional[i]);
          normalize(bp);
          if (!hits_all(key, bp)) continue;
          if (!raw) {
            bool minimal = true;
            for (std::size_t i = 0; i < m && minimal; ++i) {
              if (!(mask & (std::size_t{1} << i))) continue;
              IdSet smaller;
              for (Id x : bp)
                if (x != optional[i]) smaller.push_back(x);
              if (hits_all(key, smaller)) minimal = false;
            }
            if (!minimal) continue;
          }
          Choice ch{MoveKind::star};
          ch.a1 = &a_prime;
          ch.b1 = &bp;
          ch.comps = &comps;
          if (fn(ch)) return true;
        }
      }

      std::size_t i = 0;
      for (; i < na; ++i) {
        if (choice[i] + 1 < counts[i]) {
          ++choice[i];
          break;
        }
        choice[i] = 0;
      }
      if (i == na) return false;
    }
  }

  Recorded record(const Choice& c, int k1, int s1, int k2, int s2) const {
    Recorded r;
    r.kind = c.kind;
    r.symbol = c.symbol;
    if (c.a1) r.a1 = *c.a1;
    if (c.a2) r.a2 = *c.a2;
    if (c.cuts) r.cuts = *c.cuts;
    if (c.sides) r.sides = *c.sides;
    if (c.comps) r.comps = *c.comps;
    if (c.kind == MoveKind::star && c.b1) r.b_prime = *c.b1;
    r.k1 = k1;
    r.k2 = k2;
    r.s1 = s1;
    r.s2 = s2;
    return r;
  }

  // --- search ----------------------------------------------------------------

  const Entry& solve_key(const Key& key, std::size_t depth) {
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    stats_.max_depth = std::max(stats_.max_depth, depth);
    Entry entry = search(key, depth);
    if (memo_.size() >= opt_.max_positions)
      throw resource_limit_exceeded("position budget exhausted (" + std::to_string(opt_.max_positions) +
                                    " positions)");
    ++stats_.positions_visited;
    return memo_.emplace(key, std::move(entry)).first->second;
  }

  Player value(const Key& key, std::size_t depth) { return solve_key(key, depth).winner; }

  Entry search(const Key& key, std::size_t depth) {
    Entry lose;
    lose.winner = Player::D;
    if (key.k <= 0) return lose;
    if (opt_.lemma5_pruning && meets(key.a, key.b)) return lose;
    if (opt_.chain_pruning && chain_condition(key)) return lose;

    Entry win;
    win.winner = Player::S;
    bool found = false;

    for_each_choice(key, [&](const Choice& c) {
      switch (c.kind) {
        case MoveKind::atom: {
          count_move();
          const Id target = c.symbol ? intern(Word(1, *c.symbol)) : intern(Word());
          const bool ok = std::all_of(key.a.begin(), key.a.end(), [&](Id x) { return x == target; }) &&
                          !has(key.b, target);
          if (ok) {
            win.witness = c.symbol ? Expr::atom(*c.symbol) : Expr::epsilon();
            win.move = record(c, 0, 0, 0, 0);
            found = true;
          }
          return found;
        }
        case MoveKind::empty: {
          count_move();
          if (key.a.empty()) {
            win.witness = Expr::empty();
            win.move = record(c, 0, 0, 0, 0);
            found = true;
          }
          return found;
        }
        case MoveKind::unite:
        case MoveKind::cat: {
          for_each_budget(key, [&](int k1, int s1, int k2, int s2) {
            count_move();
            const Key c1 = child_key(key, k1, s1, *c.a1, *c.b1);
            if (value(c1, depth + 1) != Player::S) return false;
            const Key c2 = child_key(key, k2, s2, *c.a2, *c.b2);
            if (value(c2, depth + 1) != Player::S) return false;
            const Expr& w1 = memo_.at(c1).witness;
            const Expr& w2 = memo_.at(c2).witness;
            win.witness = c.kind == MoveKind::unite ? Expr::unite(w1, w2) : Expr::cat(w1, w2);
            win.move = record(c, k1, s1, k2, s2);
            found = true;
            return true;
          });
          return found;
        }
        case MoveKind::star: {
          count_move();
          const Key ck = child_key(key, key.k - 1, key.s - 1, *c.a1, *c.b1);
          if (value(ck, depth + 1) == Player::S) {
            win.witness = Expr::star(memo_.at(ck).witness);
            win.move = record(c, 0, 0, 0, 0);
            found = true;
          }
          return found;
        }
        case MoveKind::negate: {
          count_move();
          const bool resf = key.dialect == static_cast<std::uint8_t>(Dialect::resf);
          const int ck_k = neg_child_k(key);
          const int ck_s = resf ? 0 : key.s;
          // Under the free-negation rule a second ¬ only returns to this position.
          const bool neg_ok = !(resf && ck_k == key.k);
          const Key ck = child_key(key, ck_k, ck_s, key.b, key.a, neg_ok);
          if (value(ck, depth + 1) == Player::S) {
            win.witness = Expr::negate(memo_.at(ck).witness);
            win.move = record(c, 0, 0, 0, 0);
            found = true;
          }
          return found;
        }
      }
      return false;
    });
    return found ? win : lose;
  }

  // --- public move form -------------------------------------------------------

  SMove materialize(const Position& p, const Key& key, const Recorded& r) {
    auto words_of = [this](const IdSet& ids) {
      WordSet out;
      for (Id x : ids) out.push_back(words_[x].text);
      return canonical(std::move(out));
    };
    auto a_index = [&](const Word& w) {
      const Id id = index_.at(w);
      return static_cast<std::size_t>(std::lower_bound(key.a.begin(), key.a.end(), id) - key.a.begin());
    };
    auto b_index = [&](const Word& w) {
      const Id id = index_.at(w);
      return static_cast<std::size_t>(std::lower_bound(key.b.begin(), key.b.end(), id) - key.b.begin());
    };
    const bool tracks_stars = p.s.has_value();
    switch (r.kind) {
      case MoveKind::atom: return AtomMove{r.symbol};
      case MoveKind::empty: return EmptyMove{};
      case MoveKind::unite:
        return UnionMove{words_of(r.a1), words_of(r.a2), r.k1, r.k2, tracks_stars ? r.s1 : 0,
                         tracks_stars ? r.s2 : 0};
      case MoveKind::cat: {
        CatMove m;
        for (const auto& w : p.a) m.cuts.push_back(r.cuts[a_index(w)]);
        for (const auto& v : p.b) {
          const auto& s = r.sides[b_index(v)];
          m.sides.emplace_back(s.begin(), s.end());
        }
        m.k1 = r.k1;
        m.k2 = r.k2;
        m.s1 = tracks_stars ? r.s1 : 0;
        m.s2 = tracks_stars ? r.s2 : 0;
        return m;
      }
      case MoveKind::star: {
        StarMove m;
        for (const auto& w : p.a) {
          std::vector<Word> pieces;
          for (Id x : r.comps[a_index(w)]) pieces.push_back(words_[x].text);
          m.compositions.push_back(std::move(pieces));
        }
        m.b_prime = words_of(r.b_prime);
        return m;
      }
      case MoveKind::negate: return NegMove{};
    }
    return EmptyMove{};
  }

  SolverOptions opt_;
  SolveStats stats_;
  std::deque<WordInfo> words_;
  std::unordered_map<Word, Id> index_;
  std::vector<Alphabet> alphabets_;
  std::unordered_map<Key, Entry, KeyHash> memo_;
};

}  // namespace regame
