#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "regame/expr.hpp"
#include "regame/game.hpp"
#include "regame/matcher.hpp"
#include "regame/words.hpp"

namespace regame {

struct EnumSpec {
  Alphabet alphabet;
  Dialect dialect = Dialect::re;
  std::size_t max_size = 1;
  std::optional<std::size_t> max_stars;
};

/// Every dialect-conforming expression within the spec, bucketed by size. Each bucket is
/// in structural order, so concatenating the buckets gives the global order.
class Enumerator {
 public:
  explicit Enumerator(EnumSpec spec) : spec_(std::move(spec)) {
    if (spec_.max_size < 1) throw std::invalid_argument("max_size must be at least 1");
  }

  const EnumSpec& spec() const { return spec_; }

  const std::vector<Expr>& bucket(std::size_t n) {
    if (n > spec_.max_size) throw std::out_of_range("size beyond the enumeration bound");
    while (buckets_.size() <= n) grow();
    return buckets_[n];
  }

  /// Calls fn on every expression in nondecreasing size; stops early when fn returns true.
  template <class F>
  void for_each(F&& fn) {
    for (std::size_t n = 1; n <= spec_.max_size; ++n)
      for (const auto& e : bucket(n))
        if (fn(e)) return;
  }

 private:
  bool fits(std::size_t stars) const { return !spec_.max_stars || stars <= *spec_.max_stars; }

  void grow() {
    const std::size_t n = buckets_.size();
    std::vector<Expr> out;
    if (n == 1) {
      out.push_back(Expr::empty());
      out.push_back(Expr::epsilon());
      for (char c : spec_.alphabet.symbols()) out.push_back(Expr::atom(c));
    } else if (n >= 2) {
      for (int op = 0; op < 2; ++op) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
          for (const auto& l : buckets_[i])
            for (const auto& r : buckets_[n - 1 - i])
              if (fits(l.stars() + r.stars()))
                out.push_back(op == 0 ? Expr::unite(l, r) : Expr::cat(l, r));
        }
      }
      for (const auto& e : buckets_[n - 1])
        if (fits(e.stars() + 1)) out.push_back(Expr::star(e));
      if (spec_.dialect != Dialect::re)
        for (const auto& e : buckets_[n - 1])
          if (spec_.dialect == Dialect::gre || e.stars() == 0) out.push_back(Expr::negate(e));
    }
    buckets_.push_back(std::move(out));
  }

  EnumSpec spec_;
  std::vector<std::vector<Expr>> buckets_;
};

inline std::vector<Expr> enumerate_exprs(const EnumSpec& spec) {
  Enumerator en(spec);
  std::vector<Expr> out;
  en.for_each([&](const Expr& e) {
    out.push_back(e);
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Languages restricted to a factor-closed finite universe.
// ---------------------------------------------------------------------------

/// Membership bitset over a factor-closed word universe. Restricting languages to such a
/// universe commutes with ∪, catenation, star and complement, so equal signatures can
/// replace each other inside any larger expression.
class SignatureSpace {
 public:
  using Sig = std::vector<std::uint64_t>;

  SignatureSpace(const Alphabet& sigma, const WordSet& words) : sigma_(sigma) {
    universe_ = factors(words);
    for (std::size_t i = 0; i < universe_.size(); ++i) index_.emplace(universe_[i], i);
    blocks_ = (universe_.size() + 63) / 64;
    splits_.resize(universe_.size());
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      const Word& w = universe_[i];
      for (std::size_t c = 0; c <= w.size(); ++c)
        splits_[i].push_back({index_.at(w.substr(0, c)), index_.at(w.substr(c))});
    }
    full_ = Sig(blocks_, 0);
    for (std::size_t i = 0; i < universe_.size(); ++i) set(full_, i);
  }

  const WordSet& universe() const { return universe_; }
  std::size_t index_of(const Word& w) const { return index_.at(w); }

  Sig none() const { return Sig(blocks_, 0); }
  Sig of(const WordSet& words) const {
    Sig s = none();
    for (const auto& w : words) set(s, index_.at(w));
    return s;
  }

  Sig leaf(const Expr& e) const {
    Sig s = none();
    if (e.kind() == Kind::epsilon) set(s, 0);
    if (e.kind() == Kind::atom)
      if (auto it = index_.find(Word(1, e.symbol())); it != index_.end()) set(s, it->second);
    return s;
  }

  Sig unite(const Sig& l, const Sig& r) const {
    Sig s(blocks_);
    for (std::size_t i = 0; i < blocks_; ++i) s[i] = l[i] | r[i];
    return s;
  }

  Sig cat(const Sig& l, const Sig& r) const {
    Sig s = none();
    for (std::size_t w = 0; w < universe_.size(); ++w)
      for (const auto& [p, q] : splits_[w])
        if (test(l, p) && test(r, q)) {
          set(s, w);
          break;
        }
    return s;
  }

  Sig star(const Sig& in) const {
    Sig s = none();
    set(s, 0);  // universe is shortlex sorted, so suffixes come before the word
    for (std::size_t w = 1; w < universe_.size(); ++w)
      for (std::size_t c = 1; c < splits_[w].size(); ++c)
        if (test(in, splits_[w][c].first) && test(s, splits_[w][c].second)) {
          set(s, w);
          break;
        }
    return s;
  }

  Sig negate(const Sig& in) const {
    Sig s(blocks_);
    for (std::size_t i = 0; i < blocks_; ++i) s[i] = ~in[i] & full_[i];
    return s;
  }

  Sig eval(const Expr& e) const {
    switch (e.kind()) {
      case Kind::empty:
      case Kind::epsilon:
      case Kind::atom: return leaf(e);
      case Kind::unite: return unite(eval(e.left()), eval(e.right()));
      case Kind::cat: return cat(eval(e.left()), eval(e.right()));
      case Kind::star: return star(eval(e.inner()));
      case Kind::negate: return negate(eval(e.inner()));
    }
    return none();
  }

  static bool covers(const Sig& s, const Sig& a) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (a[i] & ~s[i]) return false;
    return true;
  }
  static bool avoids(const Sig& s, const Sig& b) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] & b[i]) return false;
    return true;
  }

  static bool test(const Sig& s, std::size_t i) { return (s[i >> 6] >> (i & 63)) & 1U; }
  static void set(Sig& s, std::size_t i) { s[i >> 6] |= std::uint64_t{1} << (i & 63); }

  struct Hash {
    std::size_t operator()(const Sig& s) const {
      std::size_t h = 0;
      for (auto x : s) h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

 private:
  Alphabet sigma_;
  WordSet universe_;
  std::unordered_map<Word, std::size_t> index_;
  std::size_t blocks_ = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> splits_;
  Sig full_;
};

// ---------------------------------------------------------------------------
// Minimal separators.
// ---------------------------------------------------------------------------

enum class OracleMode : std::uint8_t {
  /// Every AST is tried; separation is checked with the matcher.
  structural,
  /// One representative per (restricted language, star count) class, kept only if no
  /// earlier class with the same language has at most as many stars. Same answer as
  /// structural, far fewer candidates.
  observational,
};

struct Separator {
  Expr expr;
  std::size_t size = 0;
  std::size_t stars = 0;
};

namespace detail {

/// Least (size, stars, structural order) separator among candidates of one size bucket.
struct BucketBest {
  std::optional<Expr> best;
  void offer(const Expr& e) {
    if (!best || e.stars() < best->stars()) best = e;
  }
};

inline std::optional<Separator> min_separating_structural(const WordSet& a, const WordSet& b,
                                                           const EnumSpec& spec) {
  Enumerator en(spec);
  for (std::size_t n = 1; n <= spec.max_size; ++n) {
    BucketBest bb;
    for (const auto& e : en.bucket(n))
      if (separates(e, a, b)) bb.offer(e);
    if (bb.best) return Separator{*bb.best, bb.best->size(), bb.best->stars()};
  }
  return std::nullopt;
}

class ObservationalSearch {
 public:
  ObservationalSearch(const WordSet& a, const WordSet& b, const EnumSpec& spec)
      : spec_(spec), space_(spec.alphabet, set_union(a, b)), a_(space_.of(a)), b_(space_.of(b)) {}

  std::optional<Separator> run() {
    for (std::size_t n = 1; n <= spec_.max_size; ++n) {
      const bool last = n == spec_.max_size;
      BucketBest bb;
      build(n, last, bb);
      if (bb.best) return Separator{*bb.best, bb.best->size(), bb.best->stars()};
    }
    return std::nullopt;
  }

  std::size_t classes() const {
    std::size_t total = 0;
    for (const auto& bucket : buckets_) total += bucket.size();
    return total;
  }

 private:
  struct Cls {
    Expr expr;
    SignatureSpace::Sig sig;
    std::size_t stars;
  };

  using Sig = SignatureSpace::Sig;

  bool fits(std::size_t stars) const { return !spec_.max_stars || stars <= *spec_.max_stars; }

  bool separating(const Sig& s) const { return SignatureSpace::covers(s, a_) && SignatureSpace::avoids(s, b_); }

  // Returns false if the candidate is dominated by an earlier class.
  bool admit(std::vector<Cls>& out, const Expr& e, Sig sig, std::size_t stars, bool last, BucketBest& bb) {
    if (separating(sig)) bb.offer(e);
    if (last) return true;
    auto it = min_stars_.find(sig);
    if (it != min_stars_.end() && it->second <= stars) return false;
    min_stars_[sig] = stars;
    out.push_back(Cls{e, std::move(sig), stars});
    return true;
  }

  void build(std::size_t n, bool last, BucketBest& bb) {
    std::vector<Cls> out;
    if (n == 1) {
      std::vector<Expr> leaves{Expr::empty(), Expr::epsilon()};
      for (char c : spec_.alphabet.symbols()) leaves.push_back(Expr::atom(c));
      for (const auto& e : leaves) admit(out, e, space_.leaf(e), 0, last, bb);
    } else {
      for (std::size_t i = 1; i + 1 < n; ++i)
        for (const auto& l : buckets_[i])
          for (const auto& r : buckets_[n - 1 - i]) {
            if (!fits(l.stars + r.stars)) continue;
            // r ∪ l precedes l ∪ r whenever r < l and has the same language
            if (Expr::compare(l.expr, r.expr) >= 0) continue;
            admit(out, Expr::unite(l.expr, r.expr), space_.unite(l.sig, r.sig), l.stars + r.stars, last, bb);
          }
      for (std::size_t i = 1; i + 1 < n; ++i)
        for (const auto& l : buckets_[i])
          for (const auto& r : buckets_[n - 1 - i]) {
            if (!fits(l.stars + r.stars)) continue;
            admit(out, Expr::cat(l.expr, r.expr), space_.cat(l.sig, r.sig), l.stars + r.stars, last, bb);
          }
      for (const auto& c : buckets_[n - 1])
        if (fits(c.stars + 1)) admit(out, Expr::star(c.expr), space_.star(c.sig), c.stars + 1, last, bb);
      if (spec_.dialect != Dialect::re)
        for (const auto& c : buckets_[n - 1])
          if (spec_.dialect == Dialect::gre || c.stars == 0)
            admit(out, Expr::negate(c.expr), space_.negate(c.sig), c.stars, last, bb);
    }
    if (buckets_.size() <= n) buckets_.resize(n + 1);
    buckets_[n] = std::move(out);
  }

  EnumSpec spec_;
  SignatureSpace space_;
  Sig a_, b_;
  std::vector<std::vector<Cls>> buckets_{1};
  std::unordered_map<Sig, std::size_t, SignatureSpace::Hash> min_stars_;
};

}  // namespace detail

/// Least separator of A from B within the spec: minimal size, then fewest stars, then
/// structurally first. Absent when A and B share a word or nothing fits the bounds.
inline std::optional<Separator> min_separating(const WordSet& a, const WordSet& b, const EnumSpec& spec,
                                               OracleMode mode = OracleMode::structural) {
  for (const auto& w : a) spec.alphabet.check_word(w);
  for (const auto& w : b) spec.alphabet.check_word(w);
  const WordSet ca = canonical(a), cb = canonical(b);
  if (intersects(ca, cb)) return std::nullopt;
  if (mode == OracleMode::structural) return detail::min_separating_structural(ca, cb, spec);
  return detail::ObservationalSearch(ca, cb, spec).run();
}

// ---------------------------------------------------------------------------
// Grid oracle: all expressions up to a size bound, with memberships over a fixed universe.
// ---------------------------------------------------------------------------

/// Precomputed membership of every enumerated expression on a small universe, answering
/// "is there a separator of size <= k and stars <= s" for any A, B inside that universe.
class GridOracle {
 public:
  GridOracle(EnumSpec spec, WordSet universe) : universe_(canonical(std::move(universe))) {
    if (universe_.size() > 64) throw std::invalid_argument("grid universe is limited to 64 words");
    Enumerator en(spec);
    en.for_each([&](const Expr& e) {
      Matcher m(e);
      std::uint64_t mask = 0;
      for (std::size_t i = 0; i < universe_.size(); ++i)
        if (m(universe_[i])) mask |= std::uint64_t{1} << i;
      entries_.push_back({e, mask});
      return false;
    });
  }

  std::size_t size() const { return entries_.size(); }

  std::uint64_t mask_of(const WordSet& words) const {
    std::uint64_t m = 0;
    for (const auto& w : words) {
      auto it = std::lower_bound(universe_.begin(), universe_.end(), w, shortlex_less{});
      if (it == universe_.end() || *it != w) throw std::invalid_argument("word outside the grid universe");
      m |= std::uint64_t{1} << (it - universe_.begin());
    }
    return m;
  }

  /// First expression in enumeration order with size <= k, stars <= s that separates.
  std::optional<Expr> find(const WordSet& a, const WordSet& b, std::size_t k,
                           std::optional<std::size_t> s = std::nullopt) const {
    const std::uint64_t am = mask_of(a), bm = mask_of(b);
    for (const auto& [e, mask] : entries_) {
      if (e.size() > k) break;
      if (s && e.stars() > *s) continue;
      if ((mask & am) == am && (mask & bm) == 0) return e;
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    Expr expr;
    std::uint64_t mask;
  };
  WordSet universe_;
  std::vector<Entry> entries_;
};

}  // namespace regame
