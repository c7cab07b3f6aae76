#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "regame/words.hpp"

namespace regame {

/// Exponential tower: twr(0) = 1, twr(n+1) = 2^twr(n). Throws std::overflow_error past 64 bits.
inline std::uint64_t twr(unsigned n) {
  std::uint64_t t = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (t >= 64) throw std::overflow_error("twr(" + std::to_string(n) + ") does not fit in 64 bits");
    t = std::uint64_t{1} << t;
  }
  return t;
}

/// Parenthesis alphabet of the set encodings: '(' then ')'.
inline Alphabet paren_alphabet() { return Alphabet("()"); }

namespace detail {

/// V_n as sets of indices into a shared universe of hereditarily finite sets.
struct Hierarchy {
  std::vector<std::vector<std::size_t>> members;  // members of set i, ascending
  std::map<std::vector<std::size_t>, std::size_t> index;

  std::size_t intern(std::vector<std::size_t> m) {
    std::sort(m.begin(), m.end());
    auto [it, fresh] = index.emplace(m, members.size());
    if (fresh) members.push_back(std::move(m));
    return it->second;
  }

  /// Indices of the sets in V_n.
  std::vector<std::size_t> level(unsigned n) {
    std::vector<std::size_t> v;
    for (unsigned i = 0; i < n; ++i) {
      if (v.size() > 20) throw std::overflow_error("cumulative hierarchy level too large");
      std::vector<std::size_t> next;
      for (std::size_t mask = 0; mask < (std::size_t{1} << v.size()); ++mask) {
        std::vector<std::size_t> m;
        for (std::size_t j = 0; j < v.size(); ++j)
          if (mask & (std::size_t{1} << j)) m.push_back(v[j]);
        next.push_back(intern(std::move(m)));
      }
      std::sort(next.begin(), next.end());
      v = std::move(next);
    }
    return v;
  }

  /// Every encoding of set i: one per ordering of its elements and choice of their encodings.
  const std::set<Word>& encodings(std::size_t i) {
    if (auto it = memo.find(i); it != memo.end()) return it->second;
    std::set<Word> out;
    std::vector<std::size_t> order = members[i];
    do {
      std::vector<Word> partial{"("};
      for (std::size_t x : order) {
        std::vector<Word> grown;
        for (const auto& prefix : partial)
          for (const auto& e : encodings(x)) grown.push_back(prefix + e);
        partial = std::move(grown);
      }
      for (auto& p : partial) out.insert(p + ")");
    } while (std::next_permutation(order.begin(), order.end()));
    return memo.emplace(i, std::move(out)).first->second;
  }

  std::map<std::size_t, std::set<Word>> memo;
};

}  // namespace detail

/// All encodings of all sets in V_{n+1}, shortlex ordered.
inline WordSet enc_language(unsigned n) {
  if (n > 3) throw std::invalid_argument("enc_language is only tractable for n <= 3");
  detail::Hierarchy h;
  WordSet out;
  for (std::size_t x : h.level(n + 1)) {
    const auto& encs = h.encodings(x);
    out.insert(out.end(), encs.begin(), encs.end());
  }
  return canonical(std::move(out));
}

/// Encodings of one set given as a parenthesis word; every element ordering, e.g.
/// "(()(()))" gives {"(()(()))", "((())())"}.
inline WordSet encodings_of(const Word& encoded) {
  detail::Hierarchy h;
  // Parse the word into a set, interning children first.
  std::size_t pos = 0;
  auto parse = [&](auto&& self) -> std::size_t {
    if (pos >= encoded.size() || encoded[pos] != '(') throw std::invalid_argument("malformed set encoding");
    ++pos;
    std::vector<std::size_t> kids;
    while (pos < encoded.size() && encoded[pos] == '(') kids.push_back(self(self));
    if (pos >= encoded.size() || encoded[pos] != ')') throw std::invalid_argument("malformed set encoding");
    ++pos;
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    return h.intern(std::move(kids));
  };
  const std::size_t root = parse(parse);
  if (pos != encoded.size()) throw std::invalid_argument("malformed set encoding");
  const auto& encs = h.encodings(root);
  return canonical(WordSet(encs.begin(), encs.end()));
}

/// The n-symbol alphabet a_1..a_n written as the first n lowercase letters.
inline Alphabet chain_alphabet(unsigned n) {
  if (n < 1 || n > 26) throw std::invalid_argument("chain alphabet needs 1 <= n <= 26");
  std::string s;
  for (unsigned i = 0; i < n; ++i) s += static_cast<char>('a' + i);
  return Alphabet(s);
}

/// Some symbol among the first n has only even-length chains in w (absent symbols count).
inline bool even_chain_member(std::string_view w, unsigned n) {
  const Alphabet sigma = chain_alphabet(n);
  sigma.check_word(w);
  std::vector<bool> all_even(n, true);
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if ((j - i) % 2 == 1) all_even[static_cast<unsigned>(w[i] - 'a')] = false;
    i = j;
  }
  return std::find(all_even.begin(), all_even.end(), true) != all_even.end();
}

/// {l_1, ..., l_n} with l_i = a_1^{2k+1} ... a_i^{2k} ... a_n^{2k+1}.
inline WordSet make_lnk(unsigned n, unsigned k) {
  if (k < 1) throw std::invalid_argument("make_lnk needs k >= 1");
  chain_alphabet(n);
  WordSet out;
  for (unsigned i = 0; i < n; ++i) {
    Word w;
    for (unsigned j = 0; j < n; ++j) w.append(j == i ? 2 * k : 2 * k + 1, static_cast<char>('a' + j));
    out.push_back(std::move(w));
  }
  return canonical(std::move(out));
}

/// Each word with one symbol added to each of its even chains.
inline WordSet lengthen_even_chains(const WordSet& words) {
  WordSet out;
  for (const auto& w : words) {
    Word v;
    for (std::size_t i = 0; i < w.size();) {
      std::size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      v.append(j - i, w[i]);
      if ((j - i) % 2 == 0) v += w[i];
      i = j;
    }
    out.push_back(std::move(v));
  }
  return canonical(std::move(out));
}

}  // namespace regame
