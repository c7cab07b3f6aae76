#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regame/error.hpp"

namespace regame {

using Word = std::string;
/// Finite word set in canonical form: shortlex-sorted, no duplicates.
using WordSet = std::vector<Word>;

/// Ordered list of distinct single-character symbols.
class Alphabet {
 public:
  Alphabet() : Alphabet("ab") {}

  explicit Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw alphabet_error("alphabet must not be empty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const char c = symbols_[i];
      if (c <= ' ' || c > '~' || c == ',')
        throw alphabet_error(std::string("symbol not allowed in alphabet: '") + c + "'");
      if (symbols_.find(c) != i)
        throw alphabet_error(std::string("duplicate alphabet symbol '") + c + "'");
    }
  }

  const std::string& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  char operator[](std::size_t i) const { return symbols_[i]; }
  bool contains(char c) const { return symbols_.find(c) != std::string::npos; }

  bool contains_word(std::string_view w) const {
    return std::all_of(w.begin(), w.end(), [this](char c) { return contains(c); });
  }

  void check_word(std::string_view w) const {
    for (char c : w)
      if (!contains(c))
        throw alphabet_error("word '" + std::string(w) + "' uses symbol '" + c +
                             "' outside alphabet {" + symbols_ + "}");
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string symbols_;
};

/// Shortlex order: shorter words first, then lexicographic.
struct shortlex_less {
  bool operator()(std::string_view a, std::string_view b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

inline WordSet canonical(WordSet words) {
  std::sort(words.begin(), words.end(), shortlex_less{});
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

inline bool contains(const WordSet& set, std::string_view w) {
  return std::binary_search(set.begin(), set.end(), w, shortlex_less{});
}

inline bool intersects(const WordSet& a, const WordSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  shortlex_less less;
  while (i != a.end() && j != b.end()) {
    if (less(*i, *j)) ++i;
    else if (less(*j, *i)) ++j;
    else return true;
  }
  return false;
}

inline bool is_subset(const WordSet& sub, const WordSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end(), shortlex_less{});
}

inline WordSet set_union(const WordSet& a, const WordSet& b) {
  WordSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), shortlex_less{});
  return out;
}

inline WordSet set_difference(const WordSet& a, const WordSet& b) {
  WordSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                      shortlex_less{});
  return out;
}

/// All words over the alphabet with length at most n, in shortlex order.
inline WordSet words_upto(const Alphabet& sigma, std::size_t n) {
  WordSet out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= n; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : sigma.symbols()) out.push_back(out[i] + c);
    begin = end;
  }
  return out;
}

/// All words of length exactly n.
inline WordSet words_of_length(const Alphabet& sigma, std::size_t n) {
  WordSet all = words_upto(sigma, n);
  WordSet out;
  for (auto& w : all)
    if (w.size() == n) out.push_back(std::move(w));
  return out;
}

/// Every 2-split (u, v) with uv = w, including empty pieces; |w|+1 entries.
inline std::vector<std::pair<Word, Word>> splits2(std::string_view w) {
  std::vector<std::pair<Word, Word>> out;
  out.reserve(w.size() + 1);
  for (std::size_t i = 0; i <= w.size(); ++i)
    out.emplace_back(Word(w.substr(0, i)), Word(w.substr(i)));
  return out;
}

/// Every decomposition of w into nonempty pieces; 2^(|w|-1) entries, none for w = ε.
inline std::vector<std::vector<Word>> compositions(std::string_view w) {
  std::vector<std::vector<Word>> out;
  if (w.empty()) return out;
  const std::size_t cuts = w.size() - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << cuts); ++mask) {
    std::vector<Word> pieces;
    std::size_t start = 0;
    for (std::size_t i = 0; i < cuts; ++i) {
      if (mask & (std::size_t{1} << i)) {
        pieces.emplace_back(w.substr(start, i + 1 - start));
        start = i + 1;
      }
    }
    pieces.emplace_back(w.substr(start));
    out.push_back(std::move(pieces));
  }
  return out;
}

/// Distinct factors (substrings) of the given words, ε included.
inline WordSet factors(const WordSet& words) {
  std::set<Word, shortlex_less> out{""};
  for (const auto& w : words)
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j <= w.size(); ++j) out.insert(w.substr(i, j - i));
  return WordSet(out.begin(), out.end());
}

inline WordSet nonempty_factors(const WordSet& words) {
  WordSet f = factors(words);
  f.erase(f.begin());
  return f;
}

/// Command-line word list: comma separated, `EPS` for the empty word.
inline WordSet parse_word_list(std::string_view text, const Alphabet& sigma) {
  WordSet out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view token = text.substr(start, comma == std::string_view::npos ? text.npos
                                                                                 : comma - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token.empty()) throw parse_error("empty word in list; write EPS for the empty word", start);
    Word w = token == "EPS" ? Word{} : Word(token);
    sigma.check_word(w);
    out.push_back(std::move(w));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return canonical(std::move(out));
}

inline std::string format_word(std::string_view w) { return w.empty() ? "EPS" : std::string(w); }

inline std::string format_word_list(const WordSet& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ',';
    out += format_word(words[i]);
  }
  return out;
}

}  // namespace regame
