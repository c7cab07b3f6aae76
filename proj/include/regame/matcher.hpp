#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "regame/expr.hpp"
#include "regame/words.hpp"

namespace regame {

/// Word membership for full GRE by dynamic programming over (subexpression, span).
/// Complement negates the inner span result, so no automaton is ever built.
class Matcher {
 public:
  explicit Matcher(const Expr& e) { root_ = flatten(e); }

  bool operator()(std::string_view w) const {
    const std::size_t n = w.size();
    const std::size_t stride = n + 1;
    std::vector<std::vector<std::uint8_t>> table(nodes_.size(),
                                                 std::vector<std::uint8_t>(stride * stride, 0));
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      const auto& nd = nodes_[id];
      auto& t = table[id];
      // Spans in order of increasing length so star can reuse shorter spans.
      for (std::size_t len = 0; len <= n; ++len) {
        for (std::size_t i = 0; i + len <= n; ++i) {
          const std::size_t j = i + len;
          bool v = false;
          switch (nd.kind) {
            case Kind::empty: v = false; break;
            case Kind::epsilon: v = len == 0; break;
            case Kind::atom: v = len == 1 && w[i] == nd.symbol; break;
            case Kind::unite:
              v = table[nd.left][i * stride + j] || table[nd.right][i * stride + j];
              break;
            case Kind::cat: {
              const auto& l = table[nd.left];
              const auto& r = table[nd.right];
              for (std::size_t m = i; m <= j && !v; ++m) v = l[i * stride + m] && r[m * stride + j];
              break;
            }
            case Kind::star: {
              if (len == 0) {
                v = true;
                break;
              }
              const auto& in = table[nd.left];
              for (std::size_t m = i + 1; m <= j && !v; ++m) v = in[i * stride + m] && t[m * stride + j];
              break;
            }
            case Kind::negate: v = !table[nd.left][i * stride + j]; break;
          }
          t[i * stride + j] = v;
        }
      }
    }
    return table[root_][n];
  }

 private:
  struct FlatNode {
    Kind kind;
    char symbol;
    std::size_t left;
    std::size_t right;
  };

  std::size_t flatten(const Expr& e) {
    if (auto it = ids_.find(e.identity()); it != ids_.end()) return it->second;
    FlatNode nd{e.kind(), e.symbol(), 0, 0};
    if (!e.is_leaf()) nd.left = flatten(e.left());
    if (e.is_binary()) nd.right = flatten(e.right());
    nodes_.push_back(nd);
    const std::size_t id = nodes_.size() - 1;
    ids_.emplace(e.identity(), id);
    return id;
  }

  std::vector<FlatNode> nodes_;
  std::unordered_map<const void*, std::size_t> ids_;
  std::size_t root_ = 0;
};

inline bool matches(const Expr& e, std::string_view w) { return Matcher(e)(w); }

/// True iff A ⊆ L(e) and B ∩ L(e) = ∅.
inline bool separates(const Expr& e, const WordSet& a, const WordSet& b) {
  Matcher m(e);
  for (const auto& w : a)
    if (!m(w)) return false;
  for (const auto& w : b)
    if (m(w)) return false;
  return true;
}

}  // namespace regame
