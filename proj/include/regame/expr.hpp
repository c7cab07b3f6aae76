#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "regame/error.hpp"
#include "regame/words.hpp"

namespace regame {

/// Expression classes, ordered by inclusion: RE ⊂ RESF ⊂ GRE.
enum class Dialect : std::uint8_t { re = 0, resf = 1, gre = 2 };

inline std::string_view to_string(Dialect d) {
  switch (d) {
    case Dialect::re: return "re";
    case Dialect::resf: return "resf";
    case Dialect::gre: return "gre";
  }
  return "?";
}

inline Dialect parse_dialect(std::string_view s) {
  if (s == "re" || s == "RE") return Dialect::re;
  if (s == "resf" || s == "RESF") return Dialect::resf;
  if (s == "gre" || s == "GRE") return Dialect::gre;
  throw parse_error("unknown dialect '" + std::string(s) + "' (expected re, resf or gre)");
}

/// Node kinds in their canonical order; this order drives enumeration and tie-breaks.
enum class Kind : std::uint8_t { empty, epsilon, atom, unite, cat, star, negate };

/// Immutable generalized regular expression. Copies share structure.
class Expr {
 public:
  Expr() : Expr(empty()) {}

  static Expr empty() { return Expr(make(Kind::empty, 0, nullptr, nullptr)); }
  static Expr epsilon() { return Expr(make(Kind::epsilon, 0, nullptr, nullptr)); }
  static Expr atom(char c) { return Expr(make(Kind::atom, c, nullptr, nullptr)); }
  static Expr unite(const Expr& l, const Expr& r) { return Expr(make(Kind::unite, 0, l.node_, r.node_)); }
  static Expr cat(const Expr& l, const Expr& r) { return Expr(make(Kind::cat, 0, l.node_, r.node_)); }
  static Expr star(const Expr& e) { return Expr(make(Kind::star, 0, e.node_, nullptr)); }
  static Expr negate(const Expr& e) { return Expr(make(Kind::negate, 0, e.node_, nullptr)); }
  /// R1 ∩ R2 as the shorthand ¬(¬R1 ∪ ¬R2).
  static Expr intersect(const Expr& l, const Expr& r) { return negate(unite(negate(l), negate(r))); }

  Kind kind() const { return node_->kind; }
  char symbol() const { return node_->symbol; }
  Expr left() const { return Expr(node_->left); }
  Expr right() const { return Expr(node_->right); }
  Expr inner() const { return Expr(node_->left); }
  bool is_leaf() const { return node_->kind <= Kind::atom; }
  bool is_binary() const { return node_->kind == Kind::unite || node_->kind == Kind::cat; }

  std::size_t size() const { return node_->size; }
  std::size_t stars() const { return node_->stars; }
  bool has_negation() const { return node_->has_negation; }
  bool star_under_negation() const { return node_->star_under_negation; }

  const void* identity() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
    const int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Structural order: size, then kind, then symbol, then children left to right.
  static int compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    if (a.kind() == Kind::atom) return a.symbol() == b.symbol() ? 0 : (a.symbol() < b.symbol() ? -1 : 1);
    if (a.is_leaf()) return 0;
    if (const int c = compare(a.left(), b.left()); c != 0) return c;
    if (a.is_binary()) return compare(a.right(), b.right());
    return 0;
  }

 private:
  struct Node {
    Kind kind;
    char symbol;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t size;
    std::size_t stars;
    bool has_negation;
    bool star_under_negation;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Kind k, char sym, std::shared_ptr<const Node> l,
                                          std::shared_ptr<const Node> r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->symbol = sym;
    n->size = 1;
    n->stars = k == Kind::star ? 1 : 0;
    n->has_negation = k == Kind::negate;
    n->star_under_negation = false;
    for (const auto* c : {l.get(), r.get()}) {
      if (!c) continue;
      n->size += c->size;
      n->stars += c->stars;
      n->has_negation = n->has_negation || c->has_negation;
      n->star_under_negation = n->star_under_negation || c->star_under_negation;
    }
    if (k == Kind::negate && l->stars > 0) n->star_under_negation = true;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
  }

  std::shared_ptr<const Node> node_;
};

inline std::size_t size(const Expr& e) { return e.size(); }
inline std::size_t star_count(const Expr& e) { return e.stars(); }

/// Smallest dialect containing e: GRE if a star sits beneath a complement,
/// RESF if a complement occurs otherwise, RE if there is no complement.
inline Dialect dialect_of(const Expr& e) {
  if (e.star_under_negation()) return Dialect::gre;
  if (e.has_negation()) return Dialect::resf;
  return Dialect::re;
}

inline bool conforms(const Expr& e, Dialect d) { return dialect_of(e) <= d; }

// ---------------------------------------------------------------------------
// Text form.
//
//   union   := inter ('|' inter)*
//   inter   := concat ('&' concat)*          (sugar for ¬(¬x ∪ ¬y))
//   concat  := unary+
//   unary   := '!' unary | postfix
//   postfix := primary '*'*
//   primary := '(' union ')' | '\0' | '\e' | '\' char | char
// ---------------------------------------------------------------------------

inline bool is_reserved(char c) {
  switch (c) {
    case '(': case ')': case '|': case '*': case '!': case '&': case '\\': return true;
    default: return false;
  }
}

namespace detail {

class expr_parser {
 public:
  expr_parser(std::string_view text, const Alphabet& sigma) : text_(text), sigma_(sigma) {}

  Expr parse() {
    skip_ws();
    if (at_end()) throw parse_error("empty expression", pos_);
    Expr e = parse_union();
    skip_ws();
    if (!at_end()) throw parse_error(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  char peek() {
    skip_ws();
    return at_end() ? '\0' : text_[pos_];
  }

  Expr parse_union() {
    Expr e = parse_inter();
    while (peek() == '|') {
      ++pos_;
      e = Expr::unite(e, parse_inter());
    }
    return e;
  }

  Expr parse_inter() {
    Expr e = parse_concat();
    while (peek() == '&') {
      ++pos_;
      e = Expr::intersect(e, parse_concat());
    }
    return e;
  }

  bool starts_unary() {
    const char c = peek();
    if (at_end()) return false;
    return c != '|' && c != '&' && c != ')' && c != '*';
  }

  Expr parse_concat() {
    if (!starts_unary()) {
      if (at_end()) throw parse_error("unexpected end of expression", pos_);
      throw parse_error(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    Expr e = parse_unary();
    while (starts_unary()) e = Expr::cat(e, parse_unary());
    return e;
  }

  Expr parse_unary() {
    if (peek() == '!') {
      ++pos_;
      return Expr::negate(parse_unary());
    }
    Expr e = parse_primary();
    while (peek() == '*') {
      ++pos_;
      e = Expr::star(e);
    }
    return e;
  }

  Expr parse_primary() {
    const char c = peek();
    const std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      Expr e = parse_union();
      if (peek() != ')') throw parse_error("missing ')'", pos_);
      ++pos_;
      return e;
    }
    if (c == '\\') {
      if (pos_ + 1 >= text_.size()) throw parse_error("dangling escape", at);
      const char d = text_[pos_ + 1];
      pos_ += 2;
      if (d == '0') return Expr::empty();
      if (d == 'e') return Expr::epsilon();
      return symbol(d, at);
    }
    ++pos_;
    return symbol(c, at);
  }

  Expr symbol(char c, std::size_t at) {
    if (!sigma_.contains(c))
      throw alphabet_error(std::string("unknown symbol '") + c + "' at offset " + std::to_string(at));
    return Expr::atom(c);
  }

  std::string_view text_;
  const Alphabet& sigma_;
  std::size_t pos_ = 0;
};

// Precedence levels for rendering: union < concat < unary.
enum class level { unite = 0, cat = 1, unary = 2 };

inline void render_into(const Expr& e, level ctx, std::string& out) {
  auto wrap = [&](level own, auto&& body) {
    const bool parens = static_cast<int>(own) < static_cast<int>(ctx);
    if (parens) out += '(';
    body();
    if (parens) out += ')';
  };
  switch (e.kind()) {
    case Kind::empty: out += "\\0"; return;
    case Kind::epsilon: out += "\\e"; return;
    case Kind::atom:
      if (is_reserved(e.symbol()) || e.symbol() == ' ') out += '\\';
      out += e.symbol();
      return;
    case Kind::unite:
      wrap(level::unite, [&] {
        render_into(e.left(), level::unite, out);
        out += '|';
        render_into(e.right(), level::cat, out);
      });
      return;
    case Kind::cat:
      wrap(level::cat, [&] {
        render_into(e.left(), level::cat, out);
        render_into(e.right(), level::unary, out);
      });
      return;
    case Kind::star: {
      // The operand of a postfix star must be a primary or another star.
      const Expr in = e.inner();
      const bool bare = in.is_leaf() || in.kind() == Kind::star;
      if (!bare) out += '(';
      render_into(in, level::unite, out);
      if (!bare) out += ')';
      out += '*';
      return;
    }
    case Kind::negate:
      out += '!';
      render_into(e.inner(), level::unary, out);
      return;
  }
}

}  // namespace detail

/// Parses the text form. Throws parse_error on syntax errors and alphabet_error on unknown symbols.
inline Expr parse_expr(std::string_view text, const Alphabet& sigma) {
  return detail::expr_parser(text, sigma).parse();
}

/// Canonical text form; parse_expr(render_expr(e)) == e.
inline std::string render_expr(const Expr& e) {
  std::string out;
  detail::render_into(e, detail::level::unite, out);
  return out;
}

}  // namespace regame
