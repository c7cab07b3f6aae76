#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "regame/words.hpp"

namespace regame::fo {

enum class Op : std::uint8_t { p, less, eq, top, negate, conj, disj, implies, exists, forall, macro };

struct Node;
using Formula = std::shared_ptr<const Node>;

/// FO(<, P) formula over word positions. Macro nodes name a derived formula (L, S, set_i,
/// ∈_i, =_i, ...) and are transparent: size and truth are those of the body.
struct Node {
  Op op;
  std::string x, y;                 // variables of atoms, bound variable of quantifiers
  std::vector<Formula> kids;
  std::string name;                 // macro name, e.g. "set" or "L"
  int index = -1;                   // macro subscript, -1 if none
  std::vector<std::string> args;    // macro arguments
};

inline Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline Formula P(std::string x) { return make({Op::p, std::move(x)}); }
inline Formula Less(std::string x, std::string y) { return make({Op::less, std::move(x), std::move(y)}); }
inline Formula Eq(std::string x, std::string y) { return make({Op::eq, std::move(x), std::move(y)}); }
inline Formula Top() { return make({Op::top}); }
inline Formula Not(Formula f) { return make({Op::negate, "", "", {std::move(f)}}); }
inline Formula And(Formula a, Formula b) { return make({Op::conj, "", "", {std::move(a), std::move(b)}}); }
inline Formula Or(Formula a, Formula b) { return make({Op::disj, "", "", {std::move(a), std::move(b)}}); }
inline Formula Implies(Formula a, Formula b) { return make({Op::implies, "", "", {std::move(a), std::move(b)}}); }
inline Formula Exists(std::string v, Formula f) { return make({Op::exists, std::move(v), "", {std::move(f)}}); }
inline Formula ForAll(std::string v, Formula f) { return make({Op::forall, std::move(v), "", {std::move(f)}}); }
inline Formula Macro(std::string name, int index, std::vector<std::string> args, Formula body) {
  Node n{Op::macro, "", "", {std::move(body)}};
  n.name = std::move(name);
  n.index = index;
  n.args = std::move(args);
  return make(std::move(n));
}

inline Formula And(std::initializer_list<Formula> fs) {
  auto it = fs.begin();
  Formula out = *it++;
  for (; it != fs.end(); ++it) out = And(out, *it);
  return out;
}

/// x ≤ y written as x < y ∨ x = y.
inline Formula Leq(const std::string& x, const std::string& y) { return Or(Less(x, y), Eq(x, y)); }
/// x ≠ y written as ¬(x = y).
inline Formula Neq(const std::string& x, const std::string& y) { return Not(Eq(x, y)); }
/// x < y < z written as x < y ∧ y < z.
inline Formula Between(const std::string& x, const std::string& y, const std::string& z) {
  return And(Less(x, y), Less(y, z));
}

/// Number of nodes with every macro expanded; ≤ and ≠ count as their expansions, ⊤ as 1.
inline std::size_t fo_size(const Formula& f) {
  std::unordered_map<const Node*, std::size_t> memo;
  auto go = [&](auto&& self, const Node* n) -> std::size_t {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::size_t s = n->op == Op::macro ? 0 : 1;
    for (const auto& k : n->kids) s += self(self, k.get());
    memo.emplace(n, s);
    return s;
  };
  return go(go, f.get());
}

inline std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  switch (f->op) {
    case Op::p: out.insert(f->x); break;
    case Op::less:
    case Op::eq: out.insert(f->x); out.insert(f->y); break;
    case Op::exists:
    case Op::forall:
      out = free_variables(f->kids[0]);
      out.erase(f->x);
      break;
    default:
      for (const auto& k : f->kids) {
        auto s = free_variables(k);
        out.insert(s.begin(), s.end());
      }
  }
  return out;
}

inline bool is_closed(const Formula& f) { return free_variables(f).empty(); }

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string subscript(int i) {
  static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  if (i < 0) return "";
  std::string out;
  for (char c : std::to_string(i)) out += digits[c - '0'];
  return out;
}

/// x1 renders as x₁; generated names such as u_12 stay as they are.
inline std::string var(const std::string& v) {
  if (v.size() >= 2 && v.find('_') == std::string::npos &&
      std::all_of(v.begin() + 1, v.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return v.substr(0, 1) + subscript(std::stoi(v.substr(1)));
  return v;
}

inline std::string macro_head(const Node& n) {
  std::string out = n.name + subscript(n.index);
  if (n.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    if (i) out += ',';
    out += var(n.args[i]);
  }
  return out + ')';
}

inline void render(const Formula& f, bool expand_macros, bool top_level, std::string& out) {
  auto bin = [&](const char* sym) {
    out += '(';
    render(f->kids[0], expand_macros, false, out);
    out += sym;
    render(f->kids[1], expand_macros, false, out);
    out += ')';
  };
  switch (f->op) {
    case Op::p: out += "P(" + var(f->x) + ")"; return;
    case Op::less: out += var(f->x) + "<" + var(f->y); return;
    case Op::eq: out += var(f->x) + "=" + var(f->y); return;
    case Op::top: out += "⊤"; return;
    case Op::negate:
      out += "¬";
      render(f->kids[0], expand_macros, false, out);
      return;
    case Op::conj: bin(" ∧ "); return;
    case Op::disj: bin(" ∨ "); return;
    case Op::implies: bin(" → "); return;
    case Op::exists:
    case Op::forall:
      out += f->op == Op::exists ? "∃" : "∀";
      out += var(f->x);
      render(f->kids[0], expand_macros, false, out);
      return;
    case Op::macro:
      if (expand_macros || top_level) render(f->kids[0], expand_macros, false, out);
      else out += macro_head(*f);
      return;
  }
}

}  // namespace detail

/// Text form. With expand_macros false, derived formulas appear by name.
inline std::string render(const Formula& f, bool expand_macros = false) {
  std::string out;
  detail::render(f, expand_macros, false, out);
  return out;
}

/// "head := body" with nested macros folded, for a macro node.
inline std::string render_definition(const Formula& f) {
  if (f->op != Op::macro) throw std::invalid_argument("not a macro");
  std::string out = detail::macro_head(*f) + " := ";
  detail::render(f, false, true, out);
  return out;
}

// ---------------------------------------------------------------------------
// The set-encoding formulas.
// ---------------------------------------------------------------------------

/// Builds L, R, S, set_i, ∈_i, =_i and φ_n with fresh bound variables at every instance.
class PhiBuilder {
 public:
  /// Variables of a pair X = (x1, x2).
  struct Pair {
    std::string first, second;
  };

  Formula L(const std::string& x) { return Macro("L", -1, {x}, P(x)); }
  Formula R(const std::string& x) { return Macro("R", -1, {x}, Not(P(x))); }
  Formula S(const std::string& x, const std::string& y) {
    const std::string z = fresh("z");
    return Macro("S", -1, {x, y}, And(Less(x, y), Not(Exists(z, Between(x, z, y)))));
  }

  Formula set(int i, const Pair& X) {
    const auto& [x1, x2] = X;
    if (i == 0) return Macro("set", 0, {x1, x2}, And({L(x1), R(x2), S(x1, x2)}));
    const std::string u = fresh("u"), v = fresh("v");
    const Pair A = fresh_pair("a"), B = fresh_pair("b");
    Formula covered = ForAll(u, Implies(Between(x1, u, x2),
                                        Exists(v, And(Between(x1, v, x2),
                                                      Or(set(i - 1, {u, v}), set(i - 1, {v, u}))))));
    Formula distinct = ForAll(A.first, ForAll(A.second, ForAll(B.first, ForAll(B.second,
        Implies(And({in(i - 1, A, X), in(i - 1, B, X), Neq(A.first, B.first)}), Not(eq(i - 1, A, B)))))));
    return Macro("set", i, {x1, x2}, And({Less(x1, x2), L(x1), R(x2), covered, distinct}));
  }

  Formula in(int i, const Pair& X, const Pair& Y) {
    const Pair U = fresh_pair("w");
    Formula order = And({Less(Y.first, X.first), Less(X.first, X.second), Less(X.second, Y.second)});
    Formula inner = Exists(U.first, Exists(U.second, And({Between(Y.first, U.first, X.first),
                                                          Between(X.second, U.second, Y.second),
                                                          set(i, U)})));
    return Macro("∈", i, {X.first, X.second, Y.first, Y.second}, And({order, set(i, X), Not(inner)}));
  }

  Formula eq(int i, const Pair& X, const Pair& Y) {
    if (i == 0) return Macro("=", 0, {X.first, X.second, Y.first, Y.second}, Top());
    const Pair A = fresh_pair("a"), B = fresh_pair("b");
    auto all_pair = [](const Pair& p, Formula f) { return ForAll(p.first, ForAll(p.second, std::move(f))); };
    auto some_pair = [](const Pair& p, Formula f) { return Exists(p.first, Exists(p.second, std::move(f))); };
    Formula left = all_pair(A, Implies(in(i - 1, A, X), some_pair(B, And(in(i - 1, B, Y), eq(i - 1, A, B)))));
    const Pair A2 = fresh_pair("a"), B2 = fresh_pair("b");
    Formula right =
        all_pair(B2, Implies(in(i - 1, B2, Y), some_pair(A2, And(in(i - 1, A2, X), eq(i - 1, A2, B2)))));
    return Macro("=", i, {X.first, X.second, Y.first, Y.second}, And(left, right));
  }

  /// φ_n: the whole word (first to last position) encodes a set, as set_n describes.
  Formula phi(int n) {
    const std::string z = fresh("z");
    Formula guard = ForAll(z, And(Leq("x1", z), Leq(z, "x2")));
    return Macro("φ", n, {}, Exists("x1", Exists("x2", And(guard, set(n, {"x1", "x2"})))));
  }

 private:
  std::string fresh(const std::string& base) { return base + "_" + std::to_string(++counter_); }
  Pair fresh_pair(const std::string& base) {
    const std::string id = std::to_string(++counter_);
    return {base + "1_" + id, base + "2_" + id};
  }

  int counter_ = 0;
};

inline Formula build_phi(int n) {
  if (n < 0 || n > 3) throw std::invalid_argument("build_phi supports 0 <= n <= 3");
  return PhiBuilder().phi(n);
}

/// Definitions of the macros used by φ_n, each shown once with generic arguments.
inline std::vector<std::string> macro_definitions(int n) {
  if (n < 0 || n > 3) throw std::invalid_argument("macro_definitions supports 0 <= n <= 3");
  PhiBuilder b;
  const PhiBuilder::Pair X{"x1", "x2"}, Y{"y1", "y2"};
  std::vector<std::string> out{render_definition(b.L("x")), render_definition(b.R("x")),
                               render_definition(b.S("x", "y"))};
  for (int i = 0; i <= n; ++i) {
    out.push_back(render_definition(b.set(i, X)));
    if (i < n) {
      out.push_back(render_definition(b.in(i, X, Y)));
      out.push_back(render_definition(b.eq(i, X, Y)));
    }
  }
  out.push_back(render_definition(b.phi(n)));
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation on word models.
// ---------------------------------------------------------------------------

/// Word model: positions 0..length-1, P holds where the word has `marked`.
struct WordModel {
  std::size_t length = 0;
  std::vector<bool> p;

  static WordModel of(std::string_view w, char marked = '(') {
    WordModel m;
    m.length = w.size();
    for (char c : w) m.p.push_back(c == marked);
    return m;
  }
};

/// Compiles a closed formula once and evaluates it on many word models. Subformulas with
/// at most four free variables are memoized per model.
class Evaluator {
 public:
  explicit Evaluator(const Formula& f) {
    std::map<std::string, int> slots;
    root_ = compile(f, slots);
    if (!nodes_[root_].free.empty()) throw std::invalid_argument("formula has free variables");
  }

  bool operator()(const WordModel& m) {
    model_ = &m;
    env_.assign(slot_count_, 0);
    for (auto& n : nodes_) n.memo.clear();
    return eval(root_);
  }

  bool operator()(std::string_view w) { return (*this)(WordModel::of(w)); }

 private:
  struct CNode {
    Op op;
    int a = -1, b = -1;            // variable slots
    std::vector<int> kids;
    std::vector<int> free;         // free variable slots, ascending
    bool memoized = false;
    std::vector<std::int8_t> memo;  // -1 unknown
  };

  int compile(const Formula& f, std::map<std::string, int>& slots) {
    auto slot = [&](const std::string& v) {
      auto it = slots.find(v);
      if (it != slots.end()) return it->second;
      return slots.emplace(v, slot_count_++).first->second;
    };
    CNode c;
    c.op = f->op;
    std::set<int> free;
    switch (f->op) {
      case Op::p: c.a = slot(f->x); free.insert(c.a); break;
      case Op::less:
      case Op::eq:
        c.a = slot(f->x);
        c.b = slot(f->y);
        free = {c.a, c.b};
        break;
      case Op::exists:
      case Op::forall: {
        c.a = slot(f->x);
        const int k = compile(f->kids[0], slots);
        c.kids.push_back(k);
        free.insert(nodes_[k].free.begin(), nodes_[k].free.end());
        free.erase(c.a);
        break;
      }
      default:
        for (const auto& kid : f->kids) {
          const int k = compile(kid, slots);
          c.kids.push_back(k);
          free.insert(nodes_[k].free.begin(), nodes_[k].free.end());
        }
    }
    c.free.assign(free.begin(), free.end());
    c.memoized = (f->op == Op::exists || f->op == Op::forall || f->op == Op::macro) && c.free.size() <= 4;
    nodes_.push_back(std::move(c));
    return static_cast<int>(nodes_.size() - 1);
  }

  bool eval(int id) {
    CNode& n = nodes_[id];
    std::size_t key = 0;
    if (n.memoized) {
      const std::size_t len = model_->length;
      std::size_t cells = 1;
      for (int v : n.free) {
        key = key * len + env_[v];
        cells *= len;
      }
      if (n.memo.empty()) n.memo.assign(std::max<std::size_t>(cells, 1), -1);
      if (n.memo[key] >= 0) return n.memo[key];
    }
    bool r = false;
    switch (n.op) {
      case Op::p: r = model_->p[env_[n.a]]; break;
      case Op::less: r = env_[n.a] < env_[n.b]; break;
      case Op::eq: r = env_[n.a] == env_[n.b]; break;
      case Op::top: r = true; break;
      case Op::negate: r = !eval(n.kids[0]); break;
      case Op::conj: r = eval(n.kids[0]) && eval(n.kids[1]); break;
      case Op::disj: r = eval(n.kids[0]) || eval(n.kids[1]); break;
      case Op::implies: r = !eval(n.kids[0]) || eval(n.kids[1]); break;
      case Op::macro: r = eval(n.kids[0]); break;
      case Op::exists:
      case Op::forall: {
        const bool want = n.op == Op::exists;
        const std::size_t saved = env_[n.a];
        r = !want;
        for (std::size_t i = 0; i < model_->length; ++i) {
          env_[n.a] = i;
          if (eval(n.kids[0]) == want) {
            r = want;
            break;
          }
        }
        env_[n.a] = saved;
        break;
      }
    }
    if (n.memoized) nodes_[id].memo[key] = r;
    return r;
  }

  std::vector<CNode> nodes_;
  int root_ = 0;
  int slot_count_ = 0;
  const WordModel* model_ = nullptr;
  std::vector<std::size_t> env_;
};

inline bool fo_eval(const Formula& f, const WordModel& m) { return Evaluator(f)(m); }

}  // namespace regame::fo
