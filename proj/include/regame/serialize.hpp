#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regame/certify.hpp"
#include "regame/error.hpp"
#include "regame/expr.hpp"
#include "regame/game.hpp"
#include "regame/solver.hpp"
#include "regame/words.hpp"

namespace regame {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw parse_error("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw parse_error(std::string("missing field '") + key + "'");
  return *it;
}

inline int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw parse_error(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline WordSet word_array(const json& v, const char* what) {
  if (!v.is_array()) throw parse_error(std::string("'") + what + "' must be an array of words");
  WordSet out;
  for (const auto& w : v) {
    if (!w.is_string()) throw parse_error(std::string("'") + what + "' must contain only strings");
    out.push_back(w.get<std::string>());
  }
  return out;
}

inline json word_json(const WordSet& words) {
  json out = json::array();
  for (const auto& w : words) out.push_back(w);
  return out;
}

}  // namespace detail

// --- positions ---------------------------------------------------------------

inline json to_json(const Position& p) {
  json j;
  j["dialect"] = std::string(to_string(p.dialect));
  j["k"] = p.k;
  if (p.s) j["s"] = *p.s;
  json alpha = json::array();
  for (char c : p.alphabet.symbols()) alpha.push_back(std::string(1, c));
  j["alphabet"] = alpha;
  j["A"] = detail::word_json(p.a);
  j["B"] = detail::word_json(p.b);
  return j;
}

/// {dialect, k, s?, alphabet:[chars], A:[words], B:[words]} with "" for ε.
inline Position position_from_json(const json& j) {
  const json& d = detail::field(j, "dialect");
  if (!d.is_string()) throw parse_error("'dialect' must be a string");
  const Dialect dialect = parse_dialect(d.get<std::string>());
  const int k = detail::int_field(j, "k");
  std::optional<int> s;
  if (j.contains("s") && !j["s"].is_null()) s = detail::int_field(j, "s");
  std::string symbols = "ab";
  if (j.contains("alphabet")) {
    const json& a = j["alphabet"];
    if (!a.is_array()) throw parse_error("'alphabet' must be an array of one-character strings");
    symbols.clear();
    for (const auto& c : a) {
      if (!c.is_string() || c.get<std::string>().size() != 1)
        throw parse_error("'alphabet' must be an array of one-character strings");
      symbols += c.get<std::string>();
    }
  }
  return make_position(dialect, k, s, Alphabet(symbols), detail::word_array(detail::field(j, "A"), "A"),
                       detail::word_array(detail::field(j, "B"), "B"));
}

// --- moves -------------------------------------------------------------------

inline json to_json(const SMove& m) {
  json j;
  j["type"] = std::string(move_name(m));
  std::visit(
      [&](const auto& mv) {
        using M = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<M, AtomMove>) {
          j["symbol"] = mv.symbol ? json(std::string(1, *mv.symbol)) : json(nullptr);
        } else if constexpr (std::is_same_v<M, UnionMove>) {
          j["A1"] = detail::word_json(mv.a1);
          j["A2"] = detail::word_json(mv.a2);
          j["k1"] = mv.k1;
          j["k2"] = mv.k2;
          j["s1"] = mv.s1;
          j["s2"] = mv.s2;
        } else if constexpr (std::is_same_v<M, CatMove>) {
          j["cuts"] = mv.cuts;
          j["sides"] = mv.sides;
          j["k1"] = mv.k1;
          j["k2"] = mv.k2;
          j["s1"] = mv.s1;
          j["s2"] = mv.s2;
        } else if constexpr (std::is_same_v<M, StarMove>) {
          j["compositions"] = mv.compositions;
          j["B_prime"] = detail::word_json(mv.b_prime);
        }
      },
      m);
  return j;
}

inline SMove move_from_json(const json& j) {
  const json& t = detail::field(j, "type");
  if (!t.is_string()) throw parse_error("'type' must be a string");
  const std::string type = t.get<std::string>();
  auto opt_int = [&](const char* key) { return j.contains(key) ? detail::int_field(j, key) : 0; };
  try {
    if (type == "atom") {
      AtomMove m;
      if (j.contains("symbol") && !j["symbol"].is_null()) {
        const std::string s = j["symbol"].get<std::string>();
        if (s.size() > 1) throw parse_error("'symbol' must be one character, \"\" or null for ε");
        if (!s.empty()) m.symbol = s[0];
      }
      return m;
    }
    if (type == "empty") return EmptyMove{};
    if (type == "neg") return NegMove{};
    if (type == "union") {
      UnionMove m;
      m.a1 = canonical(detail::word_array(detail::field(j, "A1"), "A1"));
      m.a2 = canonical(detail::word_array(detail::field(j, "A2"), "A2"));
      m.k1 = detail::int_field(j, "k1");
      m.k2 = detail::int_field(j, "k2");
      m.s1 = opt_int("s1");
      m.s2 = opt_int("s2");
      return m;
    }
    if (type == "cat") {
      CatMove m;
      m.cuts = detail::field(j, "cuts").get<std::vector<std::size_t>>();
      m.sides = detail::field(j, "sides").get<std::vector<std::vector<int>>>();
      m.k1 = detail::int_field(j, "k1");
      m.k2 = detail::int_field(j, "k2");
      m.s1 = opt_int("s1");
      m.s2 = opt_int("s2");
      return m;
    }
    if (type == "star") {
      StarMove m;
      m.compositions = detail::field(j, "compositions").get<std::vector<std::vector<Word>>>();
      m.b_prime = canonical(detail::word_array(detail::field(j, "B_prime"), "B_prime"));
      return m;
    }
  } catch (const json::exception& e) {
    throw parse_error(std::string("malformed ") + type + " move: " + e.what());
  }
  throw parse_error("unknown move type '" + type + "' (expected atom, empty, union, cat, star or neg)");
}

// --- results -------------------------------------------------------------------

inline json to_json(const SolveStats& s) {
  return json{{"positions_visited", s.positions_visited},
              {"memo_hits", s.memo_hits},
              {"max_depth", s.max_depth},
              {"moves_examined", s.moves_examined}};
}

inline json to_json(const SolveResult& r) {
  json j;
  j["winner"] = std::string(to_string(r.winner));
  if (r.witness) {
    j["witness"] = render_expr(*r.witness);
    j["witness_size"] = r.witness->size();
    j["witness_stars"] = r.witness->stars();
  } else {
    j["witness"] = nullptr;
  }
  j["stats"] = to_json(r.stats);
  return j;
}

inline json to_json(const EnumSpec& s) {
  json j{{"alphabet", s.alphabet.symbols()}, {"dialect", std::string(to_string(s.dialect))}, {"max_size", s.max_size}};
  j["max_stars"] = s.max_stars ? json(*s.max_stars) : json(nullptr);
  return j;
}

inline json to_json(const CegisResult& r) {
  json j;
  j["status"] = std::string(to_string(r.status));
  j["bounds"] = to_json(r.spec);
  j["horizon"] = r.horizon;
  j["A"] = detail::word_json(r.a);
  j["B_sample"] = detail::word_json(r.b_sample);
  json rounds = json::array();
  for (const auto& rd : r.rounds)
    rounds.push_back({{"candidate", render_expr(rd.candidate)}, {"counterexample", rd.counterexample}});
  j["rounds"] = rounds;
  j["refuting"] = r.refuting ? json(render_expr(*r.refuting)) : json(nullptr);
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

// --- word list files -------------------------------------------------------------

/// One word per line after a "# alphabet: <symbols>" header; EPS stands for ε.
inline void write_word_file(std::ostream& out, const Alphabet& sigma, const WordSet& words) {
  out << "# alphabet: " << sigma.symbols() << '\n';
  for (const auto& w : words) out << format_word(w) << '\n';
}

struct WordFile {
  Alphabet alphabet;
  WordSet words;
};

inline WordFile read_word_file(std::istream& in) {
  std::string line;
  if (std::getline(in, line) && !line.empty() && line.back() == '\r') line.pop_back();
  if (!in || line.rfind("# alphabet: ", 0) != 0)
    throw parse_error("word file must start with '# alphabet: <symbols>'");
  WordFile f{Alphabet(line.substr(12)), {}};
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    Word w = line == "EPS" ? Word{} : line;
    if (!f.alphabet.contains_word(w))
      throw alphabet_error("line " + std::to_string(lineno) + ": word '" + line + "' is outside the alphabet");
    f.words.push_back(std::move(w));
  }
  f.words = canonical(std::move(f.words));
  return f;
}

}  // namespace regame
