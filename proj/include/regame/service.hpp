#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "regame/expr.hpp"
#include "regame/game.hpp"
#include "regame/serialize.hpp"
#include "regame/solver.hpp"
#include "regame/strategy.hpp"

namespace regame::service {

/// An API failure with its HTTP status.
struct ServiceError {
  int status;
  std::string code;
  std::string message;
  std::optional<std::string> violation;

  json body() const {
    json j{{"code", code}, {"message", message}};
    if (violation) j["violation"] = *violation;
    return j;
  }
};

enum class Actor : std::uint8_t { human, engine };

/// One step of a play: an S move or a D branch choice.
struct Event {
  Actor actor;
  Player player;
  std::optional<SMove> move;
  int branch = 0;
};

struct EngineConfig {
  std::optional<Expr> fixed;  ///< absent: solver
};

class Session {
 public:
  Session(std::string id, Position initial, Player human, EngineConfig engine, SolverOptions solver_options)
      : id_(std::move(id)),
        initial_(std::move(initial)),
        human_(human),
        engine_(std::move(engine)),
        solver_(std::move(solver_options)) {
    if (engine_.fixed) {
      if (human_ != Player::D)
        throw ServiceError{400, "invalid_request", "a fixed expression plays S, so the human must play D"};
      if (auto why = check_fixed_expr(*engine_.fixed, initial_))
        throw ServiceError{400, "invalid_request", "fixed expression is not a winning strategy: " + *why, *why};
    }
    reset();
  }

  const std::string& id() const { return id_; }
  std::mutex& mutex() { return mutex_; }
  const std::vector<Event>& history() const { return history_; }

  /// Rebuilds the state from the initial position and the history alone.
  void reset() {
    state_ = start_game(initial_);
    expr_stack_.clear();
    if (engine_.fixed) expr_stack_.push_back(*engine_.fixed);
    pending_exprs_.clear();
    auto events = std::move(history_);
    history_.clear();
    for (const auto& e : events) apply(e);
  }

  /// Lets the engine act until it is the human's turn or the game ends.
  void run_engine(std::vector<Event>* log = nullptr) {
    while (!state_.over() && state_.awaiting() != human_) {
      Event e{Actor::engine, state_.awaiting()};
      if (state_.awaiting() == Player::S) {
        e.move = engine_s_move();
      } else {
        e.branch = engine_reply_for_d(solver_, state_.pending->first, state_.pending->second);
      }
      apply(e);
      if (log) log->push_back(e);
    }
  }

  void human_move(const SMove& m) {
    require_turn(Player::S);
    if (auto v = validate_move(state_.position, m, rules_))
      throw ServiceError{422, "illegal_move", "move rejected: " + *v, *v};
    apply(Event{Actor::human, Player::S, m});
  }

  void human_choice(int branch) {
    require_turn(Player::D);
    if (branch != 1 && branch != 2) throw ServiceError{400, "invalid_request", "branch must be 1 or 2"};
    apply(Event{Actor::human, Player::D, std::nullopt, branch});
  }

  /// Re-applies a logged event.
  void append(const Event& e) { apply(e); }

  json validate(const SMove& m) const {
    if (state_.over()) throw ServiceError{409, "game_over", "game over"};
    if (state_.pending) throw ServiceError{409, "wrong_turn", "it is D's turn to choose a branch"};
    auto v = validate_move(state_.position, m, rules_);
    json j{{"valid", !v.has_value()}};
    if (v) j["violation"] = *v;
    return j;
  }

  json hint() {
    if (state_.over()) throw ServiceError{409, "game_over", "game over"};
    json j;
    try {
      if (state_.pending) {
        const auto& pc = *state_.pending;
        const Player v1 = solver_.solve(pc.first).winner;
        const Player v2 = solver_.solve(pc.second).winner;
        j["role"] = "D";
        j["choice"] = engine_reply_for_d(solver_, pc.first, pc.second);
        j["values"] = {std::string(to_string(v1)), std::string(to_string(v2))};
        j["value"] = (v1 == Player::D || v2 == Player::D) ? "D" : "S";
      } else {
        const auto r = solver_.solve(state_.position);
        j["role"] = "S";
        j["value"] = std::string(to_string(r.winner));
        if (r.winner == Player::S) {
          j["move"] = to_json(*solver_.best_move(state_.position));
          j["witness"] = render_expr(*r.witness);
        } else {
          j["message"] = "no winning move exists";
        }
      }
      j["available"] = true;
    } catch (const resource_limit_exceeded& e) {
      j = json{{"available", false}, {"value", "unknown"}, {"message", std::string("hint unavailable: ") + e.what()}};
    }
    return j;
  }

  json to_json_state() const {
    json j;
    j["id"] = id_;
    j["dialect"] = std::string(to_string(initial_.dialect));
    j["human_role"] = std::string(to_string(human_));
    j["engine"] = engine_.fixed ? json{{"mode", "fixed"}, {"expression", render_expr(*engine_.fixed)}}
                                : json{{"mode", "solver"}};
    j["initial"] = to_json(initial_);
    j["position"] = to_json(state_.position);
    if (state_.over()) {
      j["status"] = state_.winner == Player::S ? "won_by_s" : "won_by_d";
      j["winner"] = std::string(to_string(*state_.winner));
    } else {
      j["status"] = state_.pending ? "awaiting_d" : "awaiting_s";
      j["winner"] = nullptr;
    }
    j["turn"] = state_.over() ? json(nullptr) : json(std::string(to_string(state_.awaiting())));
    if (state_.pending) {
      j["pending"] = {{"move", to_json(state_.pending->move)},
                      {"children", {to_json(state_.pending->first), to_json(state_.pending->second)}}};
    }
    json hist = json::array();
    for (const auto& e : history_) hist.push_back(event_json(e));
    j["history"] = hist;
    j["expression"] = branch_expression();
    if (state_.over() && state_.winner == Player::D) j["reason"] = d_reason();
    return j;
  }

  static json event_json(const Event& e) {
    json j{{"actor", e.actor == Actor::human ? "human" : "engine"}, {"player", std::string(to_string(e.player))}};
    if (e.move) j["move"] = to_json(*e.move);
    else j["choice"] = e.branch;
    return j;
  }

  static Event event_from_json(const json& j) {
    Event e{};
    e.actor = j.at("actor").get<std::string>() == "human" ? Actor::human : Actor::engine;
    e.player = j.at("player").get<std::string>() == "S" ? Player::S : Player::D;
    if (j.contains("move")) e.move = move_from_json(j.at("move"));
    else e.branch = j.at("choice").get<int>();
    return e;
  }

  json creation_json() const {
    json j{{"id", id_}, {"position", to_json(initial_)}, {"human_role", std::string(to_string(human_))}};
    j["engine"] = engine_.fixed ? json{{"mode", "fixed"}, {"expression", render_expr(*engine_.fixed)}}
                                : json{{"mode", "solver"}};
    return j;
  }

 private:
  void require_turn(Player p) const {
    if (state_.over()) throw ServiceError{409, "game_over", "game over"};
    if (state_.awaiting() != p)
      throw ServiceError{409, "wrong_turn",
                         p == Player::S ? "it is D's turn to choose a branch" : "it is S's turn to move"};
    if (p != human_) throw ServiceError{409, "wrong_turn", "that role is played by the engine"};
  }

  SMove engine_s_move() {
    if (engine_.fixed && !expr_stack_.empty()) {
      const Expr& e = expr_stack_.back();
      if (!check_fits(e, state_.position)) return fixed_expr_move(e, state_.position).move;
    }
    return solver_move_for_s(solver_, state_.position);
  }

  /// Applies an event that is known to be legal and records it.
  void apply(const Event& e) {
    if (e.move) {
      const Position before = state_.position;
      if (engine_.fixed && !expr_stack_.empty()) {
        const Expr cur = expr_stack_.back();
        expr_stack_.pop_back();
        pending_exprs_.clear();
        if (!check_fits(cur, before)) {
          auto plan = fixed_expr_move(cur, before);
          if (plan.move == *e.move) {
            if (plan.next.size() == 1) expr_stack_.push_back(plan.next[0]);
            if (plan.next.size() == 2) pending_exprs_ = plan.next;
          }
        }
      }
      auto next = play_s(state_, *e.move, rules_);
      if (auto* err = std::get_if<std::string>(&next)) throw ServiceError{422, "illegal_move", *err, *err};
      state_ = std::get<GameState>(std::move(next));
    } else {
      auto next = play_d(state_, e.branch);
      if (auto* err = std::get_if<std::string>(&next)) throw ServiceError{409, "wrong_turn", *err};
      state_ = std::get<GameState>(std::move(next));
      if (pending_exprs_.size() == 2) expr_stack_.push_back(pending_exprs_[e.branch - 1]);
      pending_exprs_.clear();
    }
    history_.push_back(e);
  }

  std::string d_reason() const {
    if (!history_.empty() && history_.back().move) {
      const SMove& m = *history_.back().move;
      if (std::holds_alternative<AtomMove>(m)) return "the atom-move needs A ⊆ {a} and a ∉ B";
      if (std::holds_alternative<EmptyMove>(m)) return "the ∅-move needs A = ∅";
    }
    return "S has no size budget left (k = 0)";
  }

  /// The expression S built along this play; unexplored branches show as "?".
  std::string branch_expression() const {
    std::size_t i = 0;
    std::string out = render_branch(i, 0);
    return out;
  }

  // level: 0 union context, 1 cat context, 2 unary context
  std::string render_branch(std::size_t& i, int ctx) const {
    while (i < history_.size() && !history_[i].move) ++i;
    if (i >= history_.size()) return "?";
    const SMove& m = *history_[i].move;
    ++i;
    auto wrap = [ctx](int own, std::string s) { return own < ctx ? "(" + s + ")" : s; };
    if (const auto* a = std::get_if<AtomMove>(&m)) {
      if (!a->symbol) return "\\e";
      std::string s;
      if (is_reserved(*a->symbol)) s += '\\';
      return s + *a->symbol;
    }
    if (std::holds_alternative<EmptyMove>(m)) return "\\0";
    if (std::holds_alternative<StarMove>(m)) {
      std::string in = render_branch(i, 3);
      return in + "*";
    }
    if (std::holds_alternative<NegMove>(m)) return "!" + render_branch(i, 2);
    // binary: the next event is D's choice
    int branch = 0;
    if (i < history_.size() && !history_[i].move) branch = history_[i++].branch;
    const bool cat = std::holds_alternative<CatMove>(m);
    const int own = cat ? 1 : 0;
    std::string l = branch == 1 ? render_branch(i, cat ? 1 : 0) : "?";
    std::string r = branch == 2 ? render_branch(i, cat ? 2 : 1) : "?";
    return wrap(own, cat ? l + r : l + "|" + r);
  }

  std::string id_;
  Position initial_;
  Player human_;
  EngineConfig engine_;
  Rules rules_;
  Solver solver_;
  GameState state_;
  std::vector<Expr> expr_stack_;
  std::vector<Expr> pending_exprs_;
  std::vector<Event> history_;
  std::mutex mutex_;
};

/// All sessions, with optional append-only JSONL logs (one file per session) for replay.
class SessionManager {
 public:
  explicit SessionManager(std::optional<std::filesystem::path> log_dir = std::nullopt, SolverOptions opt = default_options())
      : log_dir_(std::move(log_dir)), solver_options_(opt) {
    if (log_dir_) {
      std::filesystem::create_directories(*log_dir_);
      load();
    }
  }

  static SolverOptions default_options() {
    SolverOptions o;
    o.max_positions = 500'000;
    o.max_moves = 50'000'000;
    return o;
  }

  json create(const json& body) {
    Position p;
    Player human = Player::S;
    EngineConfig engine;
    try {
      p = position_from_json(detail::field(body, "position"));
      const std::string role = body.value("human_role", std::string("S"));
      if (role != "S" && role != "D") throw parse_error("'human_role' must be \"S\" or \"D\"");
      human = role == "S" ? Player::S : Player::D;
      if (body.contains("engine")) {
        const json& e = body["engine"];
        const std::string mode = e.value("mode", std::string("solver"));
        if (mode == "fixed") {
          engine.fixed = parse_expr(detail::field(e, "expression").get<std::string>(), p.alphabet);
        } else if (mode != "solver") {
          throw parse_error("engine mode must be \"solver\" or \"fixed\"");
        }
      }
    } catch (const ServiceError&) {
      throw;
    } catch (const std::exception& e) {
      throw ServiceError{400, "invalid_request", e.what()};
    }
    std::string id;
    {
      std::lock_guard lock(map_mutex_);
      id = "g" + std::to_string(++next_id_);
    }
    auto s = std::make_shared<Session>(id, p, human, engine, solver_options_);
    std::lock_guard slock(s->mutex());
    log(id, json{{"event", "create"}, {"session", s->creation_json()}});
    std::vector<Event> engine_events;
    engine_step(*s, &engine_events);
    for (const auto& e : engine_events) log(id, json{{"event", "step"}, {"step", Session::event_json(e)}});
    {
      std::lock_guard lock(map_mutex_);
      sessions_[id] = s;
    }
    return s->to_json_state();
  }

  json get(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex());
    s->reset();
    return s->to_json_state();
  }

  json move(const std::string& id, const json& body) {
    auto s = find(id);
    SMove m = parse_move(body.contains("move") ? body["move"] : body);
    std::lock_guard lock(s->mutex());
    s->human_move(m);
    log(id, json{{"event", "step"}, {"step", Session::event_json(s->history().back())}});
    after_human(*s, id);
    return s->to_json_state();
  }

  json choice(const std::string& id, const json& body) {
    auto s = find(id);
    int branch = 0;
    try {
      branch = detail::int_field(body, "branch");
    } catch (const std::exception& e) {
      throw ServiceError{400, "invalid_request", e.what()};
    }
    std::lock_guard lock(s->mutex());
    s->human_choice(branch);
    log(id, json{{"event", "step"}, {"step", Session::event_json(s->history().back())}});
    after_human(*s, id);
    return s->to_json_state();
  }

  json validate(const std::string& id, const json& body) {
    auto s = find(id);
    SMove m = parse_move(body.contains("move") ? body["move"] : body);
    std::lock_guard lock(s->mutex());
    return s->validate(m);
  }

  json hint(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex());
    return s->hint();
  }

  void remove(const std::string& id) {
    std::lock_guard lock(map_mutex_);
    if (!sessions_.erase(id)) throw ServiceError{404, "not_found", "no session '" + id + "'"};
    log(id, json{{"event", "delete"}});
  }

  std::size_t size() const {
    std::lock_guard lock(map_mutex_);
    return sessions_.size();
  }

 private:
  static SMove parse_move(const json& j) {
    try {
      return move_from_json(j);
    } catch (const std::exception& e) {
      throw ServiceError{400, "invalid_request", e.what()};
    }
  }

  void engine_step(Session& s, std::vector<Event>* out) {
    try {
      s.run_engine(out);
    } catch (const resource_limit_exceeded& e) {
      throw ServiceError{503, "limit_exceeded", std::string("engine could not move: ") + e.what()};
    }
  }

  void after_human(Session& s, const std::string& id) {
    std::vector<Event> engine_events;
    engine_step(s, &engine_events);
    for (const auto& e : engine_events) log(id, json{{"event", "step"}, {"step", Session::event_json(e)}});
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(map_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError{404, "not_found", "no session '" + id + "'"};
    return it->second;
  }

  void log(const std::string& id, const json& record) {
    if (!log_dir_) return;
    std::lock_guard lock(log_mutex_);
    std::ofstream out(*log_dir_ / (id + ".jsonl"), std::ios::app);
    out << record.dump() << '\n';
  }

  /// Rebuilds sessions from their logs; deleted sessions stay deleted.
  void load() {
    for (const auto& entry : std::filesystem::directory_iterator(*log_dir_)) {
      if (entry.path().extension() != ".jsonl") continue;
      std::ifstream in(entry.path());
      std::string line;
      std::shared_ptr<Session> s;
      bool deleted = false;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json rec = json::parse(line);
        const std::string ev = rec.at("event").get<std::string>();
        if (ev == "create") {
          const json& c = rec.at("session");
          const Position p = position_from_json(c.at("position"));
          EngineConfig eng;
          if (c.at("engine").at("mode") == "fixed")
            eng.fixed = parse_expr(c.at("engine").at("expression").get<std::string>(), p.alphabet);
          s = std::make_shared<Session>(c.at("id").get<std::string>(), p,
                                        c.at("human_role") == "S" ? Player::S : Player::D, eng, solver_options_);
        } else if (ev == "step" && s) {
          s->append(Session::event_from_json(rec.at("step")));
        } else if (ev == "delete") {
          deleted = true;
        }
      }
      if (!s) continue;
      const std::string id = s->id();
      if (id.size() > 1 && id[0] == 'g') next_id_ = std::max(next_id_, std::stoul(id.substr(1)));
      if (!deleted) sessions_[id] = s;
    }
  }

  std::optional<std::filesystem::path> log_dir_;
  SolverOptions solver_options_;
  mutable std::mutex map_mutex_;
  std::mutex log_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  unsigned long next_id_ = 0;
};

/// Registers the HTTP routes on `server`.
inline void install_routes(httplib::Server& server, SessionManager& mgr) {
  auto send = [](httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };
  auto guarded = [send](auto fn) {
    return [send, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ServiceError& e) {
        send(res, e.status, e.body());
      } catch (const json::parse_error& e) {
        send(res, 400, ServiceError{400, "invalid_request", std::string("malformed JSON: ") + e.what()}.body());
      } catch (const std::exception& e) {
        send(res, 500, ServiceError{500, "internal", e.what()}.body());
      }
    };
  };
  auto body_of = [](const httplib::Request& req) { return req.body.empty() ? json::object() : json::parse(req.body); };

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/health", [send](const httplib::Request&, httplib::Response& res) { send(res, 200, json{{"ok", true}}); });
  server.Post("/sessions", guarded([&mgr, send, body_of](const httplib::Request& req, httplib::Response& res) {
                send(res, 201, mgr.create(body_of(req)));
              }));
  server.Get(R"(/sessions/([^/]+))", guarded([&mgr, send](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, mgr.get(req.matches[1]));
             }));
  server.Delete(R"(/sessions/([^/]+))", guarded([&mgr](const httplib::Request& req, httplib::Response& res) {
                  mgr.remove(req.matches[1]);
                  res.status = 204;
                }));
  server.Post(R"(/sessions/([^/]+)/moves)",
              guarded([&mgr, send, body_of](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, mgr.move(req.matches[1], body_of(req)));
              }));
  server.Post(R"(/sessions/([^/]+)/choice)",
              guarded([&mgr, send, body_of](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, mgr.choice(req.matches[1], body_of(req)));
              }));
  server.Post(R"(/sessions/([^/]+)/validate)",
              guarded([&mgr, send, body_of](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, mgr.validate(req.matches[1], body_of(req)));
              }));
  server.Get(R"(/sessions/([^/]+)/hint)", guarded([&mgr, send](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, mgr.hint(req.matches[1]));
             }));
}

}  // namespace regame::service
