#include <filesystem>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "regame/service.hpp"

using namespace regame;
using namespace regame::service;

namespace {

json position_json(const std::string& dialect, int k, std::optional<int> s, const WordSet& a, const WordSet& b) {
  json p{{"dialect", dialect}, {"k", k}, {"alphabet", {"a", "b"}}, {"A", a}, {"B", b}};
  if (s) p["s"] = *s;
  return p;
}

json ab_position(int k) { return position_json("re", k, std::nullopt, {"ab"}, {"", "a", "b"}); }

json fixed_body(const std::string& expr, const json& position) {
  return json{{"position", position}, {"human_role", "D"}, {"engine", {{"mode", "fixed"}, {"expression", expr}}}};
}

ServiceError error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e;
  }
  return ServiceError{0, "", ""};
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             (name + "_" + std::to_string(std::random_device{}()) + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Session, FixedExpressionWinsWhateverDChooses) {
  for (int branch : {1, 2}) {
    SessionManager mgr;
    const json created = mgr.create(fixed_body("ab", ab_position(3)));
    EXPECT_EQ(created["status"], "awaiting_d");
    EXPECT_EQ(created["turn"], "D");
    EXPECT_EQ(created["pending"]["move"]["type"], "cat");
    const json done = mgr.choice(created["id"], json{{"branch", branch}});
    EXPECT_EQ(done["status"], "won_by_s");
    EXPECT_EQ(done["winner"], "S");
    EXPECT_EQ(done["expression"], branch == 1 ? "a?" : "?b");
    EXPECT_EQ(done["history"].size(), 3u);
  }
}

TEST(Session, FixedStarExpression) {
  SessionManager mgr;
  const json body = fixed_body("(aa)*", position_json("gre", 4, 1, {"", "aa", "aaaa"}, {"a", "b"}));
  json state = mgr.create(body);
  std::mt19937 rng(3);
  while (state["status"] == "awaiting_d") state = mgr.choice(state["id"], json{{"branch", 1 + rng() % 2}});
  EXPECT_EQ(state["status"], "won_by_s");
}

TEST(Session, FixedExpressionMustSeparate) {
  SessionManager mgr;
  const auto not_sep = error_of([&] { mgr.create(fixed_body("a", position_json("re", 3, std::nullopt, {"b"}, {}))); });
  EXPECT_EQ(not_sep.status, 400);
  EXPECT_EQ(not_sep.code, "invalid_request");
  json human_s = fixed_body("ab", ab_position(3));
  human_s["human_role"] = "S";
  EXPECT_EQ(error_of([&] { mgr.create(human_s); }).status, 400);
  const auto too_big = error_of([&] { mgr.create(fixed_body("ab", ab_position(2))); });
  EXPECT_EQ(too_big.status, 400);
  EXPECT_EQ(mgr.size(), 0u);
}

TEST(Session, CreateValidation) {
  SessionManager mgr;
  EXPECT_EQ(error_of([&] { mgr.create(json::object()); }).status, 400);
  EXPECT_EQ(error_of([&] { mgr.create(json{{"position", ab_position(3)}, {"human_role", "X"}}); }).status, 400);
  json bad_engine{{"position", ab_position(3)}, {"engine", {{"mode", "oracle"}}}};
  EXPECT_EQ(error_of([&] { mgr.create(bad_engine); }).status, 400);
  EXPECT_EQ(error_of([&] { mgr.create(json{{"position", position_json("re", 3, std::nullopt, {"c"}, {})}}); }).status,
            400);
}

TEST(Session, HumanSFollowingHintsWins) {
  SessionManager mgr;
  json state = mgr.create(json{{"position", ab_position(3)}, {"human_role", "S"}});
  EXPECT_EQ(state["status"], "awaiting_s");
  const std::string id = state["id"];
  while (state["status"] == "awaiting_s") {
    const json h = mgr.hint(id);
    ASSERT_EQ(h["value"], "S");
    state = mgr.move(id, json{{"move", h["move"]}});
  }
  EXPECT_EQ(state["status"], "won_by_s");
  const std::string expr = state["expression"];
  EXPECT_TRUE(expr == "a?" || expr == "?b") << expr;
}

TEST(Session, HumanDFollowingHintsWinsLostPositions) {
  SessionManager mgr;
  json state = mgr.create(json{{"position", ab_position(2)}, {"human_role", "D"}});
  const std::string id = state["id"];
  while (state["status"] == "awaiting_d") {
    const json h = mgr.hint(id);
    ASSERT_EQ(h["role"], "D");
    EXPECT_EQ(h["value"], "D");
    state = mgr.choice(id, json{{"branch", h["choice"]}});
  }
  EXPECT_EQ(state["status"], "won_by_d");
  EXPECT_TRUE(state.contains("reason"));
}

TEST(Session, Hints) {
  SessionManager mgr;
  const std::string win = mgr.create(json{{"position", ab_position(3)}})["id"];
  const json h = mgr.hint(win);
  EXPECT_EQ(h["role"], "S");
  EXPECT_EQ(h["value"], "S");
  EXPECT_EQ(h["witness"], "ab");
  EXPECT_EQ(h["move"]["type"], "cat");
  const std::string lose = mgr.create(json{{"position", ab_position(2)}})["id"];
  const json l = mgr.hint(lose);
  EXPECT_EQ(l["value"], "D");
  EXPECT_FALSE(l.contains("move"));
}

TEST(Session, IllegalAndLosingMoves) {
  SessionManager mgr;
  const std::string id =
      mgr.create(json{{"position", position_json("re", 3, std::nullopt, {"a"}, {""})}})["id"];
  const auto star = error_of([&] { mgr.move(id, json::parse(R"({"type":"star","compositions":[["a"]],"B_prime":[]})")); });
  EXPECT_EQ(star.status, 422);
  EXPECT_EQ(star.code, "illegal_move");
  ASSERT_TRUE(star.violation);
  EXPECT_EQ(error_of([&] { mgr.move(id, json{{"type", "neg"}}); }).status, 422);
  EXPECT_EQ(error_of([&] { mgr.move(id, json{{"type", "twist"}}); }).status, 400);
  EXPECT_EQ(error_of([&] { mgr.choice(id, json{{"branch", 1}}); }).code, "wrong_turn");

  const json lost = mgr.move(id, json{{"type", "atom"}, {"symbol", nullptr}});
  EXPECT_EQ(lost["status"], "won_by_d");
  EXPECT_EQ(lost["expression"], "\\e");
  const auto over = error_of([&] { mgr.move(id, json{{"type", "atom"}, {"symbol", "a"}}); });
  EXPECT_EQ(over.status, 409);
  EXPECT_EQ(over.code, "game_over");
  EXPECT_EQ(error_of([&] { mgr.hint(id); }).status, 409);
}

TEST(Session, ValidateDoesNotPlay) {
  SessionManager mgr;
  const std::string id = mgr.create(json{{"position", ab_position(3)}})["id"];
  const json atom = mgr.validate(id, json{{"type", "atom"}, {"symbol", "a"}});
  EXPECT_EQ(atom["valid"], true);
  const json neg = mgr.validate(id, json{{"move", {{"type", "neg"}}}});
  EXPECT_EQ(neg["valid"], false);
  EXPECT_TRUE(neg.contains("violation"));
  EXPECT_TRUE(mgr.get(id)["history"].empty());
}

TEST(Session, NotFoundAndDelete) {
  SessionManager mgr;
  EXPECT_EQ(error_of([&] { mgr.get("g99"); }).status, 404);
  const std::string id = mgr.create(json{{"position", ab_position(3)}})["id"];
  EXPECT_EQ(mgr.size(), 1u);
  mgr.remove(id);
  EXPECT_EQ(mgr.size(), 0u);
  EXPECT_EQ(error_of([&] { mgr.remove(id); }).code, "not_found");
}

TEST(Session, EngineLimitIsReported) {
  SolverOptions tight;
  tight.max_positions = 1;
  SessionManager mgr(std::nullopt, tight);
  const json body{{"position", position_json("gre", 6, 2, {"", "aa", "ab", "ba"}, {"a", "b", "aaa"})},
                  {"human_role", "D"}};
  const auto e = error_of([&] { mgr.create(body); });
  EXPECT_EQ(e.status, 503);
  EXPECT_EQ(e.code, "limit_exceeded");
  const std::string id = mgr.create(json{{"position", body["position"]}, {"human_role", "S"}})["id"];
  EXPECT_EQ(mgr.hint(id)["available"], false);
}

TEST(Session, LogReplayAfterRestart) {
  const auto dir = fresh_dir("regame_sessions");
  json before;
  std::string kept, dropped;
  {
    SessionManager mgr(dir);
    const json created = mgr.create(fixed_body("ab", ab_position(3)));
    kept = created["id"];
    dropped = mgr.create(json{{"position", ab_position(3)}})["id"];
    before = mgr.choice(kept, json{{"branch", 2}});
    mgr.remove(dropped);
  }
  SessionManager again(dir);
  EXPECT_EQ(again.size(), 1u);
  EXPECT_EQ(again.get(kept), before);
  EXPECT_EQ(error_of([&] { again.get(dropped); }).status, 404);
  const std::string next = again.create(json{{"position", ab_position(3)}})["id"];
  EXPECT_NE(next, kept);
  EXPECT_NE(next, dropped);
  std::filesystem::remove_all(dir);
}

class HttpApi : public ::testing::Test {
 protected:
  void SetUp() override {
    install_routes(server_, mgr_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  SessionManager mgr_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpApi, HealthAndCors) {
  auto c = client();
  auto res = c.Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["ok"], true);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  auto pre = c.Options("/sessions");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
}

TEST_F(HttpApi, FullFixedGame) {
  auto c = client();
  auto created = c.Post("/sessions", fixed_body("ab", ab_position(3)).dump(), "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  const json s = json::parse(created->body);
  const std::string id = s["id"];
  EXPECT_EQ(s["status"], "awaiting_d");

  auto got = c.Get("/sessions/" + id);
  ASSERT_TRUE(got);
  EXPECT_EQ(json::parse(got->body), s);

  auto chosen = c.Post("/sessions/" + id + "/choice", R"({"branch":1})", "application/json");
  ASSERT_TRUE(chosen);
  EXPECT_EQ(chosen->status, 200);
  EXPECT_EQ(json::parse(chosen->body)["status"], "won_by_s");

  auto again = c.Post("/sessions/" + id + "/choice", R"({"branch":1})", "application/json");
  ASSERT_TRUE(again);
  EXPECT_EQ(again->status, 409);
  EXPECT_EQ(json::parse(again->body)["code"], "game_over");

  auto del = c.Delete("/sessions/" + id);
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 204);
  auto gone = c.Get("/sessions/" + id);
  ASSERT_TRUE(gone);
  EXPECT_EQ(gone->status, 404);
}

TEST_F(HttpApi, ErrorStatuses) {
  auto c = client();
  auto malformed = c.Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(malformed);
  EXPECT_EQ(malformed->status, 400);
  EXPECT_EQ(json::parse(malformed->body)["code"], "invalid_request");

  auto created = c.Post("/sessions", json{{"position", ab_position(3)}}.dump(), "application/json");
  ASSERT_TRUE(created);
  const std::string id = json::parse(created->body)["id"];

  auto illegal = c.Post("/sessions/" + id + "/moves", R"({"type":"neg"})", "application/json");
  ASSERT_TRUE(illegal);
  EXPECT_EQ(illegal->status, 422);
  EXPECT_TRUE(json::parse(illegal->body).contains("violation"));

  auto wrong = c.Post("/sessions/" + id + "/choice", R"({"branch":2})", "application/json");
  ASSERT_TRUE(wrong);
  EXPECT_EQ(wrong->status, 409);
  EXPECT_EQ(json::parse(wrong->body)["code"], "wrong_turn");

  auto valid = c.Post("/sessions/" + id + "/validate", R"({"type":"neg"})", "application/json");
  ASSERT_TRUE(valid);
  EXPECT_EQ(valid->status, 200);
  EXPECT_EQ(json::parse(valid->body)["valid"], false);

  auto hint = c.Get("/sessions/" + id + "/hint");
  ASSERT_TRUE(hint);
  EXPECT_EQ(json::parse(hint->body)["witness"], "ab");

  auto missing = c.Get("/sessions/nope/hint");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}
