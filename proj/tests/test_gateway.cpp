#include "taskforge/errors.hpp"
#include "taskforge/gateway.hpp"

#include <doctest.h>

#include <filesystem>

using namespace taskforge;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name) {
    path = std::filesystem::temp_directory_path() / ("taskforge-test-" + name);
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
};

Backend mock_backend(std::vector<MockRule> rules) {
  Backend b;
  b.kind = BackendKind::mock;
  b.rules = std::move(rules);
  return b;
}

}  // namespace

TEST_CASE("mock backend matches substring rules") {
  Gateway gw;
  gw.bind(RoleKind::explorer_planner,
          mock_backend({{"Explore the", "canned plan"}, {"", "fallback"}}));
  std::string out =
      gw.complete(RoleKind::explorer_planner, {user_message("Explore the clock app")});
  CHECK(out == "canned plan");

  Gateway none;
  none.bind(RoleKind::verifier, mock_backend({{"nomatch", "x"}}));
  CHECK_THROWS_AS(none.complete(RoleKind::verifier, {user_message("other")}), BackendError);
}

TEST_CASE("unbound roles and empty message lists error") {
  Gateway gw;
  CHECK_THROWS_AS(gw.complete(RoleKind::verifier, {user_message("x")}), BackendError);
  gw.bind(RoleKind::verifier, mock_backend({{"", "ok"}}));
  CHECK_THROWS_AS(gw.complete(RoleKind::verifier, {}), BackendError);
}

TEST_CASE("record then replay is byte identical; misses are errors") {
  TempFile fixture("fixture.jsonl");
  std::vector<ChatMessage> m1{user_message("call one")};
  std::vector<ChatMessage> m2{user_message("call two")};
  std::vector<ChatMessage> m3{user_message("call three")};

  {
    Gateway rec;
    Backend b;
    b.kind = BackendKind::record;
    b.record_inner = BackendKind::mock;
    b.fixture_path = fixture.path.string();
    b.rules = {{"call", "recorded response"}};
    rec.bind(RoleKind::task_generator, b);
    CHECK(rec.complete(RoleKind::task_generator, m1) == "recorded response");
    CHECK(rec.complete(RoleKind::task_generator, m2) == "recorded response");
    CHECK(rec.complete(RoleKind::task_generator, m3) == "recorded response");
  }

  Gateway rep;
  Backend b;
  b.kind = BackendKind::replay;
  b.fixture_path = fixture.path.string();
  rep.bind(RoleKind::task_generator, b);
  CHECK(rep.complete(RoleKind::task_generator, m1) == "recorded response");
  CHECK(rep.complete(RoleKind::task_generator, m2) == "recorded response");
  CHECK(rep.complete(RoleKind::task_generator, m3) == "recorded response");

  // one changed prompt byte is a miss
  CHECK_THROWS_AS(rep.complete(RoleKind::task_generator, {user_message("call one!")}),
                  ReplayMissError);
}

TEST_CASE("replay against an empty fixture misses on the first call") {
  TempFile fixture("empty.jsonl");
  Gateway gw;
  Backend b;
  b.kind = BackendKind::replay;
  b.fixture_path = fixture.path.string();
  gw.bind(RoleKind::summarizer, b);
  CHECK_THROWS_AS(gw.complete(RoleKind::summarizer, {user_message("anything")}),
                  ReplayMissError);
}

TEST_CASE("conflicting duplicate digests on record error out") {
  TempFile fixture("conflict.jsonl");
  FixtureStore store(fixture.path.string());
  store.record("digest-a", "one");
  CHECK_NOTHROW(store.record("digest-a", "one"));
  CHECK_THROWS_AS(store.record("digest-a", "two"), FixtureConflictError);
}

TEST_CASE("request digest covers role and messages") {
  auto msgs = std::vector<ChatMessage>{user_message("hello")};
  CHECK(request_digest(RoleKind::verifier, msgs) == request_digest(RoleKind::verifier, msgs));
  CHECK(request_digest(RoleKind::verifier, msgs) !=
        request_digest(RoleKind::summarizer, msgs));
  CHECK(request_digest(RoleKind::verifier, msgs) !=
        request_digest(RoleKind::verifier, {user_message("hello!")}));
}

TEST_CASE("extract_json finds fenced blocks, prefixes, and tolerates trailing commas") {
  json fenced = extract_json("Here you go:\n```json\n{\"result\":\"success\"}\n```");
  CHECK(fenced == json{{"result", "success"}});

  json prefixed = extract_json("{\"a\":1} trailing prose");
  CHECK(prefixed == json{{"a", 1}});

  CHECK_THROWS_AS(extract_json("no json here"), ExtractionError);

  json trailing = extract_json("{\"a\": [1, 2, ], \"b\": {\"c\": 3,},}");
  CHECK(trailing == json{{"a", json::array({1, 2})}, {"b", json{{"c", 3}}}});

  json assigned = extract_json("tasks = [\n {\"instruction\": \"x\"}\n]\nend");
  REQUIRE(assigned.is_array());
  CHECK(assigned[0]["instruction"] == "x");

  // strings containing braces and commas survive
  json tricky = extract_json(R"(prose {"s": "a } b , ] c", "n": 1} more)");
  CHECK(tricky["s"] == "a } b , ] c");

  // a broken fenced block does not hide a later valid value
  json recovered = extract_json("```json\n{broken\n```\nbut {\"ok\": true} follows");
  CHECK(recovered == json{{"ok", true}});
}

TEST_CASE("extract_json is idempotent on its own output") {
  const std::string raw = "noise ```json\n{\"b\": [1,2,], \"a\": \"x\"}\n``` tail";
  json once = extract_json(raw);
  json twice = extract_json(canonical_dump(once));
  CHECK(once == twice);
}

TEST_CASE("transcript records assembled messages verbatim") {
  Gateway gw;
  gw.bind(RoleKind::verifier, mock_backend({{"", "resp"}}));
  std::vector<ChatMessage> msgs{system_message("sys"), user_message("payload with {slots}")};
  gw.complete(RoleKind::verifier, msgs);
  REQUIRE(gw.transcript().size() == 1);
  const TranscriptEntry& entry = gw.transcript()[0];
  CHECK(entry.messages == msgs);  // the gateway never mutates prompts
  CHECK(entry.response == "resp");
  CHECK(entry.request_digest == request_digest(RoleKind::verifier, msgs));
}

TEST_CASE("scripted handlers take precedence over rules") {
  Gateway gw;
  Backend b;
  b.kind = BackendKind::mock;
  b.rules = {{"", "rule response"}};
  b.handler = [](const std::vector<ChatMessage>& msgs) {
    return "handled:" + message_text(msgs.back());
  };
  gw.bind(RoleKind::grounder, b);
  CHECK(gw.complete(RoleKind::grounder, {user_message("xy")}) == "handled:xy");
}

TEST_CASE("image parts are carried opaquely") {
  ChatMessage m{"user", {MessagePart{"text", "look"}, MessagePart{"image_ref", "base64:AAAA"}}};
  json j = m;
  ChatMessage back = j.get<ChatMessage>();
  CHECK(back == m);
  CHECK(message_text(m) == "look");  // image parts are not text
}

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <thread>

TEST_CASE("http backend posts chat completions with auth, retries, and overflow detection") {
  httplib::Server svr;
  std::atomic<int> calls{0};
  std::string seen_auth;
  std::string seen_body;
  svr.Post("/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    int n = ++calls;
    seen_auth = req.get_header_value("Authorization");
    seen_body = req.body;
    json body = json::parse(req.body);
    std::string text = body.at("messages").at(0).at("content").at(0).at("text");
    if (text.find("overflow") != std::string::npos) {
      res.status = 400;
      res.set_content(R"({"error": "maximum context length exceeded"})", "application/json");
      return;
    }
    if (text.find("flaky") != std::string::npos && n == 1) {
      res.status = 503;
      res.set_content("busy", "text/plain");
      return;
    }
    json out{{"choices",
              json::array({json{{"message", json{{"role", "assistant"},
                                                 {"content", "hello from the endpoint"}}}}})}};
    res.set_content(out.dump(), "application/json");
  });
  int port = svr.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { svr.listen_after_bind(); });
  svr.wait_until_ready();
  setenv("TASKFORGE_API_KEY", "test-key-123", 1);

  Gateway gw;
  Backend b;
  b.kind = BackendKind::http;
  b.endpoint.url = "http://127.0.0.1:" + std::to_string(port);
  b.endpoint.model = "test-model";
  b.endpoint.temperature = 0.7;
  b.endpoint.max_tokens = 64;
  b.endpoint.backoff_seconds = 0.001;
  gw.bind(RoleKind::task_generator, b);

  // plain call: wire format and auth header
  std::string out = gw.complete(RoleKind::task_generator, {user_message("plain request")});
  CHECK(out == "hello from the endpoint");
  CHECK(seen_auth == "Bearer test-key-123");
  json sent = json::parse(seen_body);
  CHECK(sent.at("model") == "test-model");
  CHECK(sent.at("temperature") == 0.7);
  CHECK(sent.at("max_tokens") == 64);
  CHECK(sent.at("messages").at(0).at("role") == "user");

  // transient 503 is retried with backoff
  calls = 0;
  CHECK(gw.complete(RoleKind::task_generator, {user_message("flaky request")}) ==
        "hello from the endpoint");
  CHECK(calls == 2);

  // context overflow surfaces as its own error type
  CHECK_THROWS_AS(gw.complete(RoleKind::task_generator, {user_message("overflow request")}),
                  ContextLengthError);

  svr.stop();
  server_thread.join();
  unsetenv("TASKFORGE_API_KEY");
}

TEST_CASE("http backend exhausts retries against a dead endpoint") {
  Gateway gw;
  Backend b;
  b.kind = BackendKind::http;
  b.endpoint.url = "http://127.0.0.1:1";  // nothing listens here
  b.endpoint.max_retries = 1;
  b.endpoint.backoff_seconds = 0.001;
  gw.bind(RoleKind::verifier, b);
  CHECK_THROWS_AS(gw.complete(RoleKind::verifier, {user_message("x")}), BackendError);
}
