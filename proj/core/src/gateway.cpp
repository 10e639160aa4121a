#include "taskforge/gateway.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace taskforge {

// ---------------------------------------------------------------------------
// Messages
// ---------------------------------------------------------------------------

ChatMessage user_message(std::string text) {
  return ChatMessage{"user", {MessagePart{"text", std::move(text)}}};
}

ChatMessage system_message(std::string text) {
  return ChatMessage{"system", {MessagePart{"text", std::move(text)}}};
}

ChatMessage assistant_message(std::string text) {
  return ChatMessage{"assistant", {MessagePart{"text", std::move(text)}}};
}

std::string message_text(const ChatMessage& m) {
  std::string out;
  for (const auto& p : m.parts)
    if (p.type == "text") out += p.value;
  return out;
}

std::string messages_text(const std::vector<ChatMessage>& msgs) {
  std::string out;
  for (const auto& m : msgs) {
    out += message_text(m);
    out += '\n';
  }
  return out;
}

void to_json(json& j, const MessagePart& p) { j = json{{"type", p.type}, {"value", p.value}}; }

void from_json(const json& j, MessagePart& p) {
  p.type = j.at("type").get<std::string>();
  p.value = j.at("value").get<std::string>();
}

void to_json(json& j, const ChatMessage& m) { j = json{{"role", m.role}, {"parts", m.parts}}; }

void from_json(const json& j, ChatMessage& m) {
  m.role = j.at("role").get<std::string>();
  m.parts = j.at("parts").get<std::vector<MessagePart>>();
}

// ---------------------------------------------------------------------------
// Roles / backends
// ---------------------------------------------------------------------------

std::string to_string(RoleKind r) {
  switch (r) {
    case RoleKind::explorer_planner: return "explorer_planner";
    case RoleKind::summarizer: return "summarizer";
    case RoleKind::task_generator: return "task_generator";
    case RoleKind::executor_planner: return "executor_planner";
    case RoleKind::grounder: return "grounder";
    case RoleKind::reflector: return "reflector";
    case RoleKind::verifier: return "verifier";
    case RoleKind::categorizer: return "categorizer";
  }
  throw ValidationError("bad RoleKind");
}

RoleKind role_kind_from_string(const std::string& s) {
  for (RoleKind r : all_roles())
    if (to_string(r) == s) return r;
  throw ValidationError("unknown model role: " + s);
}

const std::vector<RoleKind>& all_roles() {
  static const std::vector<RoleKind> roles = {
      RoleKind::explorer_planner, RoleKind::summarizer, RoleKind::task_generator,
      RoleKind::executor_planner, RoleKind::grounder,   RoleKind::reflector,
      RoleKind::verifier,         RoleKind::categorizer};
  return roles;
}

std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::http: return "http";
    case BackendKind::mock: return "mock";
    case BackendKind::replay: return "replay";
    case BackendKind::record: return "record";
  }
  throw ValidationError("bad BackendKind");
}

BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "http") return BackendKind::http;
  if (s == "mock") return BackendKind::mock;
  if (s == "replay") return BackendKind::replay;
  if (s == "record") return BackendKind::record;
  throw ValidationError("unknown backend kind: " + s);
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

FixtureStore::FixtureStore(std::string path) : path_(std::move(path)) { load(); }

void FixtureStore::load() {
  std::lock_guard lock(mu_);
  entries_.clear();
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    entries_[j.at("request_digest").get<std::string>()] = j.at("response").get<std::string>();
  }
}

std::optional<std::string> FixtureStore::lookup(const std::string& digest) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void FixtureStore::record(const std::string& digest, const std::string& response) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(digest);
  if (it != entries_.end()) {
    if (it->second != response)
      throw FixtureConflictError("fixture digest recorded with a different response: " + digest);
    return;
  }
  entries_[digest] = response;
  std::ofstream out(path_, std::ios::app);
  json j{{"v", 1}, {"request_digest", digest}, {"response", response}};
  out << canonical_dump(j) << "\n";
}

std::string request_digest(RoleKind role, const std::vector<ChatMessage>& messages) {
  json j{{"role", to_string(role)}, {"messages", messages}};
  return sha256_hex(canonical_dump(j));
}

// ---------------------------------------------------------------------------
// Gateway
// ---------------------------------------------------------------------------

struct Gateway::Limiter {
  explicit Limiter(int max) : max_inflight(max) {}
  void acquire() {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return inflight < max_inflight; });
    ++inflight;
  }
  void release() {
    {
      std::lock_guard lock(mu);
      --inflight;
    }
    cv.notify_one();
  }
  int max_inflight;
  int inflight = 0;
  std::mutex mu;
  std::condition_variable cv;
};

void Gateway::bind(RoleKind role, Backend backend) {
  std::lock_guard lock(mu_);
  if ((backend.kind == BackendKind::replay || backend.kind == BackendKind::record) &&
      !backend.fixture_path.empty() && !fixtures_.count(backend.fixture_path)) {
    fixtures_[backend.fixture_path] = std::make_shared<FixtureStore>(backend.fixture_path);
  }
  backends_[role] = std::move(backend);
}

bool Gateway::bound(RoleKind role) const { return backends_.count(role) > 0; }

const Backend& Gateway::backend(RoleKind role) const {
  auto it = backends_.find(role);
  if (it == backends_.end())
    throw BackendError("no backend bound for role " + to_string(role));
  return it->second;
}

void Gateway::log_call(RoleKind role, const std::string& digest,
                       const std::vector<ChatMessage>& messages, const std::string& response) {
  std::lock_guard lock(mu_);
  TranscriptEntry e{seq_++, to_string(role), digest, messages, response};
  if (!transcript_path_.empty()) {
    std::ofstream out(transcript_path_, std::ios::app);
    json j{{"seq", e.seq},
           {"role", e.role},
           {"request_digest", e.request_digest},
           {"messages", e.messages},
           {"response", e.response}};
    out << canonical_dump(j) << "\n";
  }
  transcript_.push_back(std::move(e));
}

std::string Gateway::complete(RoleKind role, const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw BackendError("complete: empty message list");
  const Backend& b = backend(role);
  std::string digest = request_digest(role, messages);
  std::string response;
  switch (b.kind) {
    case BackendKind::http:
      response = complete_http(b, role, messages);
      break;
    case BackendKind::mock:
      response = complete_mock(b, messages);
      break;
    case BackendKind::replay: {
      auto hit = fixtures_.at(b.fixture_path)->lookup(digest);
      if (!hit) throw ReplayMissError("replay miss for role " + to_string(role));
      response = *hit;
      break;
    }
    case BackendKind::record: {
      auto store = fixtures_.at(b.fixture_path);
      auto hit = store->lookup(digest);
      if (hit) {
        response = *hit;
      } else {
        response = b.record_inner == BackendKind::mock ? complete_mock(b, messages)
                                                       : complete_http(b, role, messages);
        store->record(digest, response);
      }
      break;
    }
  }
  log_call(role, digest, messages, response);
  return response;
}

std::string Gateway::complete_mock(const Backend& b, const std::vector<ChatMessage>& messages) {
  if (b.handler) return b.handler(messages);
  std::string text = messages_text(messages);
  for (const auto& rule : b.rules) {
    if (text.find(rule.pattern) != std::string::npos) return rule.response;
  }
  throw BackendError("mock backend: no rule matched");
}

namespace {

json wire_messages(const std::vector<ChatMessage>& messages) {
  json arr = json::array();
  for (const auto& m : messages) {
    json content = json::array();
    for (const auto& p : m.parts) {
      if (p.type == "text") {
        content.push_back(json{{"type", "text"}, {"text", p.value}});
      } else {
        // Opaque pass-through: base64 payload or URL, never inspected.
        content.push_back(json{{"type", "image_url"}, {"image_url", json{{"url", p.value}}}});
      }
    }
    arr.push_back(json{{"role", m.role}, {"content", content}});
  }
  return arr;
}

bool looks_like_context_overflow(const std::string& body) {
  return body.find("context_length") != std::string::npos ||
         body.find("maximum context length") != std::string::npos ||
         body.find("context window") != std::string::npos;
}

}  // namespace

std::string Gateway::complete_http(const Backend& b, RoleKind role,
                                   const std::vector<ChatMessage>& messages) {
  std::shared_ptr<Limiter> limiter;
  {
    std::lock_guard lock(mu_);
    auto& slot = limiters_[b.endpoint.url];
    if (!slot) slot = std::make_shared<Limiter>(b.endpoint.concurrency);
    limiter = slot;
  }
  limiter->acquire();
  struct Release {
    Limiter* l;
    ~Release() { l->release(); }
  } release{limiter.get()};

  json body{{"model", b.endpoint.model},
            {"messages", wire_messages(messages)},
            {"temperature", b.endpoint.temperature},
            {"max_tokens", b.endpoint.max_tokens}};

  httplib::Client cli(b.endpoint.url);
  cli.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv("TASKFORGE_API_KEY"))
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string last_error;
  for (int attempt = 0; attempt <= b.endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      auto delay = b.endpoint.backoff_seconds * static_cast<double>(1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    auto res = cli.Post("/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 400 && looks_like_context_overflow(res->body))
      throw ContextLengthError("context length rejection: " + res->body);
    if (res->status == 429 || res->status >= 500) {
      last_error = "http " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw BackendError("http " + std::to_string(res->status) + ": " + res->body);
    json j = json::parse(res->body);
    const json& msg = j.at("choices").at(0).at("message");
    if (msg.at("content").is_string()) return msg.at("content").get<std::string>();
    std::string out;
    for (const auto& part : msg.at("content"))
      if (part.value("type", "") == "text") out += part.value("text", "");
    return out;
  }
  throw BackendError("retries exhausted for role " + to_string(role) + ": " + last_error);
}

// ---------------------------------------------------------------------------
// JSON extraction
// ---------------------------------------------------------------------------

namespace {

// Strips trailing commas before } or ] outside of strings.
std::string strip_trailing_commas(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      out += c;
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && (s[j] == '}' || s[j] == ']')) continue;  // drop it
    }
    out += c;
  }
  return out;
}

// Balanced {...} or [...] region starting at `start`; npos when unbalanced.
std::size_t balanced_end(const std::string& s, std::size_t start) {
  char open = s[start];
  char close = open == '{' ? '}' : ']';
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"')
      in_string = true;
    else if (c == open)
      ++depth;
    else if (c == close) {
      --depth;
      if (depth == 0) return i;
    }
  }
  return std::string::npos;
}

std::optional<json> try_parse_region(const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{' && text[i] != '[') continue;
    std::size_t end = balanced_end(text, i);
    if (end == std::string::npos) continue;
    std::string candidate = strip_trailing_commas(text.substr(i, end - i + 1));
    json j = json::parse(candidate, nullptr, false);
    if (!j.is_discarded()) return j;
  }
  return std::nullopt;
}

}  // namespace

json extract_json(const std::string& text) {
  // Fenced blocks first.
  std::size_t pos = 0;
  while ((pos = text.find("```", pos)) != std::string::npos) {
    std::size_t body_start = text.find('\n', pos);
    if (body_start == std::string::npos) break;
    std::size_t fence_end = text.find("```", body_start);
    if (fence_end == std::string::npos) break;
    std::string block = text.substr(body_start + 1, fence_end - body_start - 1);
    if (auto j = try_parse_region(block)) return *j;
    pos = fence_end + 3;
  }
  if (auto j = try_parse_region(text)) return *j;
  throw ExtractionError("no parseable JSON found");
}

}  // namespace taskforge
