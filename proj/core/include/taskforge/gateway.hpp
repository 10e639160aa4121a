#pragma once

#include "taskforge/json.hpp"

#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace taskforge {

// ---------------------------------------------------------------------------
// Messages
// ---------------------------------------------------------------------------

struct MessagePart {
  std::string type;   // "text" | "image_ref"
  std::string value;  // text, or an opaque image reference forwarded verbatim
  bool operator==(const MessagePart&) const = default;
};

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::vector<MessagePart> parts;
  bool operator==(const ChatMessage&) const = default;
};

ChatMessage user_message(std::string text);
ChatMessage system_message(std::string text);
ChatMessage assistant_message(std::string text);
std::string message_text(const ChatMessage& m);          // concatenated text parts
std::string messages_text(const std::vector<ChatMessage>& msgs);

void to_json(json& j, const MessagePart& p);
void from_json(const json& j, MessagePart& p);
void to_json(json& j, const ChatMessage& m);
void from_json(const json& j, ChatMessage& m);

// ---------------------------------------------------------------------------
// Roles and backends
// ---------------------------------------------------------------------------

enum class RoleKind {
  explorer_planner,
  summarizer,
  task_generator,
  executor_planner,
  grounder,
  reflector,
  verifier,
  categorizer
};
std::string to_string(RoleKind r);
RoleKind role_kind_from_string(const std::string& s);
const std::vector<RoleKind>& all_roles();

struct EndpointConfig {
  std::string url;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 2048;
  int max_retries = 3;
  double backoff_seconds = 0.25;
  int concurrency = 8;
};

enum class BackendKind { http, mock, replay, record };
std::string to_string(BackendKind k);
BackendKind backend_kind_from_string(const std::string& s);

struct MockRule {
  std::string pattern;  // substring matched against the concatenated prompt text
  std::string response;
};

using ScriptedHandler = std::function<std::string(const std::vector<ChatMessage>&)>;

struct Backend {
  BackendKind kind = BackendKind::mock;
  EndpointConfig endpoint;
  std::vector<MockRule> rules;
  ScriptedHandler handler;           // takes precedence over rules when set
  std::string fixture_path;          // replay/record
  BackendKind record_inner = BackendKind::http;  // what record wraps
};

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

// Append-only store of {request_digest, response} lines.
class FixtureStore {
 public:
  FixtureStore() = default;
  explicit FixtureStore(std::string path);
  void load();
  std::optional<std::string> lookup(const std::string& digest) const;
  // Records unless already present; conflicting duplicate digests error out.
  void record(const std::string& digest, const std::string& response);
  std::size_t size() const { return entries_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::map<std::string, std::string> entries_;
  mutable std::mutex mu_;
};

std::string request_digest(RoleKind role, const std::vector<ChatMessage>& messages);

// ---------------------------------------------------------------------------
// Gateway
// ---------------------------------------------------------------------------

struct TranscriptEntry {
  int seq = 0;
  std::string role;
  std::string request_digest;
  std::vector<ChatMessage> messages;
  std::string response;
};

// Single choke-point for every model call.
class Gateway {
 public:
  Gateway() = default;

  void bind(RoleKind role, Backend backend);
  bool bound(RoleKind role) const;
  const Backend& backend(RoleKind role) const;

  // Returns assistant text. HTTP transport errors are retried with
  // exponential backoff; context-length rejections surface as
  // ContextLengthError so callers can truncate and retry once.
  std::string complete(RoleKind role, const std::vector<ChatMessage>& messages);

  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  void set_transcript_path(std::string path) { transcript_path_ = std::move(path); }

 private:
  std::string complete_http(const Backend& b, RoleKind role,
                            const std::vector<ChatMessage>& messages);
  std::string complete_mock(const Backend& b, const std::vector<ChatMessage>& messages);
  void log_call(RoleKind role, const std::string& digest,
                const std::vector<ChatMessage>& messages, const std::string& response);

  std::map<RoleKind, Backend> backends_;
  std::map<std::string, std::shared_ptr<FixtureStore>> fixtures_;
  std::vector<TranscriptEntry> transcript_;
  std::string transcript_path_;
  int seq_ = 0;
  std::mutex mu_;

  struct Limiter;
  std::map<std::string, std::shared_ptr<Limiter>> limiters_;
};

// ---------------------------------------------------------------------------
// JSON extraction
// ---------------------------------------------------------------------------

// First syntactically valid JSON value in the text: fenced blocks are tried
// first, then the first balanced {...} or [...] region. Trailing commas are
// tolerated. Throws ExtractionError when nothing parses.
json extract_json(const std::string& text);

}  // namespace taskforge
