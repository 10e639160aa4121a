#include "taskforge/env_remote.hpp"

#include "taskforge/errors.hpp"
#include "taskforge/json.hpp"

#include <httplib.h>

#include <map>
#include <mutex>

namespace taskforge {

// ---------------------------------------------------------------------------
// Client
// ---------------------------------------------------------------------------

struct RemoteEnv::Impl {
  std::string base_url;
  httplib::Client client;
  std::map<std::string, EnvSession> sessions;
  std::map<std::string, bool> ended;
  std::mutex mu;

  explicit Impl(std::string url) : base_url(url), client(url) {
    client.set_read_timeout(60, 0);
  }

  json post(const std::string& path, const json& body) {
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) throw EnvError("remote env unreachable: " + base_url + path);
    json j = json::parse(res->body, nullptr, false);
    if (res->status != 200) {
      std::string msg = j.is_object() ? j.value("error", res->body) : res->body;
      if (res->status == 404 && msg.find("snapshot") != std::string::npos)
        throw SnapshotError(msg);
      if (res->status == 404 && msg.find("app") != std::string::npos)
        throw UnknownAppError(msg);
      if (msg.find("session ended") != std::string::npos) throw SessionEndedError(msg);
      throw EnvError("remote env error: " + msg);
    }
    if (j.is_discarded()) throw EnvError("remote env returned invalid JSON");
    return j;
  }
};

RemoteEnv::RemoteEnv(std::string base_url) : impl_(std::make_unique<Impl>(std::move(base_url))) {}
RemoteEnv::~RemoteEnv() = default;

std::vector<std::string> RemoteEnv::apps() {
  auto res = impl_->client.Get("/v1/apps");
  if (!res || res->status != 200) throw EnvError("remote env unreachable: /v1/apps");
  json j = json::parse(res->body);
  return j.at("apps").get<std::vector<std::string>>();
}

std::pair<EnvSession, Screen> RemoteEnv::reset(const std::string& app, const InitialState& init) {
  json body{{"app", app}};
  if (init.snapshot_id)
    body["snapshot_id"] = *init.snapshot_id;
  else
    body["seed"] = init.seed;
  json j = impl_->post("/v1/reset", body);
  EnvSession s;
  s.session_id = j.at("session_id").get<std::string>();
  s.backend = EnvBackend::remote;
  s.app_name = app;
  s.step_count = 0;
  Screen screen = j.at("screen").get<Screen>();
  std::lock_guard lock(impl_->mu);
  impl_->sessions[s.session_id] = s;
  impl_->ended[s.session_id] = false;
  return {s, screen};
}

std::pair<Screen, ActionOutcome> RemoteEnv::step(const std::string& session_id,
                                                 const Action& action) {
  json j = impl_->post("/v1/step", json{{"session_id", session_id}, {"action", action}});
  Screen screen = j.at("screen").get<Screen>();
  ActionOutcome outcome{j.at("ok").get<bool>(), j.value("note", std::string())};
  std::lock_guard lock(impl_->mu);
  auto it = impl_->sessions.find(session_id);
  if (it != impl_->sessions.end()) it->second.step_count += 1;
  if (action.kind == ActionKind::terminate || action.kind == ActionKind::answer)
    impl_->ended[session_id] = true;
  return {screen, outcome};
}

std::string RemoteEnv::snapshot(const std::string& session_id) {
  json j = impl_->post("/v1/snapshot", json{{"session_id", session_id}});
  return j.at("snapshot_id").get<std::string>();
}

std::pair<EnvSession, Screen> RemoteEnv::restore(const std::string& snapshot_id) {
  InitialState init;
  init.snapshot_id = snapshot_id;
  return reset("", init);
}

Screen RemoteEnv::observe(const std::string& session_id) {
  json j = impl_->post("/v1/observe", json{{"session_id", session_id}});
  return j.at("screen").get<Screen>();
}

bool RemoteEnv::ended(const std::string& session_id) {
  std::lock_guard lock(impl_->mu);
  auto it = impl_->ended.find(session_id);
  return it != impl_->ended.end() && it->second;
}

EnvSession RemoteEnv::session_info(const std::string& session_id) {
  std::lock_guard lock(impl_->mu);
  auto it = impl_->sessions.find(session_id);
  if (it == impl_->sessions.end()) throw EnvError("unknown session: " + session_id);
  return it->second;
}

// ---------------------------------------------------------------------------
// Server
// ---------------------------------------------------------------------------

struct EnvProtocolServer::Impl {
  httplib::Server server;
};

namespace {

void reply_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

template <typename Fn>
void handle(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
  try {
    json body = req.body.empty() ? json::object() : json::parse(req.body);
    json out = fn(body);
    res.set_content(out.dump(), "application/json");
  } catch (const UnknownAppError& e) {
    reply_error(res, 404, e.what());
  } catch (const SnapshotError& e) {
    reply_error(res, 404, e.what());
  } catch (const SessionEndedError& e) {
    reply_error(res, 409, e.what());
  } catch (const std::exception& e) {
    reply_error(res, 400, e.what());
  }
}

}  // namespace

EnvProtocolServer::EnvProtocolServer(Env& env) : env_(env), impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->server;

  svr.Get("/v1/apps", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"apps", env_.apps()}}.dump(), "application/json");
  });

  svr.Post("/v1/reset", [this](const httplib::Request& req, httplib::Response& res) {
    handle(req, res, [this](const json& body) {
      if (body.contains("snapshot_id")) {
        auto [session, screen] = env_.restore(body.at("snapshot_id").get<std::string>());
        return json{{"session_id", session.session_id}, {"screen", screen}};
      }
      InitialState init;
      init.app_name = body.at("app").get<std::string>();
      init.seed = body.value("seed", std::uint64_t{0});
      auto [session, screen] = env_.reset(init.app_name, init);
      return json{{"session_id", session.session_id}, {"screen", screen}};
    });
  });

  svr.Post("/v1/step", [this](const httplib::Request& req, httplib::Response& res) {
    handle(req, res, [this](const json& body) {
      auto [screen, outcome] = env_.step(body.at("session_id").get<std::string>(),
                                         body.at("action").get<Action>());
      return json{{"screen", screen}, {"ok", outcome.ok}, {"note", outcome.note}};
    });
  });

  svr.Post("/v1/snapshot", [this](const httplib::Request& req, httplib::Response& res) {
    handle(req, res, [this](const json& body) {
      return json{{"snapshot_id", env_.snapshot(body.at("session_id").get<std::string>())}};
    });
  });

  svr.Post("/v1/observe", [this](const httplib::Request& req, httplib::Response& res) {
    handle(req, res, [this](const json& body) {
      return json{{"screen", env_.observe(body.at("session_id").get<std::string>())}};
    });
  });
}

EnvProtocolServer::~EnvProtocolServer() { stop(); }

int EnvProtocolServer::start(int port) {
  auto& svr = impl_->server;
  if (port == 0) {
    port_ = svr.bind_to_any_port("127.0.0.1");
  } else {
    if (!svr.bind_to_port("127.0.0.1", port)) throw EnvError("cannot bind port");
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  svr.wait_until_ready();
  return port_;
}

void EnvProtocolServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

}  // namespace taskforge
