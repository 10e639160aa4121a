#pragma once

#include "taskforge/env.hpp"

#include <memory>
#include <string>
#include <thread>

namespace taskforge {

// HTTP client for the remote environment protocol:
//   POST /v1/reset    {app, seed | snapshot_id}   -> {session_id, screen}
//   POST /v1/step     {session_id, action}        -> {screen, ok, note}
//   POST /v1/snapshot {session_id}                -> {snapshot_id}
//   GET  /v1/apps                                 -> {apps: [...]}
// Screen JSON mirrors the Screen type; unknown fields are ignored.
class RemoteEnv : public Env {
 public:
  explicit RemoteEnv(std::string base_url);
  ~RemoteEnv() override;

  std::vector<std::string> apps() override;
  std::pair<EnvSession, Screen> reset(const std::string& app, const InitialState& init) override;
  std::pair<Screen, ActionOutcome> step(const std::string& session_id,
                                        const Action& action) override;
  std::string snapshot(const std::string& session_id) override;
  std::pair<EnvSession, Screen> restore(const std::string& snapshot_id) override;
  Screen observe(const std::string& session_id) override;
  bool ended(const std::string& session_id) override;
  EnvSession session_info(const std::string& session_id) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Serves any Env over the protocol. start() binds and runs on a background
// thread; stop() joins it.
class EnvProtocolServer {
 public:
  explicit EnvProtocolServer(Env& env);
  ~EnvProtocolServer();

  // Binds 127.0.0.1; port 0 picks an ephemeral port. Returns the bound port.
  int start(int port = 0);
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  Env& env_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace taskforge
