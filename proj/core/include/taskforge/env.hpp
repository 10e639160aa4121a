#pragma once

#include "taskforge/screen.hpp"
#include "taskforge/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace taskforge {

enum class EnvBackend { sim, remote };

struct EnvSession {
  std::string session_id;
  EnvBackend backend = EnvBackend::sim;
  std::string app_name;
  int step_count = 0;
};

struct ActionOutcome {
  bool ok = true;
  std::string note;
};

// Uniform environment surface. A session is owned by exactly one worker at a
// time; implementations may serve many concurrent sessions.
class Env {
 public:
  virtual ~Env() = default;
  virtual std::vector<std::string> apps() = 0;
  virtual std::pair<EnvSession, Screen> reset(const std::string& app,
                                              const InitialState& init) = 0;
  virtual std::pair<Screen, ActionOutcome> step(const std::string& session_id,
                                                const Action& action) = 0;
  virtual std::string snapshot(const std::string& session_id) = 0;
  virtual std::pair<EnvSession, Screen> restore(const std::string& snapshot_id) = 0;
  virtual Screen observe(const std::string& session_id) = 0;
  virtual bool ended(const std::string& session_id) = 0;
  virtual EnvSession session_info(const std::string& session_id) = 0;
};

}  // namespace taskforge
