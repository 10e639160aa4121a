#pragma once

#include "taskforge/env.hpp"
#include "taskforge/gateway.hpp"
#include "taskforge/json.hpp"
#include "taskforge/types.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace taskforge {

struct BackendConfig {
  std::string kind = "mock";  // http | mock | replay | record
  std::string script;         // scripted handler name for mock backends
  std::string url;
  std::string model;
  std::optional<double> temperature;  // role default applied when unset
  int max_tokens = 2048;
  std::string fixture;       // replay/record fixture file
  std::string record_inner = "http";
};

struct RunConfig {
  std::string run_id = "run";
  std::uint64_t seed = 0;
  Platform platform = Platform::mobile;
  std::vector<std::string> apps;
  std::string out_dir = "runs";

  int explore_turns = 3;       // 3 mobile, 5 desktop
  int explore_steps = 15;      // 15 mobile, 25 desktop

  std::vector<std::string> guidelines;
  int tasks_per_context = 50;  // generations per guideline and context
  int max_variants = 5;        // template expansion cap
  int iterative_chains = 2;    // chains per app for the iterative generator

  int max_steps = 30;          // 30 mobile, 50 desktop
  int workers = 4;

  int verify_frames = 0;       // 0 = full trajectory

  int group_size = 8;
  int rollout_len = 16;
  int rl_max_groups = 0;       // 0 = every pool task

  std::map<std::string, BackendConfig> backends;  // keyed by role name
  std::string env_kind = "sim";
  std::string env_url;
  std::string guidelines_dir;  // extra guideline text assets
  std::string transcript;     // optional model-call transcript file
  double failure_threshold = 0.5;
};

// Parses a config object, filling platform-dependent defaults for keys the
// file leaves unset.
RunConfig parse_config(const json& j);
RunConfig load_config_file(const std::string& path);
json config_json(const RunConfig& cfg);
std::string config_digest(const RunConfig& cfg);

// Every violated key, empty when valid.
std::vector<std::string> validate_config(const RunConfig& cfg);

// Default sampling temperatures: generation/exploration 0.7, judging 0.0.
double default_temperature(RoleKind role);

void configure_gateway(Gateway& gw, const RunConfig& cfg);
std::unique_ptr<Env> build_env(const RunConfig& cfg);

// Registered guidelines for this run: built-ins for the platform plus any
// loaded from guidelines_dir, filtered by cfg.guidelines.
std::vector<GuidelinePrompt> run_guidelines(const RunConfig& cfg);

}  // namespace taskforge
