#include "taskforge/config.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/env_remote.hpp"
#include "taskforge/prompts.hpp"
#include "taskforge/scripted.hpp"
#include "taskforge/sim.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace taskforge {

namespace {

std::vector<std::string> default_guidelines(Platform p) {
  if (p == Platform::mobile)
    return {"feature_use", "information_retrieval", "feature_composition", "subtask_repetition"};
  return {"feature_use", "feature_composition"};
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  cfg.run_id = j.value("run_id", cfg.run_id);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.platform = platform_from_string(j.value("platform", std::string("mobile")));
  cfg.apps = j.value("apps", std::vector<std::string>{});
  cfg.out_dir = j.value("out_dir", cfg.out_dir);

  bool mobile = cfg.platform == Platform::mobile;
  cfg.explore_turns = mobile ? 3 : 5;
  cfg.explore_steps = mobile ? 15 : 25;
  cfg.max_steps = mobile ? 30 : 50;
  cfg.guidelines = default_guidelines(cfg.platform);

  if (j.contains("explore")) {
    const json& e = j.at("explore");
    cfg.explore_turns = e.value("turns", cfg.explore_turns);
    cfg.explore_steps = e.value("steps", cfg.explore_steps);
  }
  if (j.contains("generate")) {
    const json& g = j.at("generate");
    cfg.guidelines = g.value("guidelines", cfg.guidelines);
    cfg.tasks_per_context = g.value("tasks_per_context", cfg.tasks_per_context);
    cfg.max_variants = g.value("max_variants", cfg.max_variants);
    cfg.iterative_chains = g.value("iterative_chains", cfg.iterative_chains);
  }
  if (j.contains("execute")) {
    const json& e = j.at("execute");
    cfg.max_steps = e.value("max_steps", cfg.max_steps);
    cfg.workers = e.value("workers", cfg.workers);
  }
  if (j.contains("verify")) cfg.verify_frames = j.at("verify").value("frames", cfg.verify_frames);
  if (j.contains("rl")) {
    const json& r = j.at("rl");
    cfg.group_size = r.value("group_size", cfg.group_size);
    cfg.rollout_len = r.value("rollout_len", cfg.rollout_len);
    cfg.rl_max_groups = r.value("max_groups", cfg.rl_max_groups);
  }
  if (j.contains("backends")) {
    for (const auto& [role, spec] : j.at("backends").items()) {
      BackendConfig b;
      b.kind = spec.value("kind", b.kind);
      b.script = spec.value("script", b.script);
      b.url = spec.value("url", b.url);
      b.model = spec.value("model", b.model);
      if (spec.contains("temperature")) b.temperature = spec.at("temperature").get<double>();
      b.max_tokens = spec.value("max_tokens", b.max_tokens);
      b.fixture = spec.value("fixture", b.fixture);
      b.record_inner = spec.value("record_inner", b.record_inner);
      cfg.backends[role] = b;
    }
  }
  if (j.contains("env")) {
    cfg.env_kind = j.at("env").value("kind", cfg.env_kind);
    cfg.env_url = j.at("env").value("url", cfg.env_url);
  }
  cfg.guidelines_dir = j.value("guidelines_dir", cfg.guidelines_dir);
  cfg.transcript = j.value("transcript", cfg.transcript);
  cfg.failure_threshold = j.value("failure_threshold", cfg.failure_threshold);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
  return parse_config(j);
}

json config_json(const RunConfig& cfg) {
  json backends = json::object();
  for (const auto& [role, b] : cfg.backends) {
    json spec{{"kind", b.kind},       {"script", b.script},
              {"url", b.url},         {"model", b.model},
              {"max_tokens", b.max_tokens}, {"fixture", b.fixture},
              {"record_inner", b.record_inner}};
    if (b.temperature) spec["temperature"] = *b.temperature;
    backends[role] = spec;
  }
  return json{{"run_id", cfg.run_id},
              {"seed", cfg.seed},
              {"platform", to_string(cfg.platform)},
              {"apps", cfg.apps},
              {"out_dir", cfg.out_dir},
              {"explore", json{{"turns", cfg.explore_turns}, {"steps", cfg.explore_steps}}},
              {"generate", json{{"guidelines", cfg.guidelines},
                                {"tasks_per_context", cfg.tasks_per_context},
                                {"max_variants", cfg.max_variants},
                                {"iterative_chains", cfg.iterative_chains}}},
              {"execute", json{{"max_steps", cfg.max_steps}, {"workers", cfg.workers}}},
              {"verify", json{{"frames", cfg.verify_frames}}},
              {"rl", json{{"group_size", cfg.group_size},
                          {"rollout_len", cfg.rollout_len},
                          {"max_groups", cfg.rl_max_groups}}},
              {"backends", backends},
              {"env", json{{"kind", cfg.env_kind}, {"url", cfg.env_url}}},
              {"guidelines_dir", cfg.guidelines_dir},
              {"transcript", cfg.transcript},
              {"failure_threshold", cfg.failure_threshold}};
}

std::string config_digest(const RunConfig& cfg) {
  // Identifies the configuration substance: worker count affects scheduling
  // only, and run_id/out_dir only name the output location.
  json j = config_json(cfg);
  j["execute"].erase("workers");
  j.erase("run_id");
  j.erase("out_dir");
  j.erase("transcript");
  return sha256_hex(canonical_dump(j));
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> errs;
  if (cfg.run_id.empty()) errs.push_back("run_id: must be non-empty");
  if (cfg.apps.empty()) errs.push_back("apps: at least one app required");
  if (cfg.env_kind == "sim") {
    for (const auto& a : cfg.apps)
      if (!find_app(a)) errs.push_back("apps: unknown sim app '" + a + "'");
  } else if (cfg.env_kind == "remote") {
    if (cfg.env_url.empty()) errs.push_back("env.url: required for remote env");
  } else {
    errs.push_back("env.kind: must be sim or remote");
  }
  if (cfg.explore_turns < 1) errs.push_back("explore.turns: must be >= 1");
  if (cfg.explore_steps < 1) errs.push_back("explore.steps: must be >= 1");
  if (cfg.tasks_per_context < 1) errs.push_back("generate.tasks_per_context: must be >= 1");
  if (cfg.max_variants < 1) errs.push_back("generate.max_variants: must be >= 1");
  if (cfg.max_steps < 1) errs.push_back("execute.max_steps: must be >= 1");
  if (cfg.workers < 1) errs.push_back("execute.workers: must be >= 1");
  if (cfg.verify_frames < 0) errs.push_back("verify.frames: must be >= 0");
  if (cfg.group_size < 2) errs.push_back("rl.group_size: must be >= 2");
  if (cfg.rollout_len < 1) errs.push_back("rl.rollout_len: must be >= 1");
  if (cfg.failure_threshold < 0 || cfg.failure_threshold > 1)
    errs.push_back("failure_threshold: must be in [0,1]");

  std::set<std::string> guideline_ids;
  for (const auto& g : run_guidelines(cfg)) guideline_ids.insert(g.guideline_id);
  for (const auto& id : cfg.guidelines)
    if (!guideline_ids.count(id))
      errs.push_back("generate.guidelines: unknown guideline '" + id + "'");

  for (const auto& [role, b] : cfg.backends) {
    try {
      role_kind_from_string(role);
    } catch (const ValidationError&) {
      errs.push_back("backends: unknown role '" + role + "'");
      continue;
    }
    if (b.kind != "http" && b.kind != "mock" && b.kind != "replay" && b.kind != "record")
      errs.push_back("backends." + role + ".kind: unknown kind '" + b.kind + "'");
    if (b.kind == "http" && b.url.empty())
      errs.push_back("backends." + role + ".url: required for http backend");
    if ((b.kind == "replay" || b.kind == "record") && b.fixture.empty())
      errs.push_back("backends." + role + ".fixture: required for replay/record backend");
    if (b.kind == "mock" && !b.script.empty()) {
      try {
        scripted_handler(b.script);
      } catch (const ConfigError&) {
        errs.push_back("backends." + role + ".script: unknown scripted handler '" + b.script +
                       "'");
      }
    }
  }
  return errs;
}

double default_temperature(RoleKind role) {
  switch (role) {
    case RoleKind::task_generator:
    case RoleKind::explorer_planner:
      return 0.7;  // generation wants diversity
    default:
      return 0.0;  // judging wants determinism
  }
}

void configure_gateway(Gateway& gw, const RunConfig& cfg) {
  for (const auto& [role_name, b] : cfg.backends) {
    RoleKind role = role_kind_from_string(role_name);
    Backend backend;
    backend.kind = backend_kind_from_string(b.kind);
    backend.endpoint.url = b.url;
    backend.endpoint.model = b.model;
    backend.endpoint.temperature = b.temperature.value_or(default_temperature(role));
    backend.endpoint.max_tokens = b.max_tokens;
    backend.fixture_path = b.fixture;
    if (!b.record_inner.empty())
      backend.record_inner = backend_kind_from_string(b.record_inner);
    if (!b.script.empty()) backend.handler = scripted_handler(b.script);
    gw.bind(role, std::move(backend));
  }
}

std::unique_ptr<Env> build_env(const RunConfig& cfg) {
  if (cfg.env_kind == "remote") return std::make_unique<RemoteEnv>(cfg.env_url);
  return std::make_unique<SimEnv>();
}

std::vector<GuidelinePrompt> run_guidelines(const RunConfig& cfg) {
  std::vector<GuidelinePrompt> all;
  for (const auto& g : prompts::builtin_guidelines())
    if (g.platform == cfg.platform) all.push_back(g);
  if (!cfg.guidelines_dir.empty())
    for (auto& g : prompts::load_guidelines_dir(cfg.guidelines_dir, cfg.platform))
      all.push_back(std::move(g));

  std::vector<GuidelinePrompt> selected;
  for (const auto& id : cfg.guidelines) {
    for (const auto& g : all) {
      if (g.guideline_id == id) {
        selected.push_back(g);
        break;
      }
    }
  }
  return selected;
}

}  // namespace taskforge
