#include "taskforge/config.hpp"
#include "taskforge/env_remote.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/pipeline.hpp"
#include "taskforge/sim.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

namespace {

using namespace taskforge;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStageDependency = 3;
constexpr int kExitFailureThreshold = 4;

RunConfig load_and_validate(const std::string& path) {
  RunConfig cfg = load_config_file(path);
  auto errors = validate_config(cfg);
  if (!errors.empty()) {
    for (const auto& e : errors) log_json("error", "config_invalid", json{{"key", e}});
    throw ConfigError("invalid config (" + std::to_string(errors.size()) + " violations)");
  }
  return cfg;
}

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

int serve(int port, const std::string& profile) {
  if (profile != "mobile")
    throw ConfigError("env-serve: the built-in sim implements the mobile profile only");
  SimEnv env;
  EnvProtocolServer server(env);
  int bound = server.start(port);
  log_json("info", "env_serve_listening", json{{"port", bound}, {"profile", profile}});
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return kExitOk;
}

int replay_run(const std::string& config_path, std::string against) {
  RunConfig cfg = load_and_validate(config_path);
  if (against.empty()) against = cfg.out_dir + "/" + cfg.run_id;

  RunConfig replay_cfg = cfg;
  replay_cfg.run_id = cfg.run_id + "-replay";
  std::filesystem::remove_all(std::filesystem::path(replay_cfg.out_dir) / replay_cfg.run_id);

  Pipeline p(replay_cfg);
  p.explore();
  p.gen_tasks();
  p.run_tasks();
  p.verify_stage();
  p.export_sft_stage();
  p.analyze();

  auto diffs = compare_run_dirs(against,
                                std::filesystem::path(replay_cfg.out_dir) / replay_cfg.run_id);
  // The manifests differ only in run_id; everything else must be identical.
  std::erase(diffs, std::string("manifest.json"));
  if (!diffs.empty()) {
    for (const auto& d : diffs) log_json("error", "replay_diff", json{{"file", d}});
    throw Error("replay produced " + std::to_string(diffs.size()) + " differing files");
  }
  log_json("info", "replay_ok", json{{"against", against}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taskforge: explore, generate, execute, verify, and package UI-agent tasks"};
  app.require_subcommand(1);

  std::string config_path = "taskforge.json";
  std::string generator = "autoplay";
  bool no_guidelines = false;
  int port = 8080;
  std::string profile = "mobile";
  std::string against;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run config file")->capture_default_str();
  };

  CLI::App* explore = app.add_subcommand("explore", "stage 1: exploration contexts");
  add_config(explore);
  CLI::App* gen = app.add_subcommand("gen-tasks", "stage 2: task generation");
  add_config(gen);
  gen->add_option("--generator", generator, "autoplay|no-exploration|iterative")
      ->check(CLI::IsMember({"autoplay", "no-exploration", "iterative"}))
      ->capture_default_str();
  gen->add_flag("--no-guidelines", no_guidelines, "omit guideline bodies from prompts");
  CLI::App* run = app.add_subcommand("run-tasks", "execute generated tasks");
  add_config(run);
  CLI::App* verify_cmd = app.add_subcommand("verify", "judge executed trajectories");
  add_config(verify_cmd);
  CLI::App* export_cmd = app.add_subcommand("export-sft", "filter successes and export SFT rows");
  add_config(export_cmd);
  CLI::App* rl = app.add_subcommand("rl-rollouts", "group rollouts with rewards and advantages");
  add_config(rl);
  CLI::App* analyze = app.add_subcommand("analyze", "categorize tasks and emit reports");
  add_config(analyze);
  CLI::App* serve_cmd = app.add_subcommand("env-serve", "serve the sim over the env protocol");
  serve_cmd->add_option("--port", port, "listen port")->capture_default_str();
  serve_cmd->add_option("--profile", profile, "env profile")->capture_default_str();
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "re-run the pipeline from fixtures and compare outputs");
  add_config(replay_cmd);
  replay_cmd->add_option("--against", against, "run directory to compare against");

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve_cmd->parsed()) return serve(port, profile);
    if (replay_cmd->parsed()) return replay_run(config_path, against);

    RunConfig cfg = load_and_validate(config_path);
    Pipeline p(cfg);
    if (explore->parsed()) {
      p.explore();
    } else if (gen->parsed()) {
      GeneratorKind kind = GeneratorKind::autoplay;
      if (generator == "no-exploration") kind = GeneratorKind::no_exploration;
      if (generator == "iterative") kind = GeneratorKind::iterative;
      p.gen_tasks(kind, !no_guidelines);
    } else if (run->parsed()) {
      p.run_tasks();
    } else if (verify_cmd->parsed()) {
      p.verify_stage();
    } else if (export_cmd->parsed()) {
      p.export_sft_stage();
    } else if (rl->parsed()) {
      p.rl_rollouts();
    } else if (analyze->parsed()) {
      p.analyze();
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    log_json("error", "config_error", json{{"message", e.what()}});
    return kExitConfig;
  } catch (const StageDependencyError& e) {
    log_json("error", "stage_dependency_error", json{{"message", e.what()}});
    return kExitStageDependency;
  } catch (const EmptyPoolError& e) {
    log_json("error", "empty_pool", json{{"message", e.what()}});
    return kExitStageDependency;
  } catch (const std::exception& e) {
    log_json("error", "run_failed", json{{"message", e.what()}});
    return kExitFailureThreshold;
  }
}
