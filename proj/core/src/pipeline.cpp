#include "taskforge/pipeline.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/executor.hpp"
#include "taskforge/explorer.hpp"
#include "taskforge/prompts.hpp"
#include "taskforge/rollout.hpp"
#include "taskforge/taskgen.hpp"
#include "taskforge/verifier.hpp"
#include "taskforge/workpool.hpp"

#include <fstream>
#include <iostream>
#include <set>

namespace taskforge {

void log_json(const std::string& level, const std::string& event, const json& fields) {
  json j = fields;
  j["level"] = level;
  j["event"] = event;
  std::cerr << canonical_dump(j) << "\n";
}

Pipeline::Pipeline(RunConfig cfg)
    : cfg_(std::move(cfg)), store_(cfg_.out_dir, cfg_.run_id), env_(build_env(cfg_)) {
  configure_gateway(gw_, cfg_);
  if (!cfg_.transcript.empty()) gw_.set_transcript_path(cfg_.transcript);
  store_.set_config_digest(config_digest(cfg_));
}

void Pipeline::require_stage_output(bool ok, const std::string& what) {
  if (!ok) throw StageDependencyError("missing prior stage output: " + what);
}

void Pipeline::account_failures(int failures, int total, const std::string& stage) {
  flagged_failures_ += failures;
  if (total > 0 && static_cast<double>(failures) / total > cfg_.failure_threshold)
    throw Error("stage " + stage + ": failure threshold exceeded (" + std::to_string(failures) +
                "/" + std::to_string(total) + ")");
}

json Pipeline::provenance() const {
  std::string planner_model = "scripted";
  std::string grounder_model = "local";
  auto it = cfg_.backends.find("executor_planner");
  if (it != cfg_.backends.end() && !it->second.model.empty()) planner_model = it->second.model;
  auto git = cfg_.backends.find("grounder");
  if (git != cfg_.backends.end() && !git->second.model.empty()) grounder_model = git->second.model;
  return json{{"planner_model", planner_model},
              {"grounder_model", grounder_model},
              {"config_digest", config_digest(cfg_)}};
}

// ---------------------------------------------------------------------------
// explore
// ---------------------------------------------------------------------------

void Pipeline::explore() {
  if (store_.stage_sealed("explore")) return;
  ExploreConfig ecfg;
  ecfg.turns = cfg_.explore_turns;
  ecfg.steps_per_turn = cfg_.explore_steps;
  ecfg.exec.remote_grounding = cfg_.env_kind == "remote" && gw_.bound(RoleKind::grounder);

  std::vector<std::function<EnvironmentContext()>> jobs;
  for (const auto& app : cfg_.apps)
    jobs.push_back([this, app, ecfg] { return explore_app(*env_, gw_, app, ecfg, cfg_.seed); });
  auto results = run_jobs(jobs, cfg_.workers);

  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      ++failures;
      log_json("error", "explore_failed",
               json{{"app", cfg_.apps[i]}, {"error", results[i].error}});
      continue;
    }
    const EnvironmentContext& ctx = *results[i].value;
    std::ofstream per_app(store_.dir() / "contexts" / (ctx.app_name + ".jsonl"));
    for (std::size_t turn = 0; turn < ctx.turns.size(); ++turn) {
      const ContextTurn& t = ctx.turns[turn];
      json row = store_.trajectory_row(t.trajectory, provenance());
      json line{{"context_id", ctx.app_name + ":" + std::to_string(turn)},
                {"app_name", ctx.app_name},
                {"turn", turn},
                {"trajectory", row},
                {"summary_error", t.summary_error}};
      if (t.summary) line["summary"] = *t.summary;
      store_.contexts().append(line);
      json stamped = line;
      stamped["v"] = kSchemaVersion;
      per_app << canonical_dump(stamped) << "\n";
    }
  }
  account_failures(failures, static_cast<int>(jobs.size()), "explore");
  store_.seal_stage("explore", json{{"count", store_.contexts().size()},
                                    {"failures", failures}});
  log_json("info", "explore_done", json{{"contexts", store_.contexts().size()}});
}

// ---------------------------------------------------------------------------
// gen-tasks
// ---------------------------------------------------------------------------

namespace {

std::string rendered_context_of(const Trajectory& traj) {
  std::string out;
  for (const auto& s : traj.steps) {
    out += render_text(s.observation);
    out += "\nAction: " + action_string(s.action, s.observation) + "\n\n";
  }
  return out;
}

}  // namespace

void Pipeline::gen_tasks(GeneratorKind generator, bool use_guidelines) {
  std::string stage = "gen-tasks:" + to_string(generator) +
                      (use_guidelines ? "" : ":no-guidelines");
  if (store_.stage_sealed(stage)) return;

  std::vector<GuidelinePrompt> guidelines = run_guidelines(cfg_);
  std::vector<TaskTemplate> templates;
  std::vector<json> rejects;
  int failures = 0;
  int jobs_total = 0;

  if (generator == GeneratorKind::autoplay) {
    require_stage_output(store_.contexts().size() > 0, "contexts (run `explore` first)");
    std::vector<json> context_rows = store_.contexts().rows();
    std::vector<std::function<GenerationOutcome()>> jobs;
    for (const auto& row : context_rows) {
      Trajectory traj = store_.load_trajectory(row.at("trajectory"));
      std::string rendered = rendered_context_of(traj);
      auto enqueue = [&](const GuidelinePrompt* g) {
        GenerationRequest req;
        req.rendered_context = rendered;
        req.context_ref = traj.traj_id;
        req.app_name = row.at("app_name").get<std::string>();
        req.guideline = g;
        req.platform = cfg_.platform;
        req.max_tasks = cfg_.tasks_per_context;
        jobs.push_back([this, req] { return generate_templates(gw_, req); });
      };
      if (use_guidelines) {
        for (const auto& g : guidelines) enqueue(&g);
      } else {
        enqueue(nullptr);
      }
    }
    jobs_total = static_cast<int>(jobs.size());
    auto results = run_jobs(jobs, cfg_.workers);
    for (auto& r : results) {
      if (!r.ok()) {
        ++failures;
        continue;
      }
      if (r.value->extraction_failed) ++failures;
      for (auto& t : r.value->templates) templates.push_back(std::move(t));
      for (auto& j : r.value->rejects) rejects.push_back(std::move(j));
    }
  } else if (generator == GeneratorKind::no_exploration) {
    const auto& descs = prompts::builtin_app_descriptions();
    std::vector<std::function<GenerationOutcome()>> jobs;
    for (const auto& app : cfg_.apps) {
      auto it = descs.find(app);
      if (it == descs.end()) continue;
      std::string desc = it->second;
      auto enqueue = [&](const GuidelinePrompt* g) {
        jobs.push_back([this, desc, app, g] {
          return generate_no_exploration(gw_, desc, app, g, cfg_.tasks_per_context,
                                         cfg_.platform);
        });
      };
      if (use_guidelines) {
        for (const auto& g : guidelines) enqueue(&g);
      } else {
        enqueue(nullptr);
      }
    }
    jobs_total = static_cast<int>(jobs.size());
    auto results = run_jobs(jobs, cfg_.workers);
    for (auto& r : results) {
      if (!r.ok()) {
        ++failures;
        continue;
      }
      if (r.value->extraction_failed) ++failures;
      for (auto& t : r.value->templates) templates.push_back(std::move(t));
      for (auto& j : r.value->rejects) rejects.push_back(std::move(j));
    }
  } else if (generator == GeneratorKind::iterative) {
    IterativeConfig icfg;
    icfg.exec.planner_role = RoleKind::executor_planner;
    icfg.exec.remote_grounding = cfg_.env_kind == "remote" && gw_.bound(RoleKind::grounder);
    std::vector<std::function<IterativeResult()>> jobs;
    for (const auto& app : cfg_.apps) {
      for (int chain = 0; chain < cfg_.iterative_chains; ++chain) {
        std::uint64_t chain_seed = mix_seed(cfg_.seed, app + ":chain:" + std::to_string(chain));
        jobs.push_back(
            [this, app, icfg, chain_seed] { return generate_iterative(*env_, gw_, app, icfg, chain_seed); });
      }
    }
    jobs_total = static_cast<int>(jobs.size());
    auto results = run_jobs(jobs, cfg_.workers);
    for (auto& r : results) {
      if (!r.ok()) {
        ++failures;
        continue;
      }
      if (!r.value->retained || !r.value->tmpl) continue;
      templates.push_back(*r.value->tmpl);
      // The hindsight task and its chain trajectory enter the dataset directly.
      json task_row = *r.value->task;
      store_.tasks().append(task_row);
      store_.trajectories().append(store_.trajectory_row(*r.value->trajectory, provenance()));
    }
  } else {
    throw ConfigError("gen-tasks: unsupported generator");
  }

  // Expansion and a single final dedup pass.
  std::vector<TaskInstance> instances;
  for (const auto& t : templates) {
    json row = t;
    row["template_id"] = digest_template(t);
    store_.templates().append(row);
    if (generator == GeneratorKind::iterative) continue;  // instances came from the chain
    for (auto& inst : expand(t, cfg_.max_variants, cfg_.seed))
      instances.push_back(std::move(inst));
  }
  for (const auto& inst : dedupe(instances)) store_.tasks().append(json(inst));
  for (const auto& r : rejects) {
    json row = r;
    row["reject_id"] = sha256_hex(canonical_dump(r));
    store_.rejects().append(row);
  }

  account_failures(failures, std::max(jobs_total, 1), "gen-tasks");
  store_.seal_stage(stage, json{{"templates", store_.templates().size()},
                                {"tasks", store_.tasks().size()},
                                {"rejects", store_.rejects().size()},
                                {"failures", failures}});
  log_json("info", "gen_tasks_done",
           json{{"generator", to_string(generator)}, {"tasks", store_.tasks().size()}});
}

// ---------------------------------------------------------------------------
// run-tasks
// ---------------------------------------------------------------------------

void Pipeline::run_tasks() {
  if (store_.stage_sealed("run-tasks")) return;
  require_stage_output(store_.tasks().size() > 0, "tasks (run `gen-tasks` first)");

  std::vector<TaskInstance> tasks = store_.load_tasks();
  std::set<std::string> executed;
  for (const auto& row : store_.trajectories().rows())
    if (row.contains("task_ref")) executed.insert(row.at("task_ref").get<std::string>());

  ExecutorConfig exec;
  exec.max_steps = cfg_.max_steps;
  exec.remote_grounding = cfg_.env_kind == "remote" && gw_.bound(RoleKind::grounder);

  std::vector<std::function<Trajectory()>> jobs;
  std::vector<std::string> job_tasks;
  for (const auto& task : tasks) {
    if (executed.count(task.task_id)) continue;  // resumable
    job_tasks.push_back(task.task_id);
    jobs.push_back([this, task, exec] {
      EpisodeSpec spec;
      spec.app = task.app_name;
      spec.initial_state = task.initial_state;
      spec.goal = task.goal;
      spec.purpose = TrajectoryPurpose::task_execution;
      spec.task_ref = task.task_id;
      return run_episode(*env_, gw_, spec, exec);
    });
  }
  auto results = run_jobs(jobs, cfg_.workers);
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      ++failures;
      log_json("error", "episode_failed",
               json{{"task_id", job_tasks[i]}, {"error", results[i].error}});
      continue;
    }
    store_.trajectories().append(store_.trajectory_row(*results[i].value, provenance()));
  }
  account_failures(failures, static_cast<int>(jobs.size()), "run-tasks");
  store_.seal_stage("run-tasks", json{{"count", store_.trajectories().size()},
                                      {"failures", failures}});
  log_json("info", "run_tasks_done", json{{"trajectories", store_.trajectories().size()}});
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

void Pipeline::verify_stage() {
  if (store_.stage_sealed("verify")) return;
  require_stage_output(store_.trajectories().size() > 0,
                       "trajectories (run `run-tasks` first)");

  std::map<std::string, TaskInstance> tasks_by_id;
  for (auto& t : store_.load_tasks()) tasks_by_id[t.task_id] = t;

  VerifyConfig vcfg;
  vcfg.frames = cfg_.verify_frames;
  auto vit = cfg_.backends.find("verifier");
  if (vit != cfg_.backends.end() && !vit->second.model.empty())
    vcfg.verifier_model = vit->second.model;

  struct Item {
    TaskInstance task;
    Trajectory traj;
  };
  std::vector<Item> items;
  for (const auto& row : store_.trajectories().rows()) {
    if (row.value("purpose", std::string()) != "task_execution") continue;
    std::string traj_id = row.at("traj_id").get<std::string>();
    if (store_.judgments().contains(traj_id)) continue;  // resumable
    std::string task_ref = row.value("task_ref", std::string());
    auto it = tasks_by_id.find(task_ref);
    if (it == tasks_by_id.end()) continue;
    items.push_back(Item{it->second, store_.load_trajectory(row)});
  }

  std::vector<std::function<VerifierJudgment()>> jobs;
  for (const auto& item : items)
    jobs.push_back([this, item, vcfg] { return verify(gw_, item.task, item.traj, vcfg); });
  auto results = run_jobs(jobs, cfg_.workers);

  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    VerifierJudgment j;
    if (results[i].ok()) {
      j = *results[i].value;
    } else {
      j.result = JudgmentResult::fail;
      j.verifier_error = true;
      ++failures;
    }
    if (j.verifier_error) ++failures;
    json row = j;
    row["task_id"] = items[i].task.task_id;
    row["traj_id"] = items[i].traj.traj_id;
    store_.judgments().append(row);
  }
  account_failures(failures, std::max<int>(1, static_cast<int>(jobs.size())), "verify");
  store_.seal_stage("verify", json{{"count", store_.judgments().size()},
                                   {"failures", failures}});
  log_json("info", "verify_done", json{{"judgments", store_.judgments().size()}});
}

// ---------------------------------------------------------------------------
// export-sft
// ---------------------------------------------------------------------------

void Pipeline::export_sft_stage() {
  if (store_.stage_sealed("export-sft")) return;
  require_stage_output(store_.judgments().size() > 0, "judgments (run `verify` first)");

  std::vector<Trajectory> trajs;
  for (const auto& row : store_.trajectories().rows())
    if (row.value("purpose", std::string()) == "task_execution")
      trajs.push_back(store_.load_trajectory(row));

  FilterResult filtered = filter_successful(trajs, store_.load_judgments());
  std::map<std::string, TaskInstance> tasks_by_id;
  for (auto& t : store_.load_tasks()) tasks_by_id[t.task_id] = t;

  auto examples = export_sft(filtered.kept, tasks_by_id);
  for (const auto& ex : examples) {
    json row = ex;
    row["sft_id"] = ex.source_traj + ":" + std::to_string(ex.step_index);
    store_.sft().append(row);
  }
  store_.seal_stage("export-sft", json{{"examples", store_.sft().size()},
                                       {"kept", filtered.kept.size()},
                                       {"unjudged", filtered.unjudged},
                                       {"failed", filtered.failed},
                                       {"error_flagged", filtered.error_flagged}});
  log_json("info", "export_sft_done", json{{"examples", store_.sft().size()}});
}

// ---------------------------------------------------------------------------
// rl-rollouts
// ---------------------------------------------------------------------------

void Pipeline::rl_rollouts() {
  if (store_.stage_sealed("rl-rollouts")) return;
  require_stage_output(store_.judgments().size() > 0, "judgments (run `verify` first)");

  std::vector<TaskInstance> pool = build_task_pool(store_.load_tasks(), store_.load_judgments());
  if (cfg_.rl_max_groups > 0 && static_cast<int>(pool.size()) > cfg_.rl_max_groups)
    pool.resize(cfg_.rl_max_groups);

  GroupRolloutConfig gcfg;
  gcfg.group_size = cfg_.group_size;
  gcfg.rollout_len = cfg_.rollout_len;
  gcfg.exec.remote_grounding = cfg_.env_kind == "remote" && gw_.bound(RoleKind::grounder);

  std::vector<std::function<std::vector<RewardedRollout>()>> jobs;
  for (const auto& task : pool)
    jobs.push_back([this, task, gcfg] { return group_rollout(*env_, gw_, task, gcfg); });
  auto results = run_jobs(jobs, cfg_.workers);

  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      ++failures;
      continue;
    }
    for (const auto& r : *results[i].value) {
      store_.trajectories().append(store_.trajectory_row(r.trajectory, provenance()));
      json row = r;
      row["rollout_id"] = r.group_id + ":" + std::to_string(r.member_index);
      store_.rollouts().append(row);
    }
  }
  account_failures(failures, std::max<int>(1, static_cast<int>(jobs.size())), "rl-rollouts");
  store_.seal_stage("rl-rollouts", json{{"count", store_.rollouts().size()},
                                        {"failures", failures}});
  log_json("info", "rl_rollouts_done", json{{"rollouts", store_.rollouts().size()}});
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

void Pipeline::analyze() {
  require_stage_output(store_.tasks().size() > 0, "tasks (run `gen-tasks` first)");
  std::vector<TaskInstance> tasks = store_.load_tasks();

  CategorizeResult cats;
  if (gw_.bound(RoleKind::categorizer)) cats = categorize(gw_, tasks, cfg_.platform);

  std::map<std::string, GeneratorKind> generator_by_task;
  std::map<std::string, TaskTemplate> templates_by_id;
  for (auto& t : store_.load_templates()) templates_by_id[digest_template(t)] = t;
  for (const auto& t : tasks) {
    auto it = templates_by_id.find(t.template_ref);
    if (it != templates_by_id.end()) generator_by_task[t.task_id] = it->second.generator_kind;
  }

  std::vector<TaskOutcome> outcomes;
  for (const auto& [traj_id, row] : store_.load_judgments())
    outcomes.push_back(TaskOutcome{
        row.task_id,
        row.judgment.result == JudgmentResult::success && !row.judgment.verifier_error});

  json report = distribution_report(tasks, generator_by_task, cats.labels, outcomes,
                                    cfg_.platform);
  {
    std::ofstream out(store_.reports_dir() / "distribution.json");
    out << report.dump(2) << "\n";
  }
  {
    std::ofstream out(store_.reports_dir() / "distribution.csv");
    out << report_csv(report);
  }
  {
    std::ofstream out(store_.reports_dir() / "stats.json");
    out << stats_json(stats(store_)).dump(2) << "\n";
  }
  {
    json labels = json::object();
    for (const auto& [task_id, ls] : cats.labels) labels[task_id] = ls;
    std::ofstream out(store_.reports_dir() / "categories.json");
    out << json{{"labels", labels},
                {"dropped_labels", cats.dropped_labels},
                {"skipped_batches", cats.skipped_batches}}
               .dump(2)
        << "\n";
  }
  {
    std::ofstream out(store_.reports_dir() / "taxonomy.json");
    out << prompts::taxonomy_json(cfg_.platform).dump(2) << "\n";
  }
  if (!store_.stage_sealed("analyze"))
    store_.seal_stage("analyze", json{{"categorized", cats.labels.size()}});
  log_json("info", "analyze_done", json{{"categorized", cats.labels.size()}});
}

// ---------------------------------------------------------------------------
// Replay comparison
// ---------------------------------------------------------------------------

std::vector<std::string> compare_run_dirs(const std::filesystem::path& a,
                                          const std::filesystem::path& b) {
  namespace fs = std::filesystem;
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  std::set<std::string> rel_paths;
  for (const fs::path& root : {a, b}) {
    if (!fs::exists(root)) continue;
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) rel_paths.insert(fs::relative(e.path(), root).string());
  }
  std::vector<std::string> diffs;
  for (const auto& rel : rel_paths) {
    fs::path pa = a / rel;
    fs::path pb = b / rel;
    if (!fs::exists(pa) || !fs::exists(pb) || read(pa) != read(pb)) diffs.push_back(rel);
  }
  return diffs;
}

}  // namespace taskforge
