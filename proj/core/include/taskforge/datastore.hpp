#pragma once

#include "taskforge/json.hpp"
#include "taskforge/types.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace taskforge {

struct SftExample {
  std::string task_id;
  int step_index = 0;
  std::string instruction;
  std::string observation;  // rendered text
  std::vector<std::string> history;  // action strings of steps 0..step_index-1
  Action target_action;
  std::string source_traj;
  bool operator==(const SftExample&) const = default;
};

void to_json(json& j, const SftExample& v);
void from_json(const json& j, SftExample& v);

// One example per step of each successful execution trajectory.
std::vector<SftExample> export_sft(const std::vector<Trajectory>& trajs,
                                   const std::map<std::string, TaskInstance>& tasks_by_id);

struct JudgmentRow {
  std::string task_id;
  std::string traj_id;
  VerifierJudgment judgment;
};

struct FilterResult {
  std::vector<Trajectory> kept;
  int unjudged = 0;
  int failed = 0;
  int error_flagged = 0;
};

// Keeps trajectories judged success with verifier_error unset; counts the rest.
FilterResult filter_successful(const std::vector<Trajectory>& trajs,
                               const std::map<std::string, JudgmentRow>& judgments_by_traj);

// ---------------------------------------------------------------------------
// Run directory
// ---------------------------------------------------------------------------

// Append-only JSONL store with id-based dedup on write. Lines carry v:1.
class JsonlStore {
 public:
  JsonlStore() = default;
  void open(std::filesystem::path path, std::string id_field);
  // Returns false when the id already exists (nothing appended).
  bool append(const json& row);
  std::vector<json> rows() const;
  std::size_t size() const;
  bool contains(const std::string& id) const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::string id_field_;
  std::set<std::string> ids_;
  mutable std::mutex mu_;
};

// runs/{run_id}/{contexts,templates,tasks,trajectories,judgments,sft,
// rollouts,rejects}.jsonl + manifest.json + blobs/ + reports/.
class RunStore {
 public:
  RunStore(std::filesystem::path root, std::string run_id);

  JsonlStore& contexts() { return contexts_; }
  JsonlStore& templates() { return templates_; }
  JsonlStore& tasks() { return tasks_; }
  JsonlStore& trajectories() { return trajectories_; }
  JsonlStore& judgments() { return judgments_; }
  JsonlStore& sft() { return sft_; }
  JsonlStore& rollouts() { return rollouts_; }
  JsonlStore& rejects() { return rejects_; }

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path reports_dir() const { return dir_ / "reports"; }

  // Content-addressed observation blobs.
  std::string put_blob(const json& content);
  json get_blob(const std::string& digest) const;

  // Trajectory rows hold observation references into blobs/.
  json trajectory_row(const Trajectory& traj, const json& provenance);
  Trajectory load_trajectory(const json& row) const;
  std::vector<Trajectory> load_trajectories() const;
  std::vector<TaskInstance> load_tasks() const;
  std::vector<TaskTemplate> load_templates() const;
  std::map<std::string, JudgmentRow> load_judgments() const;

  // Manifest: config digest, per-stage counts/digests, logical stage
  // sequence numbers (no wall clock, so reruns are byte-identical).
  void seal_stage(const std::string& stage, const json& info);
  bool stage_sealed(const std::string& stage) const;
  json manifest() const;
  void set_config_digest(const std::string& digest);

 private:
  void write_manifest();

  std::filesystem::path dir_;
  std::string run_id_;
  JsonlStore contexts_, templates_, tasks_, trajectories_, judgments_, sft_, rollouts_, rejects_;
  json manifest_;
  int stage_seq_ = 0;
  std::mutex mu_;
};

struct RunStats {
  std::map<std::string, int> tasks_by_app;
  std::map<std::string, int> tasks_by_guideline;
  std::map<std::string, int> tasks_by_generator;
  int attempts = 0;
  int successes = 0;
  std::optional<double> yield;  // successes / attempts
  std::optional<double> mean_episode_length;
};

RunStats stats(RunStore& store);
json stats_json(const RunStats& s);

}  // namespace taskforge
