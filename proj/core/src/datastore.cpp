#include "taskforge/datastore.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/executor.hpp"

#include <fstream>

namespace taskforge {

void to_json(json& j, const SftExample& v) {
  j = json{{"task_id", v.task_id},
           {"step_index", v.step_index},
           {"instruction", v.instruction},
           {"observation", v.observation},
           {"history", v.history},
           {"target_action", v.target_action},
           {"source_traj", v.source_traj}};
}

void from_json(const json& j, SftExample& v) {
  v.task_id = j.at("task_id").get<std::string>();
  v.step_index = j.at("step_index").get<int>();
  v.instruction = j.at("instruction").get<std::string>();
  v.observation = j.at("observation").get<std::string>();
  v.history = j.at("history").get<std::vector<std::string>>();
  v.target_action = j.at("target_action").get<Action>();
  v.source_traj = j.at("source_traj").get<std::string>();
}

std::vector<SftExample> export_sft(const std::vector<Trajectory>& trajs,
                                   const std::map<std::string, TaskInstance>& tasks_by_id) {
  std::vector<SftExample> out;
  for (const auto& traj : trajs) {
    if (traj.purpose != TrajectoryPurpose::task_execution || !traj.task_ref) continue;
    auto task_it = tasks_by_id.find(*traj.task_ref);
    std::string instruction =
        task_it != tasks_by_id.end() ? task_it->second.goal.instruction : std::string();
    std::vector<std::string> history;
    for (const auto& step : traj.steps) {
      SftExample ex;
      ex.task_id = *traj.task_ref;
      ex.step_index = step.index;
      ex.instruction = instruction;
      ex.observation = render_text(step.observation);
      ex.history = history;
      ex.target_action = step.action;
      ex.source_traj = traj.traj_id;
      out.push_back(std::move(ex));
      history.push_back(action_string(step.action, step.observation));
    }
  }
  return out;
}

FilterResult filter_successful(const std::vector<Trajectory>& trajs,
                               const std::map<std::string, JudgmentRow>& judgments_by_traj) {
  FilterResult out;
  for (const auto& t : trajs) {
    auto it = judgments_by_traj.find(t.traj_id);
    if (it == judgments_by_traj.end()) {
      ++out.unjudged;
      continue;
    }
    const VerifierJudgment& j = it->second.judgment;
    if (j.verifier_error) {
      ++out.error_flagged;
      continue;
    }
    if (j.result != JudgmentResult::success) {
      ++out.failed;
      continue;
    }
    out.kept.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JsonlStore
// ---------------------------------------------------------------------------

void JsonlStore::open(std::filesystem::path path, std::string id_field) {
  path_ = std::move(path);
  id_field_ = std::move(id_field);
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains(id_field_)) ids_.insert(j.at(id_field_).get<std::string>());
  }
}

bool JsonlStore::append(const json& row) {
  std::lock_guard lock(mu_);
  std::string id = row.at(id_field_).get<std::string>();
  if (ids_.count(id)) return false;
  json stamped = row;
  stamped["v"] = kSchemaVersion;
  std::ofstream out(path_, std::ios::app);
  out << canonical_dump(stamped) << "\n";
  ids_.insert(id);
  return true;
}

std::vector<json> JsonlStore::rows() const {
  std::lock_guard lock(mu_);
  std::vector<json> out;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::size_t JsonlStore::size() const {
  std::lock_guard lock(mu_);
  return ids_.size();
}

bool JsonlStore::contains(const std::string& id) const {
  std::lock_guard lock(mu_);
  return ids_.count(id) > 0;
}

// ---------------------------------------------------------------------------
// RunStore
// ---------------------------------------------------------------------------

RunStore::RunStore(std::filesystem::path root, std::string run_id)
    : dir_(root / run_id), run_id_(std::move(run_id)) {
  std::filesystem::create_directories(dir_);
  std::filesystem::create_directories(dir_ / "blobs");
  std::filesystem::create_directories(dir_ / "reports");
  std::filesystem::create_directories(dir_ / "contexts");
  contexts_.open(dir_ / "contexts.jsonl", "context_id");
  templates_.open(dir_ / "templates.jsonl", "template_id");
  tasks_.open(dir_ / "tasks.jsonl", "task_id");
  trajectories_.open(dir_ / "trajectories.jsonl", "traj_id");
  judgments_.open(dir_ / "judgments.jsonl", "traj_id");
  sft_.open(dir_ / "sft.jsonl", "sft_id");
  rollouts_.open(dir_ / "rollouts.jsonl", "rollout_id");
  rejects_.open(dir_ / "rejects.jsonl", "reject_id");

  auto manifest_path = dir_ / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    manifest_ = json::parse(in);
    stage_seq_ = static_cast<int>(manifest_.value("stages", json::object()).size());
  } else {
    manifest_ = json{{"v", kSchemaVersion},
                     {"run_id", run_id_},
                     {"config_digest", ""},
                     {"stages", json::object()}};
    write_manifest();
  }
}

std::string RunStore::put_blob(const json& content) {
  std::string bytes = canonical_dump(content);
  std::string digest = sha256_hex(bytes);
  auto path = dir_ / "blobs" / (digest + ".json");
  if (!std::filesystem::exists(path)) {
    std::ofstream out(path);
    out << bytes;
  }
  return digest;
}

json RunStore::get_blob(const std::string& digest) const {
  auto path = dir_ / "blobs" / (digest + ".json");
  std::ifstream in(path);
  if (!in) throw Error("missing blob: " + digest);
  return json::parse(in);
}

json RunStore::trajectory_row(const Trajectory& traj, const json& provenance) {
  json row = traj;
  for (auto& step : row.at("steps")) {
    std::string ref = put_blob(step.at("observation"));
    step.erase("observation");
    step["observation_ref"] = ref;
  }
  row["provenance"] = provenance;
  return row;
}

Trajectory RunStore::load_trajectory(const json& row) const {
  json hydrated = row;
  hydrated.erase("provenance");
  hydrated.erase("v");
  for (auto& step : hydrated.at("steps")) {
    std::string ref = step.at("observation_ref").get<std::string>();
    step.erase("observation_ref");
    step["observation"] = get_blob(ref);
  }
  return hydrated.get<Trajectory>();
}

std::vector<Trajectory> RunStore::load_trajectories() const {
  std::vector<Trajectory> out;
  for (const auto& row : trajectories_.rows()) out.push_back(load_trajectory(row));
  return out;
}

std::vector<TaskInstance> RunStore::load_tasks() const {
  std::vector<TaskInstance> out;
  for (const auto& row : tasks_.rows()) out.push_back(row.get<TaskInstance>());
  return out;
}

std::vector<TaskTemplate> RunStore::load_templates() const {
  std::vector<TaskTemplate> out;
  for (const auto& row : templates_.rows()) out.push_back(row.get<TaskTemplate>());
  return out;
}

std::map<std::string, JudgmentRow> RunStore::load_judgments() const {
  std::map<std::string, JudgmentRow> out;
  for (const auto& row : judgments_.rows()) {
    JudgmentRow r;
    r.task_id = row.value("task_id", std::string());
    r.traj_id = row.at("traj_id").get<std::string>();
    r.judgment.result = judgment_result_from_string(row.at("result").get<std::string>());
    r.judgment.verifier_model = row.value("verifier_model", std::string());
    r.judgment.frames_used = row.value("frames_used", 1);
    r.judgment.verifier_error = row.value("verifier_error", false);
    r.judgment.screen_details = row.value("screen_details", std::string());
    r.judgment.reasoning = row.value("reasoning", std::string());
    out[r.traj_id] = r;
  }
  return out;
}

void RunStore::seal_stage(const std::string& stage, const json& info) {
  std::lock_guard lock(mu_);
  json entry = info;
  entry["seq"] = stage_seq_++;  // logical stage timestamp
  manifest_["stages"][stage] = entry;
  write_manifest();
}

bool RunStore::stage_sealed(const std::string& stage) const {
  return manifest_.at("stages").contains(stage);
}

json RunStore::manifest() const { return manifest_; }

void RunStore::set_config_digest(const std::string& digest) {
  manifest_["config_digest"] = digest;
  write_manifest();
}

void RunStore::write_manifest() {
  std::ofstream out(dir_ / "manifest.json");
  out << manifest_.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Stats
// ---------------------------------------------------------------------------

RunStats stats(RunStore& store) {
  RunStats s;
  std::map<std::string, TaskTemplate> templates_by_id;
  for (const auto& t : store.load_templates()) templates_by_id[digest_template(t)] = t;

  for (const auto& row : store.tasks().rows()) {
    TaskInstance t = row.get<TaskInstance>();
    s.tasks_by_app[t.app_name] += 1;
    auto it = templates_by_id.find(t.template_ref);
    if (it != templates_by_id.end()) {
      s.tasks_by_guideline[it->second.guideline_id] += 1;
      s.tasks_by_generator[to_string(it->second.generator_kind)] += 1;
    }
  }

  long total_steps = 0;
  int traj_count = 0;
  for (const auto& row : store.trajectories().rows()) {
    if (row.value("purpose", std::string()) != "task_execution") continue;
    ++traj_count;
    total_steps += static_cast<long>(row.at("steps").size());
  }
  if (traj_count > 0)
    s.mean_episode_length = static_cast<double>(total_steps) / traj_count;

  for (const auto& row : store.judgments().rows()) {
    ++s.attempts;
    if (row.value("result", std::string()) == "success" && !row.value("verifier_error", false))
      ++s.successes;
  }
  if (s.attempts > 0) s.yield = static_cast<double>(s.successes) / s.attempts;
  return s;
}

json stats_json(const RunStats& s) {
  json j{{"tasks_by_app", s.tasks_by_app},
         {"tasks_by_guideline", s.tasks_by_guideline},
         {"tasks_by_generator", s.tasks_by_generator},
         {"attempts", s.attempts},
         {"successes", s.successes}};
  j["yield"] = s.yield ? json(*s.yield) : json(nullptr);
  j["mean_episode_length"] =
      s.mean_episode_length ? json(*s.mean_episode_length) : json(nullptr);
  return j;
}

}  // namespace taskforge
