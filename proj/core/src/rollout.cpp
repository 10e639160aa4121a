#include "taskforge/rollout.hpp"

#include "taskforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace taskforge {

void to_json(json& j, const RewardedRollout& v) {
  j = json{{"task_id", v.task_id},
           {"group_id", v.group_id},
           {"member_index", v.member_index},
           {"traj_ref", v.trajectory.traj_id},
           {"reward", v.reward},
           {"advantage", v.advantage},
           {"member_error", v.member_error}};
}

std::vector<TaskInstance> build_task_pool(
    const std::vector<TaskInstance>& tasks,
    const std::map<std::string, JudgmentRow>& judgments_by_traj) {
  std::set<std::string> solvable;
  for (const auto& [traj_id, row] : judgments_by_traj) {
    if (row.judgment.result == JudgmentResult::success && !row.judgment.verifier_error)
      solvable.insert(row.task_id);
  }
  std::vector<TaskInstance> pool;
  for (const auto& t : tasks)
    if (solvable.count(t.task_id)) pool.push_back(t);
  std::sort(pool.begin(), pool.end(),
            [](const TaskInstance& a, const TaskInstance& b) { return a.task_id < b.task_id; });
  if (pool.empty()) throw EmptyPoolError("no executor-solvable tasks for RL");
  return pool;
}

std::vector<double> grpo_advantages(const std::vector<double>& rewards) {
  if (rewards.size() < 2) throw InvalidInputError("grpo_advantages: group size must be >= 2");
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());  // population variance
  std::vector<double> out(rewards.size(), 0.0);
  if (var > 0.0) {
    double std_dev = std::sqrt(var);
    for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / std_dev;
  }
  return out;
}

std::vector<RewardedRollout> group_rollout(Env& env, Gateway& gw, const TaskInstance& task,
                                           const GroupRolloutConfig& cfg) {
  if (cfg.group_size < 2) throw InvalidInputError("group_rollout: group size must be >= 2");

  // Snapshot-fork when the env supports snapshots; otherwise every member
  // takes a fresh reset with the task's own seed.
  InitialState member_init = task.initial_state;
  if (!member_init.snapshot_id) {
    try {
      auto [probe, screen] = env.reset(task.app_name, task.initial_state);
      std::string snap = env.snapshot(probe.session_id);
      member_init.snapshot_id = snap;
    } catch (const Error&) {
      member_init = task.initial_state;  // fresh resets per member
    }
  }

  ExecutorConfig exec = cfg.exec;
  exec.max_steps = cfg.rollout_len;

  std::vector<RewardedRollout> group(cfg.group_size);
  int completed = 0;
  for (int member = 0; member < cfg.group_size; ++member) {
    RewardedRollout& r = group[member];
    r.task_id = task.task_id;
    r.member_index = member;
    EpisodeSpec spec;
    spec.app = task.app_name;
    spec.initial_state = member_init;
    spec.goal = task.goal;
    spec.purpose = TrajectoryPurpose::rl_rollout;
    spec.task_ref = task.task_id;
    try {
      r.trajectory = run_episode(env, gw, spec, exec);
      VerifyConfig vc = cfg.verify;
      vc.frames = cfg.verify_frames;
      r.reward = reward(verify(gw, task, r.trajectory, vc));
      ++completed;
    } catch (const Error&) {
      r.reward = 0;
      r.member_error = true;
    }
  }
  if (completed < 2) throw EnvError("group_rollout: fewer than 2 members completed");

  std::vector<double> rewards;
  for (const auto& r : group) rewards.push_back(static_cast<double>(r.reward));
  std::vector<double> adv = grpo_advantages(rewards);
  std::string group_id = task.task_id.substr(0, 16) + "-g";
  for (int i = 0; i < cfg.group_size; ++i) {
    group[i].advantage = adv[i];
    group[i].group_id = group_id;
  }
  return group;
}

}  // namespace taskforge
