#pragma once

#include "taskforge/datastore.hpp"
#include "taskforge/env.hpp"
#include "taskforge/executor.hpp"
#include "taskforge/gateway.hpp"
#include "taskforge/types.hpp"
#include "taskforge/verifier.hpp"

#include <string>
#include <vector>

namespace taskforge {

struct RewardedRollout {
  std::string task_id;
  std::string group_id;
  int member_index = 0;  // 0..G-1
  Trajectory trajectory;
  int reward = 0;  // {0,1}
  double advantage = 0.0;
  bool member_error = false;
  bool operator==(const RewardedRollout&) const = default;
};

void to_json(json& j, const RewardedRollout& v);

// Tasks with at least one successful execution, ordered by task_id.
std::vector<TaskInstance> build_task_pool(
    const std::vector<TaskInstance>& tasks,
    const std::map<std::string, JudgmentRow>& judgments_by_traj);

// Group-relative advantages: (r - mean) / population std; all zeros when the
// group has no variance. No epsilon smoothing.
std::vector<double> grpo_advantages(const std::vector<double>& rewards);

struct GroupRolloutConfig {
  int group_size = 8;
  int rollout_len = 16;
  int verify_frames = 8;  // last-8-frames verification for RL
  ExecutorConfig exec;
  VerifyConfig verify;
};

// G independent episodes from the identical initial state (snapshot-forked
// when the env supports it, fresh seeded resets otherwise), each verified and
// rewarded; advantages attached. Throws when fewer than 2 members complete.
std::vector<RewardedRollout> group_rollout(Env& env, Gateway& gw, const TaskInstance& task,
                                           const GroupRolloutConfig& cfg);

}  // namespace taskforge
