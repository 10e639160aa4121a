#pragma once

#include "taskforge/gateway.hpp"
#include "taskforge/sim.hpp"
#include "taskforge/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace taskforge {

struct VerifyConfig {
  int frames = 0;  // 0 = full trajectory; n > 0 = last n frames (RL uses 8)
  int max_reprompts = 2;
  std::string verifier_model = "verifier";
};

// Window over the last min(n, len) steps of a trajectory.
struct FrameWindow {
  int first = 0;
  int count = 0;
};
FrameWindow truncate_frames(const Trajectory& traj, int n);

// Interleaved (rendered observation, action) text block fed to the verifier.
std::string observations_with_actions(const Trajectory& traj, const FrameWindow& w);

// LLM judgment over (instruction, rendered observations, actions). Never
// consults privileged state; any unrecoverable model failure yields
// result=fail with verifier_error set.
VerifierJudgment verify(Gateway& gw, const TaskInstance& task, const Trajectory& traj,
                        const VerifyConfig& cfg);

// success -> 1, fail -> 0.
int reward(const VerifierJudgment& j);

// ---------------------------------------------------------------------------
// Oracle verification on sim golden tasks
// ---------------------------------------------------------------------------

struct GoldenTask {
  TaskInstance task;
  std::string checker_id;  // entity_exists | entity_absent | entity_count |
                           // field_equals | answer_matches
  std::map<std::string, std::string> checker_args;
};

// Deterministic truth from privileged sim state plus the final answer.
int oracle_verify(const GoldenTask& golden, SimEnv& env, const std::string& session_id,
                  const std::optional<std::string>& final_answer);

struct Calibration {
  std::optional<double> precision;  // unset when no positive predictions
  std::optional<double> recall;     // unset when no positive labels
  double accuracy = 0.0;
};

// judgments/oracle are aligned 0/1 vectors; judgments are the predictions.
Calibration calibrate(const std::vector<int>& judgments, const std::vector<int>& oracle);

}  // namespace taskforge
