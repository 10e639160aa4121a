#pragma once

#include "taskforge/env.hpp"
#include "taskforge/gateway.hpp"
#include "taskforge/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taskforge {

struct ExecutorConfig {
  RoleKind planner_role = RoleKind::executor_planner;
  int max_steps = 30;          // 30 mobile, 50 desktop
  int max_reprompts = 2;       // per step, on unparseable/ungroundable output
  int max_wait_injections = 3; // per episode, then truncate
  bool remote_grounding = false;
};

struct EpisodeSpec {
  std::string app;
  InitialState initial_state;
  Goal goal;
  TrajectoryPurpose purpose = TrajectoryPurpose::task_execution;
  std::optional<std::string> task_ref;
  // Prepended as its own user message (explorer episodic memory).
  std::optional<std::string> memory_text;
};

// Human-readable action trace entry; element targets are resolved against the
// screen the action was taken on.
std::string action_string(const Action& a, const Screen& screen_before);

// Maps an element description to an interaction coordinate. Local mode scores
// shared normalized tokens against element text (ties to the lowest id) and
// returns the element center; remote mode asks the grounder role for "(x,y)".
Target ground(Gateway& gw, const std::string& description, const Screen& screen, bool remote);

// PlannerDecision -> env Action, grounding element descriptions as needed.
Action translate(Gateway& gw, const PlannerDecision& d, const Screen& screen, bool remote);

// Reflection trace for the step; falls back to a deterministic digest
// comparison when no reflector is bound or the call fails.
std::string reflect(Gateway& gw, const Goal& goal, const Screen& prev, const Action& action,
                    const std::string& action_str, const Screen& cur);

std::string build_planner_prompt(const Goal& goal, const std::vector<std::string>& history,
                                 const std::optional<std::string>& last_reflection,
                                 const Screen& screen);

// One planner->ground->step->reflect episode from a fresh reset.
Trajectory run_episode(Env& env, Gateway& gw, const EpisodeSpec& spec,
                       const ExecutorConfig& cfg);

// Continuation of an existing session (used by iterative chains). Terminal
// decisions are not forwarded to the env unless `forward_terminal` is set.
struct SegmentResult {
  std::vector<Step> steps;
  std::optional<std::string> final_answer;
  bool terminated = false;  // planner issued terminate/answer
  bool truncated = false;
};
SegmentResult run_segment(Env& env, Gateway& gw, const std::string& session_id, Screen& screen,
                          const Goal& goal, const ExecutorConfig& cfg,
                          const std::optional<std::string>& memory_text, bool forward_terminal);

}  // namespace taskforge
