#pragma once

#include "taskforge/env.hpp"
#include "taskforge/executor.hpp"
#include "taskforge/gateway.hpp"
#include "taskforge/types.hpp"

#include <cstdint>
#include <string>

namespace taskforge {

struct ExploreConfig {
  int turns = 3;           // 3 mobile, 5 desktop
  int steps_per_turn = 15; // 15 mobile, 25 desktop
  ExecutorConfig exec;     // planner_role is forced to explorer_planner
};

// Summarizes an exploration trajectory into the two-field memory form.
MemorySummary summarize(Gateway& gw, const Trajectory& traj);

// Episodic memory text injected into later turns: summaries of prior turns in
// order; turns whose summary failed contribute their last three rendered
// screens instead.
std::string memory_text(const EnvironmentContext& ctx);

// Goal-agnostic exploration of one app across up to `turns` turns. Failed
// turns are skipped; completed turns are preserved.
EnvironmentContext explore_app(Env& env, Gateway& gw, const std::string& app,
                               const ExploreConfig& cfg, std::uint64_t run_seed);

}  // namespace taskforge
