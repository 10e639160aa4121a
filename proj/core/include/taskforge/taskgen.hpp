#pragma once

#include "taskforge/env.hpp"
#include "taskforge/executor.hpp"
#include "taskforge/gateway.hpp"
#include "taskforge/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace taskforge {

struct GenerationRequest {
  // Exactly one of rendered_context / static_description is set.
  std::optional<std::string> rendered_context;
  std::optional<std::string> static_description;
  std::string context_ref;  // source trajectory id; empty for static context
  std::string app_name;
  const GuidelinePrompt* guideline = nullptr;  // null: no-guidelines mode
  Platform platform = Platform::mobile;
  int max_tasks = 50;
  void validate() const;
};

struct GenerationOutcome {
  std::vector<TaskTemplate> templates;
  std::vector<json> rejects;  // {raw, reason}
  bool extraction_failed = false;
};

// Guideline-conditioned template generation from an exploration context.
GenerationOutcome generate_templates(Gateway& gw, const GenerationRequest& req);

// Static-description baseline; hallucinated entities are accepted by design.
GenerationOutcome generate_no_exploration(Gateway& gw, const std::string& app_description,
                                          const std::string& app_name,
                                          const GuidelinePrompt* guideline, int max_tasks,
                                          Platform platform);

// Uniform sampling without replacement over the value cross product, capped.
std::vector<TaskInstance> expand(const TaskTemplate& tmpl, int max_variants, std::uint64_t seed);

// First occurrence per canonical_task_key; stable, idempotent.
std::vector<TaskInstance> dedupe(const std::vector<TaskInstance>& instances);

struct IterativeConfig {
  int min_turns = 3;
  int max_turns = 8;
  int subtask_steps = 7;
  ExecutorConfig exec;
};

struct IterativeResult {
  std::optional<TaskTemplate> tmpl;
  std::optional<TaskInstance> task;
  std::optional<Trajectory> trajectory;
  std::vector<bool> subtask_ok;
  bool retained = false;  // >= 50% of completed subtasks succeeded
};

// Propose-execute chains relabeled into one long-horizon task.
IterativeResult generate_iterative(Env& env, Gateway& gw, const std::string& app,
                                   const IterativeConfig& cfg, std::uint64_t seed);

// Parses one model-emitted task entry into a validated TaskTemplate.
TaskTemplate parse_template_entry(const json& entry, const std::string& fallback_app);

}  // namespace taskforge
