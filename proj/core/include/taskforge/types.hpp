#pragma once

#include "taskforge/json.hpp"
#include "taskforge/screen.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace taskforge {

// ---------------------------------------------------------------------------
// Goals and tasks
// ---------------------------------------------------------------------------

struct Goal {
  std::string instruction;
  // Expected textual answer for information-retrieval tasks. Stored for
  // provenance; verification never requires an exact string match.
  std::optional<std::string> answer;
  bool operator==(const Goal&) const = default;
  void validate() const;
};

struct TemplateParam {
  std::string name;
  std::string description;
  std::vector<std::string> possible_values;
  bool operator==(const TemplateParam&) const = default;
  void validate() const;
};

enum class GeneratorKind { autoplay, no_exploration, iterative, manual };
std::string to_string(GeneratorKind k);
GeneratorKind generator_kind_from_string(const std::string& s);

struct TaskTemplate {
  std::string thought;
  std::string instruction;  // may contain {name} placeholders
  std::string tag;
  std::string app_name;
  std::vector<TemplateParam> params;
  std::string guideline_id;  // "none" when generated without guidelines
  std::string context_ref;   // source exploration trajectory; empty for no-exploration
  GeneratorKind generator_kind = GeneratorKind::autoplay;
  std::optional<std::string> answer;
  bool operator==(const TaskTemplate&) const = default;
  void validate() const;
};

struct InitialState {
  std::string app_name;
  std::uint64_t seed = 0;
  // When present, overrides the seed: the environment restores this snapshot.
  std::optional<std::string> snapshot_id;
  bool operator==(const InitialState&) const = default;
};

struct TaskInstance {
  std::string task_id;
  Goal goal;
  std::string app_name;
  InitialState initial_state;
  std::string template_ref;
  std::map<std::string, std::string> assignment;
  std::optional<std::vector<std::string>> category_labels;
  bool operator==(const TaskInstance&) const = default;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Actions and trajectories
// ---------------------------------------------------------------------------

enum class ActionKind {
  click,
  long_press,
  input_text,
  open_app,
  scroll,
  wait,
  navigate_back,
  navigate_home,
  terminate,
  answer
};
std::string to_string(ActionKind k);
ActionKind action_kind_from_string(const std::string& s);

enum class ScrollDirection { up, down, left, right };
std::string to_string(ScrollDirection d);
ScrollDirection scroll_direction_from_string(const std::string& s);

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

// Interaction target: an element id on the current screen, or a pixel
// coordinate resolved by hit-testing.
using Target = std::variant<int, Point>;

struct Action {
  ActionKind kind = ActionKind::wait;
  std::optional<Target> target;
  std::optional<std::string> text;
  std::optional<ScrollDirection> direction;
  std::optional<double> seconds;
  std::optional<std::string> app;
  bool operator==(const Action&) const = default;
  void validate() const;  // kind-specific field requirements
};

Action make_click(Target t);
Action make_long_press(Target t);
Action make_input_text(Target t, std::string text);
Action make_open_app(std::string app);
Action make_scroll(ScrollDirection d);
Action make_wait(double seconds = 5.0);
Action make_navigate_back();
Action make_navigate_home();
Action make_terminate();
Action make_answer(std::string text);

// Raw planner output before translation into an env Action. Field presence
// follows the planner prompt's schema.
struct PlannerDecision {
  std::string reason;
  std::string action;
  std::string element_description;
  std::string text;
  std::string direction;
  std::string answer;
  std::string app_name;
  bool operator==(const PlannerDecision&) const = default;
};

struct Step {
  int index = 0;
  Screen observation;
  std::optional<PlannerDecision> planner_output;
  Action action;
  std::optional<std::string> reflection;
  std::optional<bool> action_ok;
  bool operator==(const Step&) const = default;
};

enum class TrajectoryPurpose { exploration, task_execution, rl_rollout };
std::string to_string(TrajectoryPurpose p);
TrajectoryPurpose trajectory_purpose_from_string(const std::string& s);

struct Trajectory {
  std::string traj_id;
  TrajectoryPurpose purpose = TrajectoryPurpose::exploration;
  std::optional<std::string> task_ref;
  std::string app_name;
  InitialState initial_state;
  std::vector<Step> steps;
  std::optional<std::string> final_answer;
  bool truncated = false;
  bool operator==(const Trajectory&) const = default;
  void validate() const;
};

struct MemorySummary {
  std::string action_summary;  // bulleted
  std::string data_stored;     // bulleted
  std::string source_traj;
  bool operator==(const MemorySummary&) const = default;
};

struct ContextTurn {
  Trajectory trajectory;
  std::optional<MemorySummary> summary;
  bool summary_error = false;
  bool operator==(const ContextTurn&) const = default;
};

struct EnvironmentContext {
  std::string app_name;
  std::vector<ContextTurn> turns;
  bool operator==(const EnvironmentContext&) const = default;
};

// ---------------------------------------------------------------------------
// Guidelines and judgments
// ---------------------------------------------------------------------------

enum class Platform { mobile, desktop };
std::string to_string(Platform p);
Platform platform_from_string(const std::string& s);

struct GuidelinePrompt {
  std::string guideline_id;
  Platform platform = Platform::mobile;
  std::string title;
  std::string body;
  bool operator==(const GuidelinePrompt&) const = default;
};

enum class JudgmentResult { success, fail };
std::string to_string(JudgmentResult r);
JudgmentResult judgment_result_from_string(const std::string& s);

struct VerifierJudgment {
  std::string screen_details;
  std::string reasoning;
  JudgmentResult result = JudgmentResult::fail;
  std::string verifier_model;
  int frames_used = 1;
  bool verifier_error = false;
  bool operator==(const VerifierJudgment&) const = default;
};

// ---------------------------------------------------------------------------
// JSON encoding (canonical: sorted keys, optional fields omitted when unset)
// ---------------------------------------------------------------------------

void to_json(json& j, const Goal& v);
void from_json(const json& j, Goal& v);
void to_json(json& j, const TemplateParam& v);
void from_json(const json& j, TemplateParam& v);
void to_json(json& j, const TaskTemplate& v);
void from_json(const json& j, TaskTemplate& v);
void to_json(json& j, const InitialState& v);
void from_json(const json& j, InitialState& v);
void to_json(json& j, const TaskInstance& v);
void from_json(const json& j, TaskInstance& v);
void to_json(json& j, const Action& v);
void from_json(const json& j, Action& v);
void to_json(json& j, const PlannerDecision& v);
void from_json(const json& j, PlannerDecision& v);
void to_json(json& j, const Step& v);
void from_json(const json& j, Step& v);
void to_json(json& j, const Trajectory& v);
void from_json(const json& j, Trajectory& v);
void to_json(json& j, const MemorySummary& v);
void from_json(const json& j, MemorySummary& v);
void to_json(json& j, const ContextTurn& v);
void from_json(const json& j, ContextTurn& v);
void to_json(json& j, const EnvironmentContext& v);
void from_json(const json& j, EnvironmentContext& v);
void to_json(json& j, const GuidelinePrompt& v);
void from_json(const json& j, GuidelinePrompt& v);
void to_json(json& j, const VerifierJudgment& v);
void from_json(const json& j, VerifierJudgment& v);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Lowercase, replace punctuation with spaces, collapse runs of whitespace.
std::string normalize_text(const std::string& s);

// Placeholder names ({name} with [A-Za-z0-9_]+) in order of first occurrence,
// de-duplicated.
std::vector<std::string> find_placeholders(const std::string& instruction);

// Substitute every {name} present in the assignment; other text untouched.
std::string substitute_placeholders(const std::string& text,
                                    const std::map<std::string, std::string>& assignment);

// Normalized digest key for task dedup. The app participates.
std::string canonical_task_key(const std::string& instruction, const std::string& app);

// Deterministic task id from (app, normalized instruction, initial state).
std::string make_task_id(const std::string& app, const std::string& instruction,
                         const InitialState& init);

// Content-addressed digest of a trajectory (traj_id itself excluded).
std::string digest_trajectory(const Trajectory& t);

// Content-addressed digest of a template; used as template_ref.
std::string digest_template(const TaskTemplate& t);

// JSONL schema version stamped on every dataset line.
inline constexpr int kSchemaVersion = 1;

}  // namespace taskforge
