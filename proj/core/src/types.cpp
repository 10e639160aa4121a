#include "taskforge/types.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace taskforge {

// ---------------------------------------------------------------------------
// Enum string maps
// ---------------------------------------------------------------------------

std::string to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::autoplay: return "autoplay";
    case GeneratorKind::no_exploration: return "no_exploration";
    case GeneratorKind::iterative: return "iterative";
    case GeneratorKind::manual: return "manual";
  }
  throw ValidationError("bad GeneratorKind");
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  if (s == "autoplay") return GeneratorKind::autoplay;
  if (s == "no_exploration") return GeneratorKind::no_exploration;
  if (s == "iterative") return GeneratorKind::iterative;
  if (s == "manual") return GeneratorKind::manual;
  throw ValidationError("unknown generator kind: " + s);
}

std::string to_string(ActionKind k) {
  switch (k) {
    case ActionKind::click: return "click";
    case ActionKind::long_press: return "long_press";
    case ActionKind::input_text: return "input_text";
    case ActionKind::open_app: return "open_app";
    case ActionKind::scroll: return "scroll";
    case ActionKind::wait: return "wait";
    case ActionKind::navigate_back: return "navigate_back";
    case ActionKind::navigate_home: return "navigate_home";
    case ActionKind::terminate: return "terminate";
    case ActionKind::answer: return "answer";
  }
  throw ValidationError("bad ActionKind");
}

ActionKind action_kind_from_string(const std::string& s) {
  if (s == "click") return ActionKind::click;
  if (s == "long_press") return ActionKind::long_press;
  if (s == "input_text") return ActionKind::input_text;
  if (s == "open_app") return ActionKind::open_app;
  if (s == "scroll") return ActionKind::scroll;
  if (s == "wait") return ActionKind::wait;
  if (s == "navigate_back") return ActionKind::navigate_back;
  if (s == "navigate_home") return ActionKind::navigate_home;
  if (s == "terminate") return ActionKind::terminate;
  if (s == "answer") return ActionKind::answer;
  throw ValidationError("unknown action kind: " + s);
}

std::string to_string(ScrollDirection d) {
  switch (d) {
    case ScrollDirection::up: return "up";
    case ScrollDirection::down: return "down";
    case ScrollDirection::left: return "left";
    case ScrollDirection::right: return "right";
  }
  throw ValidationError("bad ScrollDirection");
}

ScrollDirection scroll_direction_from_string(const std::string& s) {
  if (s == "up") return ScrollDirection::up;
  if (s == "down") return ScrollDirection::down;
  if (s == "left") return ScrollDirection::left;
  if (s == "right") return ScrollDirection::right;
  throw ValidationError("unknown scroll direction: " + s);
}

std::string to_string(TrajectoryPurpose p) {
  switch (p) {
    case TrajectoryPurpose::exploration: return "exploration";
    case TrajectoryPurpose::task_execution: return "task_execution";
    case TrajectoryPurpose::rl_rollout: return "rl_rollout";
  }
  throw ValidationError("bad TrajectoryPurpose");
}

TrajectoryPurpose trajectory_purpose_from_string(const std::string& s) {
  if (s == "exploration") return TrajectoryPurpose::exploration;
  if (s == "task_execution") return TrajectoryPurpose::task_execution;
  if (s == "rl_rollout") return TrajectoryPurpose::rl_rollout;
  throw ValidationError("unknown trajectory purpose: " + s);
}

std::string to_string(Platform p) {
  return p == Platform::mobile ? "mobile" : "desktop";
}

Platform platform_from_string(const std::string& s) {
  if (s == "mobile") return Platform::mobile;
  if (s == "desktop") return Platform::desktop;
  throw ValidationError("unknown platform: " + s);
}

std::string to_string(JudgmentResult r) {
  return r == JudgmentResult::success ? "success" : "fail";
}

JudgmentResult judgment_result_from_string(const std::string& s) {
  if (s == "success") return JudgmentResult::success;
  if (s == "fail") return JudgmentResult::fail;
  throw ValidationError("unknown judgment result: " + s);
}

// ---------------------------------------------------------------------------
// Text normalization and placeholders
// ---------------------------------------------------------------------------

std::string normalize_text(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    char mapped;
    if (std::isalnum(c)) {
      mapped = static_cast<char>(std::tolower(c));
    } else if (c >= 0x80) {
      mapped = static_cast<char>(c);  // non-ASCII bytes pass through
    } else {
      mapped = ' ';  // punctuation and whitespace collapse
    }
    if (mapped == ' ') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += mapped;
    }
  }
  return out;
}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool valid_param_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

}  // namespace

std::vector<std::string> find_placeholders(const std::string& instruction) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < instruction.size(); ++i) {
    if (instruction[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < instruction.size() && is_ident_char(instruction[j])) ++j;
    if (j > i + 1 && j < instruction.size() && instruction[j] == '}') {
      std::string name = instruction.substr(i + 1, j - i - 1);
      if (seen.insert(name).second) out.push_back(name);
      i = j;
    }
  }
  return out;
}

std::string substitute_placeholders(const std::string& text,
                                    const std::map<std::string, std::string>& assignment) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      if (j > i + 1 && j < text.size() && text[j] == '}') {
        std::string name = text.substr(i + 1, j - i - 1);
        auto it = assignment.find(name);
        if (it != assignment.end()) {
          out += it->second;
          i = j;
          continue;
        }
      }
    }
    out += text[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void Goal::validate() const {
  if (normalize_text(instruction).empty())
    throw ValidationError("goal instruction empty after normalization");
  if (!find_placeholders(instruction).empty())
    throw ValidationError("goal instruction has unresolved placeholders: " + instruction);
}

void TemplateParam::validate() const {
  if (!valid_param_name(name)) throw ValidationError("bad param name: '" + name + "'");
  if (possible_values.empty())
    throw ValidationError("param '" + name + "' has no possible values");
  std::set<std::string> seen;
  for (const auto& v : possible_values) {
    if (!seen.insert(normalize_text(v)).second)
      throw ValidationError("param '" + name + "' has duplicate value: '" + v + "'");
  }
}

void TaskTemplate::validate() const {
  if (normalize_text(instruction).empty()) throw ValidationError("template instruction empty");
  if (app_name.empty()) throw ValidationError("template app_name empty");
  auto holes = find_placeholders(instruction);
  std::set<std::string> hole_set(holes.begin(), holes.end());
  std::set<std::string> param_set;
  for (const auto& p : params) {
    p.validate();
    if (!param_set.insert(p.name).second)
      throw ValidationError("duplicate param: " + p.name);
  }
  for (const auto& h : holes) {
    if (!param_set.count(h))
      throw ValidationError("placeholder {" + h + "} has no matching param");
  }
  for (const auto& p : params) {
    if (!hole_set.count(p.name)) {
      // The answer field may reference params too.
      bool used_in_answer = false;
      if (answer) {
        auto ah = find_placeholders(*answer);
        used_in_answer = std::find(ah.begin(), ah.end(), p.name) != ah.end();
      }
      if (!used_in_answer)
        throw ValidationError("param '" + p.name + "' not referenced by any placeholder");
    }
  }
}

void TaskInstance::validate() const {
  goal.validate();
  if (task_id != make_task_id(app_name, goal.instruction, initial_state))
    throw ValidationError("task_id does not match content digest");
}

void Action::validate() const {
  auto require = [&](bool cond, const char* what) {
    if (!cond) throw ValidationError(std::string("action ") + to_string(kind) + ": " + what);
  };
  switch (kind) {
    case ActionKind::click:
    case ActionKind::long_press:
      require(target.has_value(), "target required");
      break;
    case ActionKind::input_text:
      require(target.has_value(), "target required");
      require(text.has_value(), "text required");
      break;
    case ActionKind::scroll:
      require(direction.has_value(), "direction required");
      break;
    case ActionKind::open_app:
      require(app.has_value() && !app->empty(), "app required");
      break;
    case ActionKind::answer:
      require(text.has_value(), "text required");
      break;
    case ActionKind::wait:
      if (seconds) require(*seconds >= 0.0, "seconds must be nonnegative");
      break;
    case ActionKind::navigate_back:
    case ActionKind::navigate_home:
    case ActionKind::terminate:
      break;
  }
}

void Trajectory::validate() const {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].index != static_cast<int>(i))
      throw ValidationError("step indices not consecutive from 0");
    bool terminal = steps[i].action.kind == ActionKind::terminate ||
                    steps[i].action.kind == ActionKind::answer;
    if (terminal && i + 1 != steps.size())
      throw ValidationError("terminal step must be last");
  }
  if (purpose == TrajectoryPurpose::task_execution && !task_ref)
    throw ValidationError("task_execution trajectory requires task_ref");
}

// ---------------------------------------------------------------------------
// Action helpers
// ---------------------------------------------------------------------------

Action make_click(Target t) {
  Action a;
  a.kind = ActionKind::click;
  a.target = t;
  return a;
}

Action make_long_press(Target t) {
  Action a;
  a.kind = ActionKind::long_press;
  a.target = t;
  return a;
}

Action make_input_text(Target t, std::string text) {
  Action a;
  a.kind = ActionKind::input_text;
  a.target = t;
  a.text = std::move(text);
  return a;
}

Action make_open_app(std::string app) {
  Action a;
  a.kind = ActionKind::open_app;
  a.app = std::move(app);
  return a;
}

Action make_scroll(ScrollDirection d) {
  Action a;
  a.kind = ActionKind::scroll;
  a.direction = d;
  return a;
}

Action make_wait(double seconds) {
  Action a;
  a.kind = ActionKind::wait;
  a.seconds = seconds;
  return a;
}

Action make_navigate_back() {
  Action a;
  a.kind = ActionKind::navigate_back;
  return a;
}

Action make_navigate_home() {
  Action a;
  a.kind = ActionKind::navigate_home;
  return a;
}

Action make_terminate() {
  Action a;
  a.kind = ActionKind::terminate;
  return a;
}

Action make_answer(std::string text) {
  Action a;
  a.kind = ActionKind::answer;
  a.text = std::move(text);
  return a;
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

void to_json(json& j, const Goal& v) {
  j = json{{"instruction", v.instruction}};
  if (v.answer) j["answer"] = *v.answer;
}

void from_json(const json& j, Goal& v) {
  v.instruction = j.at("instruction").get<std::string>();
  if (j.contains("answer") && !j.at("answer").is_null())
    v.answer = j.at("answer").get<std::string>();
  else
    v.answer.reset();
}

void to_json(json& j, const TemplateParam& v) {
  j = json{{"name", v.name},
           {"description", v.description},
           {"possible_values", v.possible_values}};
}

void from_json(const json& j, TemplateParam& v) {
  v.name = j.at("name").get<std::string>();
  v.description = j.value("description", std::string());
  v.possible_values = j.at("possible_values").get<std::vector<std::string>>();
}

void to_json(json& j, const TaskTemplate& v) {
  j = json{{"thought", v.thought},
           {"instruction", v.instruction},
           {"tag", v.tag},
           {"app_name", v.app_name},
           {"params", v.params},
           {"guideline_id", v.guideline_id},
           {"context_ref", v.context_ref},
           {"generator_kind", to_string(v.generator_kind)}};
  if (v.answer) j["answer"] = *v.answer;
}

void from_json(const json& j, TaskTemplate& v) {
  v.thought = j.value("thought", std::string());
  v.instruction = j.at("instruction").get<std::string>();
  v.tag = j.value("tag", std::string());
  v.app_name = j.at("app_name").get<std::string>();
  v.params = j.value("params", std::vector<TemplateParam>());
  v.guideline_id = j.value("guideline_id", std::string("none"));
  v.context_ref = j.value("context_ref", std::string());
  v.generator_kind = generator_kind_from_string(j.value("generator_kind", std::string("autoplay")));
  if (j.contains("answer") && !j.at("answer").is_null())
    v.answer = j.at("answer").get<std::string>();
  else
    v.answer.reset();
  v.validate();  // placeholder/param bijection enforced at decode time
}

void to_json(json& j, const InitialState& v) {
  j = json{{"app_name", v.app_name}, {"seed", v.seed}};
  if (v.snapshot_id) j["snapshot_id"] = *v.snapshot_id;
}

void from_json(const json& j, InitialState& v) {
  v.app_name = j.at("app_name").get<std::string>();
  v.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("snapshot_id") && !j.at("snapshot_id").is_null())
    v.snapshot_id = j.at("snapshot_id").get<std::string>();
  else
    v.snapshot_id.reset();
}

void to_json(json& j, const TaskInstance& v) {
  j = json{{"task_id", v.task_id},
           {"goal", v.goal},
           {"app_name", v.app_name},
           {"initial_state", v.initial_state},
           {"template_ref", v.template_ref},
           {"assignment", v.assignment}};
  if (v.category_labels) j["category_labels"] = *v.category_labels;
}

void from_json(const json& j, TaskInstance& v) {
  v.task_id = j.at("task_id").get<std::string>();
  v.goal = j.at("goal").get<Goal>();
  v.app_name = j.at("app_name").get<std::string>();
  v.initial_state = j.at("initial_state").get<InitialState>();
  v.template_ref = j.value("template_ref", std::string());
  v.assignment = j.value("assignment", std::map<std::string, std::string>());
  if (j.contains("category_labels") && !j.at("category_labels").is_null())
    v.category_labels = j.at("category_labels").get<std::vector<std::string>>();
  else
    v.category_labels.reset();
}

void to_json(json& j, const Action& v) {
  j = json{{"kind", to_string(v.kind)}};
  if (v.target) {
    if (std::holds_alternative<int>(*v.target))
      j["target"] = json{{"element", std::get<int>(*v.target)}};
    else {
      auto p = std::get<Point>(*v.target);
      j["target"] = json{{"point", json::array({p.x, p.y})}};
    }
  }
  if (v.text) j["text"] = *v.text;
  if (v.direction) j["direction"] = to_string(*v.direction);
  if (v.seconds) j["seconds"] = *v.seconds;
  if (v.app) j["app"] = *v.app;
}

void from_json(const json& j, Action& v) {
  v = Action{};
  v.kind = action_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("target") && !j.at("target").is_null()) {
    const auto& t = j.at("target");
    if (t.contains("element"))
      v.target = t.at("element").get<int>();
    else if (t.contains("point"))
      v.target = Point{t.at("point").at(0).get<int>(), t.at("point").at(1).get<int>()};
  }
  if (j.contains("text") && !j.at("text").is_null()) v.text = j.at("text").get<std::string>();
  if (j.contains("direction") && !j.at("direction").is_null())
    v.direction = scroll_direction_from_string(j.at("direction").get<std::string>());
  if (j.contains("seconds") && !j.at("seconds").is_null())
    v.seconds = j.at("seconds").get<double>();
  if (j.contains("app") && !j.at("app").is_null()) v.app = j.at("app").get<std::string>();
}

void to_json(json& j, const PlannerDecision& v) {
  j = json{{"reason", v.reason},
           {"action", v.action},
           {"element_description", v.element_description},
           {"text", v.text},
           {"direction", v.direction},
           {"answer", v.answer},
           {"app_name", v.app_name}};
}

void from_json(const json& j, PlannerDecision& v) {
  v.reason = j.value("reason", std::string());
  v.action = j.value("action", std::string());
  v.element_description = j.value("element_description", std::string());
  v.text = j.value("text", std::string());
  v.direction = j.value("direction", std::string());
  v.answer = j.value("answer", std::string());
  v.app_name = j.value("app_name", std::string());
}

void to_json(json& j, const Step& v) {
  j = json{{"index", v.index}, {"observation", v.observation}, {"action", v.action}};
  if (v.planner_output) j["planner_output"] = *v.planner_output;
  if (v.reflection) j["reflection"] = *v.reflection;
  if (v.action_ok) j["action_ok"] = *v.action_ok;
}

void from_json(const json& j, Step& v) {
  v = Step{};
  v.index = j.at("index").get<int>();
  v.observation = j.at("observation").get<Screen>();
  v.action = j.at("action").get<Action>();
  if (j.contains("planner_output") && !j.at("planner_output").is_null())
    v.planner_output = j.at("planner_output").get<PlannerDecision>();
  if (j.contains("reflection") && !j.at("reflection").is_null())
    v.reflection = j.at("reflection").get<std::string>();
  if (j.contains("action_ok") && !j.at("action_ok").is_null())
    v.action_ok = j.at("action_ok").get<bool>();
}

void to_json(json& j, const Trajectory& v) {
  j = json{{"traj_id", v.traj_id},
           {"purpose", to_string(v.purpose)},
           {"app_name", v.app_name},
           {"initial_state", v.initial_state},
           {"steps", v.steps},
           {"truncated", v.truncated}};
  if (v.task_ref) j["task_ref"] = *v.task_ref;
  if (v.final_answer) j["final_answer"] = *v.final_answer;
}

void from_json(const json& j, Trajectory& v) {
  v = Trajectory{};
  v.traj_id = j.at("traj_id").get<std::string>();
  v.purpose = trajectory_purpose_from_string(j.at("purpose").get<std::string>());
  v.app_name = j.at("app_name").get<std::string>();
  v.initial_state = j.at("initial_state").get<InitialState>();
  v.steps = j.at("steps").get<std::vector<Step>>();
  v.truncated = j.at("truncated").get<bool>();
  if (j.contains("task_ref") && !j.at("task_ref").is_null())
    v.task_ref = j.at("task_ref").get<std::string>();
  if (j.contains("final_answer") && !j.at("final_answer").is_null())
    v.final_answer = j.at("final_answer").get<std::string>();
}

void to_json(json& j, const MemorySummary& v) {
  j = json{{"action_summary", v.action_summary},
           {"data_stored", v.data_stored},
           {"source_traj", v.source_traj}};
}

void from_json(const json& j, MemorySummary& v) {
  v.action_summary = j.at("action_summary").get<std::string>();
  v.data_stored = j.at("data_stored").get<std::string>();
  v.source_traj = j.at("source_traj").get<std::string>();
}

void to_json(json& j, const ContextTurn& v) {
  j = json{{"trajectory", v.trajectory}, {"summary_error", v.summary_error}};
  if (v.summary) j["summary"] = *v.summary;
}

void from_json(const json& j, ContextTurn& v) {
  v = ContextTurn{};
  v.trajectory = j.at("trajectory").get<Trajectory>();
  v.summary_error = j.value("summary_error", false);
  if (j.contains("summary") && !j.at("summary").is_null())
    v.summary = j.at("summary").get<MemorySummary>();
}

void to_json(json& j, const EnvironmentContext& v) {
  j = json{{"app_name", v.app_name}, {"turns", v.turns}};
}

void from_json(const json& j, EnvironmentContext& v) {
  v.app_name = j.at("app_name").get<std::string>();
  v.turns = j.at("turns").get<std::vector<ContextTurn>>();
}

void to_json(json& j, const GuidelinePrompt& v) {
  j = json{{"guideline_id", v.guideline_id},
           {"platform", to_string(v.platform)},
           {"title", v.title},
           {"body", v.body}};
}

void from_json(const json& j, GuidelinePrompt& v) {
  v.guideline_id = j.at("guideline_id").get<std::string>();
  v.platform = platform_from_string(j.at("platform").get<std::string>());
  v.title = j.value("title", std::string());
  v.body = j.at("body").get<std::string>();
}

void to_json(json& j, const VerifierJudgment& v) {
  j = json{{"screen_details", v.screen_details},
           {"reasoning", v.reasoning},
           {"result", to_string(v.result)},
           {"verifier_model", v.verifier_model},
           {"frames_used", v.frames_used},
           {"verifier_error", v.verifier_error}};
}

void from_json(const json& j, VerifierJudgment& v) {
  v.screen_details = j.value("screen_details", std::string());
  v.reasoning = j.value("reasoning", std::string());
  v.result = judgment_result_from_string(j.at("result").get<std::string>());
  v.verifier_model = j.value("verifier_model", std::string());
  v.frames_used = j.value("frames_used", 1);
  v.verifier_error = j.value("verifier_error", false);
}

// ---------------------------------------------------------------------------
// Digests
// ---------------------------------------------------------------------------

std::string canonical_task_key(const std::string& instruction, const std::string& app) {
  std::string norm = normalize_text(instruction);
  if (norm.empty()) throw InvalidInputError("canonical_task_key: empty instruction");
  json j{{"app", normalize_text(app)}, {"instruction", norm}};
  return sha256_hex(canonical_dump(j));
}

std::string make_task_id(const std::string& app, const std::string& instruction,
                         const InitialState& init) {
  json j{{"app", app}, {"instruction", normalize_text(instruction)}, {"initial_state", init}};
  return sha256_hex(canonical_dump(j));
}

std::string digest_trajectory(const Trajectory& t) {
  json j = t;
  j.erase("traj_id");
  return sha256_hex(canonical_dump(j));
}

std::string digest_template(const TaskTemplate& t) {
  json j = t;
  return sha256_hex(canonical_dump(j));
}

}  // namespace taskforge
