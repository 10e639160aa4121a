#include "taskforge/executor.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/prompts.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>

namespace taskforge {

namespace {

std::set<std::string> token_set(const std::string& s) {
  std::set<std::string> out;
  std::istringstream is(normalize_text(s));
  std::string tok;
  while (is >> tok) out.insert(tok);
  return out;
}

const ScreenElement* element_by_id(const Screen& s, int id) {
  for (const auto& e : s.elements)
    if (e.id == id) return &e;
  return nullptr;
}

const ScreenElement* element_at(const Screen& s, Point p) {
  const ScreenElement* best = nullptr;
  for (const auto& e : s.elements) {
    if (e.bounds.contains(p.x, p.y)) {
      if (!best || e.id > best->id) best = &e;
    }
  }
  return best;
}

std::string target_text(const Screen& s, const Target& t) {
  const ScreenElement* e = nullptr;
  if (std::holds_alternative<int>(t)) {
    e = element_by_id(s, std::get<int>(t));
  } else {
    e = element_at(s, std::get<Point>(t));
  }
  if (e) return "'" + e->text + "'";
  if (std::holds_alternative<Point>(t)) {
    auto p = std::get<Point>(t);
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
  }
  return "element " + std::to_string(std::get<int>(t));
}

std::string visible_elements_note(const Screen& s) {
  std::string out = "Visible elements:";
  for (const auto& e : s.elements) out += " [" + std::to_string(e.id) + "] '" + e.text + "'";
  return out;
}

}  // namespace

std::string action_string(const Action& a, const Screen& screen_before) {
  switch (a.kind) {
    case ActionKind::click:
      return "click " + target_text(screen_before, *a.target);
    case ActionKind::long_press:
      return "long_press " + target_text(screen_before, *a.target);
    case ActionKind::input_text:
      return "input_text '" + *a.text + "' into " + target_text(screen_before, *a.target);
    case ActionKind::scroll:
      return "scroll " + to_string(*a.direction);
    case ActionKind::open_app:
      return "open_app '" + *a.app + "'";
    case ActionKind::wait: {
      double secs = a.seconds.value_or(5.0);
      if (secs == std::floor(secs))
        return "wait " + std::to_string(static_cast<long long>(secs)) + "s";
      return "wait " + std::to_string(secs) + "s";
    }
    case ActionKind::navigate_back:
      return "navigate_back";
    case ActionKind::navigate_home:
      return "navigate_home";
    case ActionKind::terminate:
      return "terminate";
    case ActionKind::answer:
      return "answer '" + *a.text + "'";
  }
  return "unknown";
}

Target ground(Gateway& gw, const std::string& description, const Screen& screen, bool remote) {
  if (description.empty()) throw GroundingError("empty element description");
  if (remote) {
    std::string prompt = prompts::substitute(
        prompts::grounder(), {{"TASK_INSTRUCTION", description},
                              {"CURRENT_OBSERVATION", render_text(screen)},
                              {"HEIGHT", std::to_string(kDisplayHeight)},
                              {"WIDTH", std::to_string(kDisplayWidth)}});
    std::string resp = gw.complete(RoleKind::grounder, {user_message(prompt)});
    static const std::regex coord(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
    std::smatch m;
    if (!std::regex_search(resp, m, coord))
      throw GroundingError("grounder returned no coordinate: " + resp);
    return Point{std::stoi(m[1]), std::stoi(m[2])};
  }

  auto desc_tokens = token_set(description);
  if (desc_tokens.empty()) throw GroundingError("element description has no tokens");
  std::vector<const ScreenElement*> by_id;
  for (const auto& e : screen.elements) by_id.push_back(&e);
  std::sort(by_id.begin(), by_id.end(),
            [](const ScreenElement* a, const ScreenElement* b) { return a->id < b->id; });
  double best_score = 0.0;
  const ScreenElement* best = nullptr;
  for (const ScreenElement* e : by_id) {
    auto etoks = token_set(e->text);
    int shared = 0;
    for (const auto& t : desc_tokens)
      if (etoks.count(t)) ++shared;
    double score = static_cast<double>(shared) / static_cast<double>(desc_tokens.size());
    if (score > best_score) {  // ties keep the lowest id (first seen)
      best_score = score;
      best = e;
    }
  }
  if (!best || best_score <= 0.0)
    throw GroundingError("no element matches description '" + description + "'. " +
                         visible_elements_note(screen));
  return Point{best->bounds.x + best->bounds.w / 2, best->bounds.y + best->bounds.h / 2};
}

Action translate(Gateway& gw, const PlannerDecision& d, const Screen& screen, bool remote) {
  const std::string& a = d.action;
  auto need_desc = [&] {
    if (d.element_description.empty())
      throw TranslationError("action " + a + " requires element_description");
  };
  if (a == "tap_on_element") {
    need_desc();
    return make_click(ground(gw, d.element_description, screen, remote));
  }
  if (a == "long_press_on_element") {
    need_desc();
    return make_long_press(ground(gw, d.element_description, screen, remote));
  }
  if (a == "type_text_in_element") {
    need_desc();
    return make_input_text(ground(gw, d.element_description, screen, remote), d.text);
  }
  if (a == "scroll_screen") {
    std::string dir;
    for (char c : d.direction) dir += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return make_scroll(scroll_direction_from_string(dir));
  }
  if (a == "answer") return make_answer(d.answer);
  if (a == "terminate") return make_terminate();
  if (a == "navigate_back") return make_navigate_back();
  if (a == "navigate_home") return make_navigate_home();
  if (a == "wait") return make_wait(5.0);
  if (a == "open_app") {
    if (d.app_name.empty()) throw TranslationError("open_app requires app_name");
    return make_open_app(d.app_name);
  }
  throw TranslationError("unknown planner action: '" + a + "'");
}

std::string reflect(Gateway& gw, const Goal& goal, const Screen& prev, const Action& action,
                    const std::string& action_str, const Screen& cur) {
  if (gw.bound(RoleKind::reflector)) {
    try {
      std::string prompt = prompts::substitute(
          prompts::reflection(), {{"TASK_INSTRUCTION", goal.instruction},
                                  {"PREVIOUS_OBSERVATION", render_text(prev)},
                                  {"ACTION", action_str},
                                  {"CURRENT_OBSERVATION", render_text(cur)}});
      return gw.complete(RoleKind::reflector, {user_message(prompt)});
    } catch (const Error&) {
      // fall through to the deterministic fallback
    }
  }
  (void)action;
  bool changed = screen_digest(prev) != screen_digest(cur);
  return std::string("screen digest changed: ") + (changed ? "yes" : "no");
}

std::string build_planner_prompt(const Goal& goal, const std::vector<std::string>& history,
                                 const std::optional<std::string>& last_reflection,
                                 const Screen& screen) {
  std::string hist;
  for (std::size_t i = 0; i < history.size(); ++i)
    hist += std::to_string(i + 1) + ". " + history[i] + "\n";
  if (hist.empty()) hist = "none";
  // {TRANSITION_SUMMARY} is a slot with no defined producer; left empty.
  return prompts::substitute(prompts::planner(),
                             {{"TASK_INSTRUCTION", goal.instruction},
                              {"ACTION_HISTORY", hist},
                              {"REFLECTION_LLM_RESPONSE", last_reflection.value_or("none")},
                              {"TRANSITION_SUMMARY", ""},
                              {"OBSERVATION", render_text(screen)}});
}

namespace {

struct StepLoop {
  Env& env;
  Gateway& gw;
  const ExecutorConfig& cfg;
  std::string session_id;
  Goal goal;
  std::optional<std::string> memory_text;
  bool forward_terminal = true;

  std::vector<Step> steps;
  std::vector<std::string> history;
  std::optional<std::string> last_reflection;
  std::optional<std::string> final_answer;
  bool terminated = false;
  bool truncated = false;

  void run(Screen& screen) {
    int wait_injections = 0;
    for (int t = 0; t < cfg.max_steps; ++t) {
      std::vector<ChatMessage> msgs;
      if (memory_text) msgs.push_back(user_message(*memory_text));
      msgs.push_back(user_message(build_planner_prompt(goal, history, last_reflection, screen)));

      std::optional<PlannerDecision> decision;
      std::optional<Action> action;
      for (int attempt = 0; attempt <= cfg.max_reprompts; ++attempt) {
        std::string response = gw.complete(cfg.planner_role, msgs);
        try {
          PlannerDecision d = extract_json(response).get<PlannerDecision>();
          action = translate(gw, d, screen, cfg.remote_grounding);
          decision = d;
          break;
        } catch (const ExtractionError& e) {
          msgs.push_back(assistant_message(response));
          msgs.push_back(user_message(std::string("Your output was not valid JSON (") + e.what() +
                                      "). Output only the JSON object."));
        } catch (const TranslationError& e) {
          msgs.push_back(assistant_message(response));
          msgs.push_back(user_message(std::string("Invalid action: ") + e.what()));
        } catch (const GroundingError& e) {
          msgs.push_back(assistant_message(response));
          msgs.push_back(user_message(std::string("Could not ground the element. ") + e.what()));
        }
      }
      if (!action) {
        if (wait_injections >= cfg.max_wait_injections) {
          truncated = true;
          return;
        }
        ++wait_injections;
        action = make_wait(5.0);
      }

      bool terminal = action->kind == ActionKind::terminate || action->kind == ActionKind::answer;
      if (terminal && !forward_terminal) {
        terminated = true;
        if (action->kind == ActionKind::answer) final_answer = action->text;
        return;
      }

      Screen next_screen;
      ActionOutcome outcome;
      try {
        std::tie(next_screen, outcome) = env.step(session_id, *action);
      } catch (const Error&) {
        truncated = true;
        return;
      }

      std::string astr = action_string(*action, screen);
      std::string reflection = reflect(gw, goal, screen, *action, astr, next_screen);

      Step step;
      step.index = static_cast<int>(steps.size());
      step.observation = screen;
      step.planner_output = decision;
      step.action = *action;
      step.reflection = reflection;
      step.action_ok = outcome.ok;
      steps.push_back(std::move(step));
      history.push_back(astr);
      last_reflection = reflection;
      screen = next_screen;

      if (terminal) {
        terminated = true;
        if (action->kind == ActionKind::answer) final_answer = action->text;
        return;
      }
    }
    truncated = true;
  }
};

}  // namespace

Trajectory run_episode(Env& env, Gateway& gw, const EpisodeSpec& spec,
                       const ExecutorConfig& cfg) {
  auto [session, screen] = env.reset(spec.app, spec.initial_state);

  StepLoop loop{env, gw, cfg, session.session_id, spec.goal, spec.memory_text, true};
  loop.run(screen);

  Trajectory traj;
  traj.purpose = spec.purpose;
  traj.task_ref = spec.task_ref;
  traj.app_name = spec.app;
  traj.initial_state = spec.initial_state;
  traj.steps = std::move(loop.steps);
  traj.final_answer = loop.final_answer;
  traj.truncated = loop.truncated;
  traj.traj_id = digest_trajectory(traj);
  traj.validate();
  return traj;
}

SegmentResult run_segment(Env& env, Gateway& gw, const std::string& session_id, Screen& screen,
                          const Goal& goal, const ExecutorConfig& cfg,
                          const std::optional<std::string>& memory_text, bool forward_terminal) {
  StepLoop loop{env, gw, cfg, session_id, goal, memory_text, forward_terminal};
  loop.run(screen);
  SegmentResult out;
  out.steps = std::move(loop.steps);
  out.final_answer = loop.final_answer;
  out.terminated = loop.terminated;
  out.truncated = loop.truncated;
  return out;
}

}  // namespace taskforge
