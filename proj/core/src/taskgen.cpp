#include "taskforge/taskgen.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/prompts.hpp"

#include <algorithm>
#include <set>

namespace taskforge {

void GenerationRequest::validate() const {
  if (rendered_context.has_value() == static_description.has_value())
    throw ValidationError("exactly one of rendered_context/static_description must be set");
  if (max_tasks < 1) throw ValidationError("max_tasks must be >= 1");
  if (static_description && static_description->empty())
    throw InvalidInputError("static description empty");
}

TaskTemplate parse_template_entry(const json& entry, const std::string& fallback_app) {
  if (!entry.is_object()) throw ValidationError("task entry is not an object");
  TaskTemplate t;
  t.thought = entry.value("thought", std::string());
  if (!entry.contains("instruction") || !entry.at("instruction").is_string())
    throw ValidationError("task entry missing instruction");
  t.instruction = entry.at("instruction").get<std::string>();
  t.tag = entry.value("tag", std::string());
  t.app_name = entry.value("app_name", fallback_app);
  if (t.app_name.empty()) t.app_name = fallback_app;
  const char* param_keys[] = {"template params", "template_params"};
  for (const char* key : param_keys) {
    if (entry.contains(key) && entry.at(key).is_object()) {
      for (const auto& [name, spec] : entry.at(key).items()) {
        TemplateParam p;
        p.name = name;
        if (spec.is_object()) {
          p.description = spec.value("description", std::string());
          if (spec.contains("possible_values"))
            p.possible_values = spec.at("possible_values").get<std::vector<std::string>>();
        }
        t.params.push_back(std::move(p));
      }
      break;
    }
  }
  if (entry.contains("answer") && entry.at("answer").is_string())
    t.answer = entry.at("answer").get<std::string>();
  t.validate();
  return t;
}

namespace {

// Keep the first and last rendered screens when the context overflows.
std::string truncate_context(const std::string& rendered) {
  auto first_break = rendered.find("\n\n");
  auto last_break = rendered.rfind("\n\n");
  if (first_break == std::string::npos || last_break <= first_break) return rendered;
  return rendered.substr(0, first_break) + "\n\n[... truncated ...]\n\n" +
         rendered.substr(last_break + 2);
}

json complete_and_extract(Gateway& gw, RoleKind role, std::vector<ChatMessage> msgs,
                          int max_reprompts) {
  for (int attempt = 0; attempt <= max_reprompts; ++attempt) {
    std::string response = gw.complete(role, msgs);
    try {
      return extract_json(response);
    } catch (const ExtractionError&) {
      if (attempt == max_reprompts) throw;
      msgs.push_back(assistant_message(response));
      msgs.push_back(
          user_message("Your output was not valid JSON. Output only the JSON value."));
    }
  }
  throw ExtractionError("unreachable");
}

GenerationOutcome run_generator(Gateway& gw, const std::string& prompt,
                                const std::string& fallback_app, int max_tasks,
                                GeneratorKind kind, const std::string& guideline_id,
                                const std::string& context_ref,
                                const std::string& retry_prompt) {
  GenerationOutcome out;
  json parsed;
  try {
    try {
      parsed = complete_and_extract(gw, RoleKind::task_generator, {user_message(prompt)}, 2);
    } catch (const ContextLengthError&) {
      // Oversize context: truncate and retry once.
      parsed =
          complete_and_extract(gw, RoleKind::task_generator, {user_message(retry_prompt)}, 0);
    }
  } catch (const Error&) {
    out.extraction_failed = true;
    return out;
  }

  json tasks = json::array();
  if (parsed.is_array())
    tasks = parsed;
  else if (parsed.is_object() && parsed.contains("tasks") && parsed.at("tasks").is_array())
    tasks = parsed.at("tasks");

  for (const auto& entry : tasks) {
    if (static_cast<int>(out.templates.size()) >= max_tasks) break;
    try {
      TaskTemplate t = parse_template_entry(entry, fallback_app);
      t.generator_kind = kind;
      t.guideline_id = guideline_id;
      t.context_ref = context_ref;
      out.templates.push_back(std::move(t));
    } catch (const ValidationError& e) {
      out.rejects.push_back(json{{"raw", entry.dump()}, {"reason", e.what()}});
    }
  }
  return out;
}

}  // namespace

GenerationOutcome generate_templates(Gateway& gw, const GenerationRequest& req) {
  req.validate();
  std::string guideline_body = req.guideline ? req.guideline->body : std::string();
  std::string guideline_id = req.guideline ? req.guideline->guideline_id : std::string("none");
  std::string platform_name = req.platform == Platform::mobile ? "Android" : "Ubuntu";

  auto build = [&](const std::string& context) {
    return prompts::substitute(prompts::task_generator(),
                               {{"PLATFORM", platform_name},
                                {"NUM_TASKS", std::to_string(req.max_tasks)},
                                {"TASK_GUIDELINE_PROMPT", guideline_body},
                                {"ENVIRONMENT_CONTEXT", context}});
  };
  std::string prompt = build(*req.rendered_context);
  std::string retry_prompt = build(truncate_context(*req.rendered_context));
  return run_generator(gw, prompt, req.app_name, req.max_tasks, GeneratorKind::autoplay,
                       guideline_id, req.context_ref, retry_prompt);
}

GenerationOutcome generate_no_exploration(Gateway& gw, const std::string& app_description,
                                          const std::string& app_name,
                                          const GuidelinePrompt* guideline, int max_tasks,
                                          Platform platform) {
  if (app_description.empty()) throw InvalidInputError("app description empty");
  (void)platform;
  std::string prompt = prompts::substitute(
      prompts::no_exploration_generator(),
      {{"app_description", app_description},
       {"NUM_TASKS", std::to_string(max_tasks)},
       {"TASK_GUIDELINE_PROMPT", guideline ? guideline->body : std::string()}});
  return run_generator(gw, prompt, app_name, max_tasks, GeneratorKind::no_exploration,
                       guideline ? guideline->guideline_id : std::string("none"),
                       /*context_ref=*/"", prompt);
}

// ---------------------------------------------------------------------------
// Expansion and dedup
// ---------------------------------------------------------------------------

std::vector<TaskInstance> expand(const TaskTemplate& tmpl, int max_variants, std::uint64_t seed) {
  tmpl.validate();
  if (max_variants < 1) throw InvalidInputError("max_variants must be >= 1");

  std::vector<std::size_t> dims;
  std::uint64_t total = 1;
  for (const auto& p : tmpl.params) {
    dims.push_back(p.possible_values.size());
    total *= p.possible_values.size();
  }
  if (tmpl.params.empty()) total = 1;

  std::uint64_t take = std::min<std::uint64_t>(total, static_cast<std::uint64_t>(max_variants));
  std::string template_id = digest_template(tmpl);
  std::uint64_t rng = mix_seed(seed, template_id);

  std::vector<std::uint64_t> chosen;
  if (total <= take) {
    for (std::uint64_t i = 0; i < total; ++i) chosen.push_back(i);
  } else if (total <= 100000) {
    std::vector<std::uint64_t> all(total);
    for (std::uint64_t i = 0; i < total; ++i) all[i] = i;
    for (std::uint64_t i = 0; i < take; ++i) {
      std::uint64_t j = i + splitmix64(rng) % (total - i);
      std::swap(all[i], all[j]);
      chosen.push_back(all[i]);
    }
  } else {
    std::set<std::uint64_t> seen;
    while (chosen.size() < take) {
      std::uint64_t idx = splitmix64(rng) % total;
      if (seen.insert(idx).second) chosen.push_back(idx);
    }
  }

  std::vector<TaskInstance> out;
  for (std::size_t ordinal = 0; ordinal < chosen.size(); ++ordinal) {
    std::uint64_t linear = chosen[ordinal];
    std::map<std::string, std::string> assignment;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      std::uint64_t v = linear % dims[d];
      linear /= dims[d];
      assignment[tmpl.params[d].name] = tmpl.params[d].possible_values[v];
    }
    TaskInstance inst;
    inst.goal.instruction = substitute_placeholders(tmpl.instruction, assignment);
    if (tmpl.answer) inst.goal.answer = substitute_placeholders(*tmpl.answer, assignment);
    inst.app_name = tmpl.app_name;
    inst.initial_state =
        InitialState{tmpl.app_name, mix_seed(mix_seed(seed, template_id), ordinal)};
    inst.template_ref = template_id;
    inst.assignment = std::move(assignment);
    inst.task_id = make_task_id(inst.app_name, inst.goal.instruction, inst.initial_state);
    inst.validate();
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TaskInstance> dedupe(const std::vector<TaskInstance>& instances) {
  std::vector<TaskInstance> out;
  std::set<std::string> seen;
  for (const auto& inst : instances) {
    std::string key = canonical_task_key(inst.goal.instruction, inst.app_name);
    if (seen.insert(key).second) out.push_back(inst);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Iterative exploration baseline
// ---------------------------------------------------------------------------

namespace {

std::string subtask_history_text(const std::vector<std::string>& descs,
                                 const std::vector<bool>& ok) {
  if (descs.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < descs.size(); ++i) {
    out += std::to_string(i + 1) + ". " + descs[i];
    if (i < ok.size()) out += ok[i] ? " [succeeded]" : " [failed]";
    out += "\n";
  }
  return out;
}

std::string recent_observations_text(const std::vector<Step>& steps, const Screen& current) {
  std::string out;
  std::size_t from = steps.size() > 2 ? steps.size() - 2 : 0;
  for (std::size_t i = from; i < steps.size(); ++i) {
    out += render_text(steps[i].observation);
    out += "\n\n";
  }
  out += render_text(current);
  return out;
}

}  // namespace

IterativeResult generate_iterative(Env& env, Gateway& gw, const std::string& app,
                                   const IterativeConfig& cfg, std::uint64_t seed) {
  IterativeResult result;
  std::uint64_t rng = mix_seed(seed, "iterative:" + app);
  int span = cfg.max_turns - cfg.min_turns + 1;
  int k = cfg.min_turns + static_cast<int>(splitmix64(rng) % span);

  InitialState init{app, mix_seed(seed, "iterative-env:" + app)};
  auto [session, screen] = env.reset(app, init);

  ExecutorConfig exec = cfg.exec;
  exec.max_steps = cfg.subtask_steps;

  std::vector<Step> all_steps;
  std::vector<std::string> subtask_descs;

  for (int turn = 0; turn < k; ++turn) {
    std::string prompt = prompts::substitute(
        prompts::iterative_proposer(),
        {{"APP_NAME", app},
         {"SUBTASK_STEPS", std::to_string(cfg.subtask_steps)},
         {"SUBTASK_HISTORY", subtask_history_text(subtask_descs, result.subtask_ok)},
         {"RECENT_OBSERVATIONS", recent_observations_text(all_steps, screen)}});
    std::string subtask;
    try {
      json j = complete_and_extract(gw, RoleKind::task_generator, {user_message(prompt)}, 2);
      subtask = j.value("subtask", std::string());
    } catch (const Error&) {
      break;  // chain ends early
    }
    if (subtask.empty()) break;

    SegmentResult seg;
    try {
      seg = run_segment(env, gw, session.session_id, screen, Goal{subtask, std::nullopt}, exec,
                        std::nullopt, /*forward_terminal=*/false);
    } catch (const Error&) {
      break;
    }
    for (auto& s : seg.steps) {
      s.index = static_cast<int>(all_steps.size());
      all_steps.push_back(std::move(s));
    }
    subtask_descs.push_back(subtask);
    result.subtask_ok.push_back(seg.terminated && !seg.truncated);
  }

  if (static_cast<int>(subtask_descs.size()) < cfg.min_turns) return result;  // discarded

  std::string relabel_prompt = prompts::substitute(
      prompts::iterative_relabel(),
      {{"APP_NAME", app},
       {"SUBTASK_HISTORY", subtask_history_text(subtask_descs, result.subtask_ok)}});
  TaskTemplate tmpl;
  try {
    json j = complete_and_extract(gw, RoleKind::summarizer, {user_message(relabel_prompt)}, 2);
    tmpl = parse_template_entry(j, app);
  } catch (const Error&) {
    return result;
  }
  tmpl.generator_kind = GeneratorKind::iterative;
  tmpl.guideline_id = "none";

  Trajectory traj;
  traj.purpose = TrajectoryPurpose::task_execution;
  traj.app_name = app;
  traj.initial_state = init;
  traj.steps = std::move(all_steps);
  traj.truncated = false;

  // Hindsight task: the relabeled instruction paired with the chain's own
  // initial state. Any params collapse to their first value.
  std::map<std::string, std::string> first_values;
  for (const auto& p : tmpl.params) first_values[p.name] = p.possible_values.front();
  TaskInstance task;
  task.goal.instruction = substitute_placeholders(tmpl.instruction, first_values);
  if (tmpl.answer) task.goal.answer = substitute_placeholders(*tmpl.answer, first_values);
  task.assignment = first_values;
  task.app_name = app;
  task.initial_state = init;
  task.task_id = make_task_id(app, task.goal.instruction, init);

  traj.task_ref = task.task_id;
  traj.traj_id = digest_trajectory(traj);
  traj.validate();
  tmpl.context_ref = traj.traj_id;
  task.template_ref = digest_template(tmpl);  // after the context stamp

  int ok_count = 0;
  for (bool b : result.subtask_ok)
    if (b) ++ok_count;
  result.retained = 2 * ok_count >= static_cast<int>(result.subtask_ok.size());
  result.tmpl = std::move(tmpl);
  result.task = std::move(task);
  result.trajectory = std::move(traj);
  return result;
}

}  // namespace taskforge
