#include "taskforge/explorer.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/prompts.hpp"

#include <algorithm>

namespace taskforge {

namespace {

std::string rendered_sequence(const Trajectory& traj) {
  std::string out;
  for (const auto& s : traj.steps) {
    out += "Step " + std::to_string(s.index) + " observation:\n";
    out += render_text(s.observation);
    out += "\nStep " + std::to_string(s.index) +
           " action: " + action_string(s.action, s.observation) + "\n\n";
  }
  return out;
}

std::string pick_field(const json& j, const char* spaced, const char* underscored) {
  if (j.contains(spaced) && j.at(spaced).is_string()) return j.at(spaced).get<std::string>();
  if (j.contains(underscored) && j.at(underscored).is_string())
    return j.at(underscored).get<std::string>();
  return {};
}

}  // namespace

MemorySummary summarize(Gateway& gw, const Trajectory& traj) {
  if (traj.steps.empty()) throw InvalidInputError("summarize: empty trajectory");
  std::vector<ChatMessage> msgs;
  msgs.push_back(user_message(prompts::summarizer()));
  ChatMessage seq{"user", {}};
  seq.parts.push_back(MessagePart{"text", "Exploration trajectory:\n" + rendered_sequence(traj)});
  msgs.push_back(seq);

  const int max_reprompts = 2;
  for (int attempt = 0; attempt <= max_reprompts; ++attempt) {
    std::string response = gw.complete(RoleKind::summarizer, msgs);
    try {
      json j = extract_json(response);
      MemorySummary m;
      m.action_summary = pick_field(j, "action summary", "action_summary");
      m.data_stored = pick_field(j, "data stored", "data_stored");
      m.source_traj = traj.traj_id;
      if (m.action_summary.empty() || m.data_stored.empty())
        throw ExtractionError("summary fields empty");
      return m;
    } catch (const ExtractionError& e) {
      if (attempt == max_reprompts) throw;
      msgs.push_back(assistant_message(response));
      msgs.push_back(user_message(std::string("Your output was not the required JSON (") +
                                  e.what() + "). Output only the JSON object."));
    }
  }
  throw ExtractionError("summarize: unreachable");
}

std::string memory_text(const EnvironmentContext& ctx) {
  if (ctx.turns.empty()) return {};
  std::string out = "Memory of prior exploration turns:\n";
  for (std::size_t i = 0; i < ctx.turns.size(); ++i) {
    const ContextTurn& turn = ctx.turns[i];
    out += "Turn " + std::to_string(i + 1) + ":\n";
    if (turn.summary) {
      out += "action summary: " + turn.summary->action_summary + "\n";
      out += "data stored: " + turn.summary->data_stored + "\n";
    } else {
      out += "(summary unavailable; last screens shown instead)\n";
      const auto& steps = turn.trajectory.steps;
      std::size_t from = steps.size() > 3 ? steps.size() - 3 : 0;
      for (std::size_t s = from; s < steps.size(); ++s) {
        out += render_text(steps[s].observation);
        out += "\n";
      }
    }
  }
  return out;
}

EnvironmentContext explore_app(Env& env, Gateway& gw, const std::string& app,
                               const ExploreConfig& cfg, std::uint64_t run_seed) {
  if (cfg.turns < 1 || cfg.steps_per_turn < 1)
    throw InvalidInputError("explore_app: turns and steps must be >= 1");

  EnvironmentContext ctx;
  ctx.app_name = app;

  ExecutorConfig exec = cfg.exec;
  exec.planner_role = RoleKind::explorer_planner;
  exec.max_steps = cfg.steps_per_turn;

  for (int turn = 0; turn < cfg.turns; ++turn) {
    EpisodeSpec spec;
    spec.app = app;
    spec.initial_state = InitialState{app, mix_seed(run_seed, app)};
    spec.goal = Goal{prompts::exploration_goal(app), std::nullopt};
    spec.purpose = TrajectoryPurpose::exploration;
    std::string mem = memory_text(ctx);
    if (!mem.empty()) spec.memory_text = mem;

    ContextTurn entry;
    try {
      entry.trajectory = run_episode(env, gw, spec, exec);
    } catch (const Error&) {
      continue;  // aborted turn; completed turns preserved
    }
    try {
      entry.summary = summarize(gw, entry.trajectory);
    } catch (const Error&) {
      entry.summary_error = true;
    }
    ctx.turns.push_back(std::move(entry));
  }
  return ctx;
}

}  // namespace taskforge
