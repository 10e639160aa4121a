#include "taskforge/verifier.hpp"

#include "taskforge/errors.hpp"
#include "taskforge/executor.hpp"
#include "taskforge/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace taskforge {

FrameWindow truncate_frames(const Trajectory& traj, int n) {
  if (n < 1) throw InvalidInputError("truncate_frames: n must be >= 1");
  int len = static_cast<int>(traj.steps.size());
  int count = std::min(n, len);
  return FrameWindow{len - count, count};
}

std::string observations_with_actions(const Trajectory& traj, const FrameWindow& w) {
  std::string out;
  for (int i = w.first; i < w.first + w.count; ++i) {
    const Step& s = traj.steps[i];
    out += "Observation " + std::to_string(s.index) + ":\n" + render_text(s.observation) + "\n";
    out += "Action " + std::to_string(s.index) + ": " + action_string(s.action, s.observation);
    if (s.action_ok) out += *s.action_ok ? " [ok]" : " [failed]";
    out += "\n\n";
  }
  if (traj.final_answer) out += "Final answer: " + *traj.final_answer + "\n";
  return out;
}

namespace {

std::optional<JudgmentResult> normalize_result(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c) || c == '.'; }),
          s.end());
  if (s == "success") return JudgmentResult::success;
  if (s == "fail" || s == "failure") return JudgmentResult::fail;
  return std::nullopt;
}

}  // namespace

VerifierJudgment verify(Gateway& gw, const TaskInstance& task, const Trajectory& traj,
                        const VerifyConfig& cfg) {
  VerifierJudgment out;
  out.verifier_model = cfg.verifier_model;
  FrameWindow w = cfg.frames > 0 ? truncate_frames(traj, cfg.frames)
                                 : FrameWindow{0, static_cast<int>(traj.steps.size())};
  out.frames_used = std::max(w.count, 1);

  std::string prompt = prompts::substitute(
      prompts::verifier(), {{"TASK_INSTRUCTION", task.goal.instruction},
                            {"OBSERVATIONS_WITH_ACTIONS", observations_with_actions(traj, w)}});
  std::vector<ChatMessage> msgs{user_message(prompt)};

  for (int attempt = 0; attempt <= cfg.max_reprompts; ++attempt) {
    std::string response;
    try {
      response = gw.complete(RoleKind::verifier, msgs);
    } catch (const Error&) {
      break;  // model failure after its own retries: fail with flag
    }
    try {
      json j = extract_json(response);
      auto result = normalize_result(j.value("result", std::string()));
      if (!result) throw ExtractionError("result is not success/fail");
      out.screen_details = j.value("screen_details", std::string());
      out.reasoning = j.value("reasoning", std::string());
      out.result = *result;
      return out;
    } catch (const ExtractionError& e) {
      msgs.push_back(assistant_message(response));
      msgs.push_back(user_message(std::string("Your output was not the required JSON (") +
                                  e.what() + "). Output only the JSON object."));
    }
  }
  out.result = JudgmentResult::fail;  // never silently success
  out.verifier_error = true;
  return out;
}

int reward(const VerifierJudgment& j) {
  return j.result == JudgmentResult::success ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Oracle checkers
// ---------------------------------------------------------------------------

namespace {

std::set<std::string> tokens_of(const std::string& s) {
  std::set<std::string> out;
  std::istringstream is(normalize_text(s));
  std::string tok;
  while (is >> tok) out.insert(tok);
  return out;
}

bool entity_matches(const OracleEntity& e, const std::map<std::string, std::string>& args) {
  for (const auto& [k, v] : args) {
    if (k == "app" || k == "kind" || k == "count" || k == "required" || k == "match_field" ||
        k == "match_value" || k == "field" || k == "expected")
      continue;
    auto it = e.fields.find(k);
    if (it == e.fields.end() || it->second != v) return false;
  }
  return true;
}

}  // namespace

int oracle_verify(const GoldenTask& golden, SimEnv& env, const std::string& session_id,
                  const std::optional<std::string>& final_answer) {
  const auto& args = golden.checker_args;
  OracleQuery q;
  if (args.count("app")) q.app = args.at("app");
  if (args.count("kind")) q.kind = args.at("kind");

  if (golden.checker_id == "entity_exists" || golden.checker_id == "entity_absent") {
    bool found = false;
    for (const auto& e : env.oracle_query(session_id, q)) {
      if (entity_matches(e, args)) {
        found = true;
        break;
      }
    }
    return (golden.checker_id == "entity_exists") == found ? 1 : 0;
  }
  if (golden.checker_id == "entity_count") {
    int n = static_cast<int>(env.oracle_query(session_id, q).size());
    return n == std::stoi(args.at("count")) ? 1 : 0;
  }
  if (golden.checker_id == "field_equals") {
    for (const auto& e : env.oracle_query(session_id, q)) {
      auto mit = e.fields.find(args.at("match_field"));
      if (mit == e.fields.end() || mit->second != args.at("match_value")) continue;
      auto fit = e.fields.find(args.at("field"));
      return (fit != e.fields.end() && fit->second == args.at("expected")) ? 1 : 0;
    }
    return 0;
  }
  if (golden.checker_id == "answer_matches") {
    if (!final_answer) return 0;
    auto required = tokens_of(args.at("required"));
    auto given = tokens_of(*final_answer);
    for (const auto& t : required)
      if (!given.count(t)) return 0;
    return 1;
  }
  throw Error("unknown checker: " + golden.checker_id);
}

Calibration calibrate(const std::vector<int>& judgments, const std::vector<int>& oracle) {
  if (judgments.size() != oracle.size()) throw InvalidInputError("calibrate: length mismatch");
  if (judgments.empty()) throw InvalidInputError("calibrate: empty inputs");
  int tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    if (judgments[i] == 1 && oracle[i] == 1) ++tp;
    if (judgments[i] == 1 && oracle[i] == 0) ++fp;
    if (judgments[i] == 0 && oracle[i] == 0) ++tn;
    if (judgments[i] == 0 && oracle[i] == 1) ++fn;
  }
  Calibration c;
  if (tp + fp > 0) c.precision = static_cast<double>(tp) / (tp + fp);
  if (tp + fn > 0) c.recall = static_cast<double>(tp) / (tp + fn);
  c.accuracy = static_cast<double>(tp + tn) / static_cast<double>(judgments.size());
  return c;
}

}  // namespace taskforge
