#include "taskforge/analysis.hpp"

#include "taskforge/errors.hpp"
#include "taskforge/prompts.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace taskforge {

void OutcomeMatrix::validate() const {
  if (tasks < 1 || trials < 1) throw InvalidInputError("outcome matrix is empty");
  for (int t = 0; t < tasks; ++t) {
    bool any = false;
    for (int k = 0; k < trials; ++k)
      if (at(t, k).has_value()) any = true;
    if (!any) throw ValidationError("task row with no recorded trials");
  }
}

MeanSe pass_at_1(const OutcomeMatrix& m) {
  m.validate();
  std::vector<double> trial_rates;
  for (int k = 0; k < m.trials; ++k) {
    int n = 0, wins = 0;
    for (int t = 0; t < m.tasks; ++t) {
      if (!m.at(t, k).has_value()) continue;  // missing excluded, not imputed
      ++n;
      wins += *m.at(t, k);
    }
    if (n > 0) trial_rates.push_back(static_cast<double>(wins) / n);
  }
  MeanSe out;
  for (double r : trial_rates) out.mean += r;
  out.mean /= static_cast<double>(trial_rates.size());
  if (trial_rates.size() > 1) {
    double ss = 0.0;
    for (double r : trial_rates) ss += (r - out.mean) * (r - out.mean);
    double sample_var = ss / static_cast<double>(trial_rates.size() - 1);
    out.se = std::sqrt(sample_var / static_cast<double>(trial_rates.size()));
  }
  return out;
}

double pass_at_k(const OutcomeMatrix& m) {
  m.validate();
  int solved = 0;
  for (int t = 0; t < m.tasks; ++t) {
    bool any = false;
    for (int k = 0; k < m.trials; ++k)
      if (m.at(t, k).has_value() && *m.at(t, k) == 1) any = true;
    if (any) ++solved;
  }
  return static_cast<double>(solved) / m.tasks;
}

// ---------------------------------------------------------------------------
// Categorization
// ---------------------------------------------------------------------------

CategorizeResult categorize(Gateway& gw, const std::vector<TaskInstance>& tasks,
                            Platform platform) {
  CategorizeResult out;
  std::set<std::string> registered;
  for (const auto& c : prompts::taxonomy(platform)) registered.insert(c.id);

  std::map<std::string, std::vector<std::string>> ids_by_instruction;
  for (const auto& t : tasks) ids_by_instruction[t.goal.instruction].push_back(t.task_id);

  constexpr int kBatch = 10;  // the classifier prompt takes 10 tasks at a time
  for (std::size_t start = 0; start < tasks.size(); start += kBatch) {
    json instructions = json::array();
    for (std::size_t i = start; i < std::min(tasks.size(), start + kBatch); ++i)
      instructions.push_back(tasks[i].goal.instruction);

    std::string prompt = prompts::substitute(
        prompts::categorizer(), {{"TASK_CATEGORIES", prompts::taxonomy_text(platform)},
                                 {"TASK_INSTRUCTIONS", instructions.dump(2)}});

    json parsed;
    bool got = false;
    for (int attempt = 0; attempt < 2 && !got; ++attempt) {  // one retry then skip
      try {
        parsed = extract_json(gw.complete(RoleKind::categorizer, {user_message(prompt)}));
        got = parsed.is_array();
      } catch (const Error&) {
      }
    }
    if (!got) {
      ++out.skipped_batches;
      continue;
    }
    for (const auto& entry : parsed) {
      if (!entry.is_object()) continue;
      std::string instr = entry.value("task_instruction", std::string());
      auto it = ids_by_instruction.find(instr);
      if (it == ids_by_instruction.end()) continue;
      std::vector<std::string> cats;
      for (const auto& c : entry.value("task_categories", std::vector<std::string>())) {
        if (registered.count(c))
          cats.push_back(c);
        else
          ++out.dropped_labels;
      }
      for (const auto& id : it->second) out.labels[id] = cats;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distribution report
// ---------------------------------------------------------------------------

json distribution_report(const std::vector<TaskInstance>& tasks,
                         const std::map<std::string, GeneratorKind>& generator_by_task,
                         const std::map<std::string, std::vector<std::string>>& labels,
                         const std::vector<TaskOutcome>& outcomes, Platform platform) {
  std::map<std::string, bool> success_by_task;
  for (const auto& o : outcomes) {
    auto [it, inserted] = success_by_task.try_emplace(o.task_id, o.success);
    if (!inserted) it->second = it->second || o.success;  // any successful trial counts
  }

  json generators = json::object();
  std::map<std::string, std::map<std::string, std::pair<int, int>>> counts;  // gen -> cat -> (tasks, successes)
  std::map<std::string, int> totals;
  std::map<std::string, std::pair<int, int>> executed;  // gen -> (attempted, succeeded)

  for (const auto& t : tasks) {
    auto git = generator_by_task.find(t.task_id);
    std::string gen = git != generator_by_task.end() ? to_string(git->second) : "unknown";
    totals[gen] += 1;
    auto oit = success_by_task.find(t.task_id);
    if (oit != success_by_task.end()) {
      executed[gen].first += 1;
      if (oit->second) executed[gen].second += 1;
    }
    auto lit = labels.find(t.task_id);
    if (lit == labels.end()) continue;
    for (const auto& cat : lit->second) {
      auto& cell = counts[gen][cat];
      cell.first += 1;
      if (oit != success_by_task.end() && oit->second) cell.second += 1;
    }
  }

  for (const auto& [gen, total] : totals) {
    json cats = json::object();
    for (const auto& c : prompts::taxonomy(platform)) {
      auto git = counts.find(gen);
      int n = 0, wins = 0;
      if (git != counts.end()) {
        auto cit = git->second.find(c.id);
        if (cit != git->second.end()) {
          n = cit->second.first;
          wins = cit->second.second;
        }
      }
      json cell{{"task_share", total > 0 ? static_cast<double>(n) / total : 0.0},
                {"tasks", n}};
      cell["success_share"] = n > 0 ? json(static_cast<double>(wins) / n) : json(nullptr);
      cats[c.id] = cell;
    }
    auto eit = executed.find(gen);
    json entry{{"tasks", total}, {"categories", cats}};
    if (eit != executed.end() && eit->second.first > 0) {
      entry["executed"] = eit->second.first;
      entry["execution_yield"] =
          static_cast<double>(eit->second.second) / eit->second.first;
    } else {
      entry["executed"] = 0;
      entry["execution_yield"] = nullptr;
    }
    generators[gen] = entry;
  }
  return json{{"v", kSchemaVersion}, {"platform", to_string(platform)},
              {"generators", generators}};
}

std::string report_csv(const json& report) {
  std::string out = "generator,category,tasks,task_share,success_share\n";
  for (const auto& [gen, entry] : report.at("generators").items()) {
    for (const auto& [cat, cell] : entry.at("categories").items()) {
      out += gen + "," + cat + "," + std::to_string(cell.at("tasks").get<int>()) + "," +
             std::to_string(cell.at("task_share").get<double>()) + ",";
      if (cell.at("success_share").is_null())
        out += "null";
      else
        out += std::to_string(cell.at("success_share").get<double>());
      out += "\n";
    }
  }
  return out;
}

}  // namespace taskforge
