#pragma once

#include "taskforge/gateway.hpp"
#include "taskforge/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace taskforge {

// Task x trial outcome matrix; missing cells are unset optionals.
struct OutcomeMatrix {
  int tasks = 0;
  int trials = 0;
  std::vector<std::optional<int>> cells;  // row-major

  OutcomeMatrix() = default;
  OutcomeMatrix(int tasks_, int trials_)
      : tasks(tasks_), trials(trials_), cells(static_cast<std::size_t>(tasks_) * trials_) {}
  std::optional<int>& at(int task, int trial) {
    return cells[static_cast<std::size_t>(task) * trials + trial];
  }
  const std::optional<int>& at(int task, int trial) const {
    return cells[static_cast<std::size_t>(task) * trials + trial];
  }
  void validate() const;  // every task row needs >= 1 non-missing cell
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Per-trial success rates averaged; standard error over the trial means.
MeanSe pass_at_1(const OutcomeMatrix& m);

// Fraction of tasks with at least one success across trials.
double pass_at_k(const OutcomeMatrix& m);

// ---------------------------------------------------------------------------
// Categorization
// ---------------------------------------------------------------------------

struct CategorizeResult {
  std::map<std::string, std::vector<std::string>> labels;  // task_id -> category ids
  int dropped_labels = 0;    // outside the registered taxonomy
  int skipped_batches = 0;   // extraction failed after retry
};

// Batches of 10 instructions per prompt; labels restricted to the platform
// taxonomy.
CategorizeResult categorize(Gateway& gw, const std::vector<TaskInstance>& tasks,
                            Platform platform);

// ---------------------------------------------------------------------------
// Distribution report
// ---------------------------------------------------------------------------

struct TaskOutcome {
  std::string task_id;
  bool success = false;
};

// Per-generator, per-category task share and execution success share.
json distribution_report(const std::vector<TaskInstance>& tasks,
                         const std::map<std::string, GeneratorKind>& generator_by_task,
                         const std::map<std::string, std::vector<std::string>>& labels,
                         const std::vector<TaskOutcome>& outcomes, Platform platform);

std::string report_csv(const json& report);

}  // namespace taskforge
