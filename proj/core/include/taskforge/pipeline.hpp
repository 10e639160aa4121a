#pragma once

#include "taskforge/analysis.hpp"
#include "taskforge/config.hpp"
#include "taskforge/datastore.hpp"
#include "taskforge/env.hpp"
#include "taskforge/gateway.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace taskforge {

// Staged pipeline over one run directory. Stages are resumable (work is
// skipped by id) and sealed into the manifest on completion; with replay or
// scripted backends every output byte is a function of (config, seed).
class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg);

  void explore();
  void gen_tasks(GeneratorKind generator = GeneratorKind::autoplay, bool use_guidelines = true);
  void run_tasks();
  void verify_stage();
  void export_sft_stage();
  void rl_rollouts();
  void analyze();

  RunStore& store() { return store_; }
  Gateway& gateway() { return gw_; }
  Env& env() { return *env_; }
  const RunConfig& config() const { return cfg_; }

  int flagged_failures() const { return flagged_failures_; }

 private:
  void require_stage_output(bool ok, const std::string& what);
  void account_failures(int failures, int total, const std::string& stage);
  json provenance() const;

  RunConfig cfg_;
  RunStore store_;
  std::unique_ptr<Env> env_;
  Gateway gw_;
  int flagged_failures_ = 0;
};

// Byte-compares two run directories; returns the relative paths that differ.
std::vector<std::string> compare_run_dirs(const std::filesystem::path& a,
                                          const std::filesystem::path& b);

// Structured JSON-line log to stderr.
void log_json(const std::string& level, const std::string& event, const json& fields);

}  // namespace taskforge
