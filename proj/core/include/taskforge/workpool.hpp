#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace taskforge {

template <typename Result>
struct JobOutcome {
  std::optional<Result> value;
  std::string error;
  bool ok() const { return value.has_value(); }
};

// Runs jobs on up to `workers` threads. Results come back in input order, so
// downstream writes are independent of scheduling; failures are isolated per
// job and reported as error strings.
template <typename Result>
std::vector<JobOutcome<Result>> run_jobs(const std::vector<std::function<Result()>>& jobs,
                                         int workers) {
  std::vector<JobOutcome<Result>> results(jobs.size());
  if (jobs.empty()) return results;
  workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i].value = jobs[i]();
      } catch (const std::exception& e) {
        results[i].error = e.what();
      } catch (...) {
        results[i].error = "unknown error";
      }
    }
  };

  if (workers == 1) {
    worker();
    return results;
  }
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace taskforge
