#include "taskforge/digest.hpp"
#include "taskforge/executor.hpp"
#include "taskforge/gateway.hpp"
#include "taskforge/rollout.hpp"
#include "taskforge/scripted.hpp"
#include "taskforge/sim.hpp"
#include "taskforge/taskgen.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace taskforge;

namespace {

void BM_SimStep(benchmark::State& state) {
  SimEnv env;
  auto [session, screen] = env.reset("calendar", InitialState{"calendar", 7});
  std::uint64_t rng = 1;
  for (auto _ : state) {
    Action a;
    switch (splitmix64(rng) % 4) {
      case 0: a = make_click(Target{static_cast<int>(splitmix64(rng) % 7)}); break;
      case 1: a = make_scroll(ScrollDirection::down); break;
      case 2: a = make_navigate_back(); break;
      default: a = make_wait(5); break;
    }
    auto [next, outcome] = env.step(session.session_id, a);
    benchmark::DoNotOptimize(outcome.ok);
  }
}
BENCHMARK(BM_SimStep);

void BM_RenderAndDigest(benchmark::State& state) {
  SimDevice dev("expenses", 9);
  Screen screen = dev.render().screen;
  for (auto _ : state) {
    std::string digest = sha256_hex(render_text(screen));
    benchmark::DoNotOptimize(digest);
  }
}
BENCHMARK(BM_RenderAndDigest);

void BM_ExtractJson(benchmark::State& state) {
  std::string payload =
      "Sure, here are the tasks:\n```json\n{\"tasks\": [{\"instruction\": \"Add clock for "
      "{city}\", \"app_name\": \"clock\", \"template params\": {\"city\": {\"description\": "
      "\"a city\", \"possible_values\": [\"Tokyo\", \"Paris\", \"Oslo\",]}}}]}\n```\nDone.";
  for (auto _ : state) {
    json j = extract_json(payload);
    benchmark::DoNotOptimize(j);
  }
}
BENCHMARK(BM_ExtractJson);

void BM_TemplateExpand(benchmark::State& state) {
  TaskTemplate t;
  t.instruction = "Add clock for {city} at {time} labeled {label}";
  t.app_name = "clock";
  t.params = {TemplateParam{"city", "c", {"Tokyo", "Paris", "Oslo", "Lima", "Cairo"}},
              TemplateParam{"time", "t", {"09:00", "10:00", "11:00", "12:00", "13:00"}},
              TemplateParam{"label", "l", {"a", "b", "c", "d", "e"}}};
  t.guideline_id = "feature_use";
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto out = expand(t, 5, seed++);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_TemplateExpand);

void BM_GrpoAdvantages(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<double> rewards(8);
  for (auto _ : state) {
    for (double& r : rewards) r = static_cast<double>(rng() % 2);
    rewards[0] = 1;  // keep variance nonzero
    rewards[1] = 0;
    auto adv = grpo_advantages(rewards);
    benchmark::DoNotOptimize(adv);
  }
}
BENCHMARK(BM_GrpoAdvantages);

void BM_OracleEpisode(benchmark::State& state) {
  Gateway gw;
  Backend b;
  b.kind = BackendKind::mock;
  b.handler = scripted_handler("oracle_executor");
  gw.bind(RoleKind::executor_planner, b);
  for (auto _ : state) {
    SimEnv env;
    EpisodeSpec spec;
    spec.app = "calendar";
    spec.initial_state = InitialState{"calendar", 7};
    spec.goal = Goal{"In the calendar app, how many events are there?", std::nullopt};
    spec.task_ref = "bench";
    Trajectory traj = run_episode(env, gw, spec, ExecutorConfig{});
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_OracleEpisode);

}  // namespace

BENCHMARK_MAIN();
