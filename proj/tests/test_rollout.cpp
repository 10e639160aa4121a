#include "taskforge/errors.hpp"
#include "taskforge/golden.hpp"
#include "taskforge/rollout.hpp"
#include "taskforge/scripted.hpp"
#include "taskforge/sim.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>

using namespace taskforge;

namespace {

Backend handler_backend(ScriptedHandler h) {
  Backend b;
  b.kind = BackendKind::mock;
  b.handler = std::move(h);
  return b;
}

TaskInstance task_with_id(const std::string& instruction, std::uint64_t seed) {
  TaskInstance t;
  t.goal.instruction = instruction;
  t.app_name = "calendar";
  t.initial_state = InitialState{"calendar", seed};
  t.task_id = make_task_id(t.app_name, t.goal.instruction, t.initial_state);
  return t;
}

}  // namespace

TEST_CASE("grpo advantages: hand case, zero variance, and algebraic identities") {
  // hand computation with the population std: mean 0.25, std sqrt(3)/4
  auto adv = grpo_advantages({1, 0, 0, 0});
  REQUIRE(adv.size() == 4);
  CHECK(adv[0] == doctest::Approx(1.732051).epsilon(1e-6));
  CHECK(adv[1] == doctest::Approx(-0.577350).epsilon(1e-6));
  CHECK(adv[2] == doctest::Approx(-0.577350).epsilon(1e-6));
  CHECK(adv[3] == doctest::Approx(-0.577350).epsilon(1e-6));

  auto zeros = grpo_advantages({1, 1, 1, 1, 1, 1, 1, 1});
  for (double a : zeros) CHECK(a == 0.0);

  CHECK_THROWS_AS(grpo_advantages({1.0}), InvalidInputError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    int n = 2 + static_cast<int>(rng() % 8);
    std::vector<double> rewards;
    for (int i = 0; i < n; ++i)
      rewards.push_back(static_cast<double>(rng() % 100) / 10.0);
    auto a = grpo_advantages(rewards);

    double sum = 0.0;
    double var = 0.0;
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= n;
    for (double r : rewards) var += (r - mean) * (r - mean);
    for (double x : a) sum += x;
    if (var > 0) {
      CHECK(std::abs(sum) < 1e-9);
      // shift invariance
      std::vector<double> shifted = rewards;
      for (double& r : shifted) r += 13.5;
      auto a2 = grpo_advantages(shifted);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - a2[i]) < 1e-9);
      // positive scaling leaves normalized advantages unchanged
      std::vector<double> scaled = rewards;
      for (double& r : scaled) r *= 4.0;
      auto a3 = grpo_advantages(scaled);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - a3[i]) < 1e-9);
    } else {
      for (double x : a) CHECK(x == 0.0);
    }
  }
}

TEST_CASE("task pool keeps executor-solvable tasks in task_id order") {
  std::vector<TaskInstance> tasks;
  for (int i = 0; i < 5; ++i)
    tasks.push_back(task_with_id("task number " + std::to_string(i), i));

  std::map<std::string, JudgmentRow> judgments;
  auto add_judgment = [&](const TaskInstance& t, bool success, const std::string& traj) {
    JudgmentRow r;
    r.task_id = t.task_id;
    r.traj_id = traj;
    r.judgment.result = success ? JudgmentResult::success : JudgmentResult::fail;
    judgments[traj] = r;
  };
  add_judgment(tasks[1], true, "tr-1");
  add_judgment(tasks[3], true, "tr-3");
  add_judgment(tasks[3], false, "tr-3b");  // one success is enough
  add_judgment(tasks[0], false, "tr-0");

  auto pool = build_task_pool(tasks, judgments);
  REQUIRE(pool.size() == 2);
  CHECK(pool[0].task_id < pool[1].task_id);

  CHECK_THROWS_AS(build_task_pool(tasks, {}), EmptyPoolError);
  CHECK_THROWS_AS(build_task_pool({}, judgments), EmptyPoolError);
}

TEST_CASE("group rollouts share the initial state and attach advantages") {
  auto suite = build_golden_suite(7);
  const GoldenTask* create_task = nullptr;
  for (const auto& g : suite)
    if (g.checker_id == "entity_exists" && g.task.app_name == "expenses") create_task = &g;
  REQUIRE(create_task != nullptr);

  SimEnv env;
  Gateway gw;
  gw.bind(RoleKind::executor_planner, handler_backend(scripted_handler("oracle_executor")));
  gw.bind(RoleKind::verifier, handler_backend(scripted_handler("verifier_heuristic")));

  GroupRolloutConfig cfg;
  cfg.group_size = 4;
  cfg.rollout_len = 16;
  auto group = group_rollout(env, gw, create_task->task, cfg);
  REQUIRE(group.size() == 4);

  // identical first observations across members (snapshot-fork semantics)
  std::string first_digest = screen_digest(group[0].trajectory.steps[0].observation);
  for (const auto& r : group) {
    REQUIRE(!r.trajectory.steps.empty());
    CHECK(screen_digest(r.trajectory.steps[0].observation) == first_digest);
    CHECK(r.task_id == create_task->task.task_id);
    CHECK(r.group_id == group[0].group_id);
    CHECK(r.trajectory.purpose == TrajectoryPurpose::rl_rollout);
  }

  // the oracle policy succeeds deterministically: all rewards 1, advantages 0
  for (const auto& r : group) {
    CHECK(r.reward == 1);
    CHECK(r.advantage == 0.0);
  }
}

TEST_CASE("mixed member outcomes produce nonzero advantages") {
  auto suite = build_golden_suite(7);
  const GoldenTask* create_task = nullptr;
  for (const auto& g : suite)
    if (g.checker_id == "entity_exists" && g.task.app_name == "calendar") create_task = &g;
  REQUIRE(create_task != nullptr);

  SimEnv env;
  Gateway gw;
  // stateful test policy: the first two episodes follow the oracle, later
  // episodes stall and truncate
  auto counter = std::make_shared<std::atomic<int>>(0);
  auto oracle = scripted_handler("oracle_executor");
  gw.bind(RoleKind::executor_planner,
          handler_backend([counter, oracle](const std::vector<ChatMessage>& msgs) {
            std::string prompt = message_text(msgs.back());
            bool fresh = prompt.find("Action History:\nnone") != std::string::npos;
            if (fresh) counter->fetch_add(1);
            if (counter->load() <= 2) return oracle(msgs);
            return json{{"reason", "stall"}, {"action", "wait"}}.dump();
          }));
  gw.bind(RoleKind::verifier, handler_backend(scripted_handler("verifier_heuristic")));

  GroupRolloutConfig cfg;
  cfg.group_size = 8;
  auto group = group_rollout(env, gw, create_task->task, cfg);
  int total = 0;
  for (const auto& r : group) total += r.reward;
  CHECK(total == 2);

  auto expected = grpo_advantages({1, 1, 0, 0, 0, 0, 0, 0});
  for (int i = 0; i < 8; ++i) CHECK(group[i].advantage == doctest::Approx(expected[i]));
  double sum = 0;
  for (const auto& r : group) sum += r.advantage;
  CHECK(std::abs(sum) < 1e-9);
}

TEST_CASE("group size below two is rejected") {
  SimEnv env;
  Gateway gw;
  GroupRolloutConfig cfg;
  cfg.group_size = 1;
  CHECK_THROWS_AS(group_rollout(env, gw, task_with_id("x", 1), cfg), InvalidInputError);
}

TEST_CASE("rollout rows serialize with reward provenance") {
  RewardedRollout r;
  r.task_id = "t";
  r.group_id = "g";
  r.member_index = 3;
  r.trajectory.traj_id = "traj";
  r.reward = 1;
  r.advantage = 0.5;
  json j = r;
  CHECK(j.at("traj_ref") == "traj");
  CHECK(j.at("reward") == 1);
  CHECK(j.at("advantage") == 0.5);
  CHECK(j.at("member_index") == 3);
}
