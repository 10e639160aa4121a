#include "taskforge/datastore.hpp"
#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/executor.hpp"
#include "taskforge/scripted.hpp"
#include "taskforge/sim.hpp"

#include <doctest.h>

#include <filesystem>

using namespace taskforge;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) {
    path = std::filesystem::temp_directory_path() / ("taskforge-ds-" + name);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

Trajectory executed_trajectory(const std::string& task_id, int n_steps, int salt) {
  Trajectory t;
  t.purpose = TrajectoryPurpose::task_execution;
  t.task_ref = task_id;
  t.app_name = "calendar";
  t.initial_state = InitialState{"calendar", static_cast<std::uint64_t>(salt)};
  for (int i = 0; i < n_steps; ++i) {
    Step s;
    s.index = i;
    s.observation.app_name = "calendar";
    s.observation.screen_id = "home";
    s.observation.title = "Calendar " + std::to_string(salt);
    ScreenElement e;
    e.id = 0;
    e.kind = ElementKind::button;
    e.text = "Search";
    e.bounds = Bounds{40, 160, 1000, 120};
    e.state = ElementState::enabled;
    s.observation.elements.push_back(e);
    s.action = i + 1 == n_steps ? make_terminate() : make_click(Target{0});
    s.action_ok = true;
    t.steps.push_back(std::move(s));
  }
  t.traj_id = digest_trajectory(t);
  return t;
}

JudgmentRow judge(const std::string& task_id, const std::string& traj_id, bool success,
                  bool error = false) {
  JudgmentRow r;
  r.task_id = task_id;
  r.traj_id = traj_id;
  r.judgment.result = success ? JudgmentResult::success : JudgmentResult::fail;
  r.judgment.verifier_error = error;
  return r;
}

}  // namespace

TEST_CASE("filter_successful keeps verified successes only") {
  std::vector<Trajectory> trajs;
  std::map<std::string, JudgmentRow> judgments;
  for (int i = 0; i < 10; ++i) {
    Trajectory t = executed_trajectory("task-" + std::to_string(i), 2, i);
    if (i < 4)
      judgments[t.traj_id] = judge(*t.task_ref, t.traj_id, true);
    else if (i < 8)
      judgments[t.traj_id] = judge(*t.task_ref, t.traj_id, false);
    // 8, 9 unjudged
    trajs.push_back(std::move(t));
  }
  FilterResult r = filter_successful(trajs, judgments);
  CHECK(r.kept.size() == 4);
  CHECK(r.failed == 4);
  CHECK(r.unjudged == 2);

  // success with verifier_error set is excluded
  Trajectory flagged = executed_trajectory("task-x", 2, 42);
  judgments[flagged.traj_id] = judge("task-x", flagged.traj_id, true, true);
  trajs.push_back(flagged);
  FilterResult r2 = filter_successful(trajs, judgments);
  CHECK(r2.kept.size() == 4);
  CHECK(r2.error_flagged == 1);

  // filter is idempotent and a subset of its input
  FilterResult r3 = filter_successful(r2.kept, judgments);
  CHECK(r3.kept == r2.kept);
}

TEST_CASE("export_sft emits one example per step with verbatim histories") {
  Trajectory t = executed_trajectory("task-1", 6, 3);
  TaskInstance task;
  task.task_id = "task-1";
  task.goal.instruction = "click around";
  task.app_name = "calendar";
  task.initial_state = t.initial_state;
  std::map<std::string, TaskInstance> by_id{{"task-1", task}};

  auto examples = export_sft({t}, by_id);
  REQUIRE(examples.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(examples[i].step_index == i);
    CHECK(static_cast<int>(examples[i].history.size()) == i);
    CHECK(examples[i].instruction == "click around");
    CHECK(examples[i].target_action == t.steps[i].action);
    CHECK(examples[i].observation == render_text(t.steps[i].observation));
  }
  // history at step 3 equals the action strings of steps 0..2 verbatim
  for (int k = 0; k < 3; ++k)
    CHECK(examples[3].history[k] == action_string(t.steps[k].action, t.steps[k].observation));

  CHECK(export_sft({}, by_id).empty());

  // round-trip
  json j = examples[2];
  CHECK(j.get<SftExample>() == examples[2]);
}

TEST_CASE("jsonl stores dedupe by id and stamp the schema version") {
  TempDir dir("jsonl");
  JsonlStore store;
  store.open(dir.path / "rows.jsonl", "id");
  CHECK(store.append(json{{"id", "a"}, {"x", 1}}));
  CHECK_FALSE(store.append(json{{"id", "a"}, {"x", 2}}));
  CHECK(store.append(json{{"id", "b"}, {"x", 3}}));
  CHECK(store.size() == 2);

  auto rows = store.rows();
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("v") == 1);
  CHECK(rows[0].at("x") == 1);

  // reopening sees existing ids: append-only across restarts
  JsonlStore reopened;
  reopened.open(dir.path / "rows.jsonl", "id");
  CHECK_FALSE(reopened.append(json{{"id", "b"}, {"x", 9}}));
  CHECK(reopened.size() == 2);
}

TEST_CASE("run store externalizes observations into content-addressed blobs") {
  TempDir dir("runstore");
  RunStore store(dir.path, "run1");
  Trajectory t = executed_trajectory("task-7", 3, 7);
  json row = store.trajectory_row(t, json{{"planner_model", "scripted"}});
  CHECK(row.at("steps")[0].contains("observation_ref"));
  CHECK_FALSE(row.at("steps")[0].contains("observation"));

  std::string ref = row.at("steps")[0].at("observation_ref").get<std::string>();
  CHECK(std::filesystem::exists(dir.path / "run1" / "blobs" / (ref + ".json")));

  Trajectory back = store.load_trajectory(row);
  CHECK(back == t);

  store.trajectories().append(row);
  auto loaded = store.load_trajectories();
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0] == t);
}

TEST_CASE("manifest seals stages with logical sequence numbers") {
  TempDir dir("manifest");
  {
    RunStore store(dir.path, "run1");
    store.seal_stage("explore", json{{"count", 3}});
    store.seal_stage("gen-tasks:autoplay", json{{"count", 10}});
    CHECK(store.stage_sealed("explore"));
    CHECK_FALSE(store.stage_sealed("verify"));
  }
  RunStore reopened(dir.path, "run1");
  CHECK(reopened.stage_sealed("explore"));
  json m = reopened.manifest();
  CHECK(m.at("stages").at("explore").at("seq") == 0);
  CHECK(m.at("stages").at("gen-tasks:autoplay").at("seq") == 1);
}

TEST_CASE("stats aggregate tasks, yield, and episode length") {
  TempDir dir("stats");
  RunStore store(dir.path, "run1");

  TaskTemplate tmpl;
  tmpl.instruction = "Open the calendar app";
  tmpl.app_name = "calendar";
  tmpl.guideline_id = "feature_use";
  tmpl.generator_kind = GeneratorKind::autoplay;
  json trow = tmpl;
  trow["template_id"] = digest_template(tmpl);
  store.templates().append(trow);

  for (int i = 0; i < 3; ++i) {
    TaskInstance inst;
    inst.goal.instruction = "Open the calendar app " + std::to_string(i);
    inst.app_name = i < 2 ? "calendar" : "notes";
    inst.initial_state = InitialState{inst.app_name, static_cast<std::uint64_t>(i)};
    inst.template_ref = digest_template(tmpl);
    inst.task_id = make_task_id(inst.app_name, inst.goal.instruction, inst.initial_state);
    store.tasks().append(json(inst));
  }

  Trajectory t = executed_trajectory("task-1", 4, 1);
  store.trajectories().append(store.trajectory_row(t, json::object()));
  json jrow = VerifierJudgment{};
  jrow["result"] = "success";
  jrow["task_id"] = "task-1";
  jrow["traj_id"] = t.traj_id;
  store.judgments().append(jrow);

  RunStats s = stats(store);
  CHECK(s.tasks_by_app.at("calendar") == 2);
  CHECK(s.tasks_by_app.at("notes") == 1);
  CHECK(s.tasks_by_guideline.at("feature_use") == 3);
  CHECK(s.tasks_by_generator.at("autoplay") == 3);
  CHECK(s.attempts == 1);
  CHECK(s.successes == 1);
  CHECK(*s.yield == doctest::Approx(1.0));
  CHECK(*s.mean_episode_length == doctest::Approx(4.0));

  json report = stats_json(s);
  CHECK(report.at("yield") == 1.0);
}
