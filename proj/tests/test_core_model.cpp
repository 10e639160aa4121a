#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"
#include "taskforge/types.hpp"

#include <doctest.h>

#include <random>

using namespace taskforge;

namespace {

Screen sample_screen(int salt = 0) {
  Screen s;
  s.app_name = "calendar";
  s.screen_id = "home";
  s.title = "Calendar";
  s.scroll_offset = salt;
  ScreenElement e;
  e.id = 0;
  e.kind = ElementKind::button;
  e.text = "New Event";
  e.bounds = Bounds{40, 160, 1000, 120};
  e.state = ElementState::enabled;
  s.elements.push_back(e);
  if (salt % 2 == 0) s.focused_element = 0;
  return s;
}

Trajectory sample_trajectory(int salt = 0) {
  Trajectory t;
  t.purpose = TrajectoryPurpose::task_execution;
  t.task_ref = "task-" + std::to_string(salt);
  t.app_name = "calendar";
  t.initial_state = InitialState{"calendar", 7};
  Step s0;
  s0.index = 0;
  s0.observation = sample_screen(salt);
  s0.action = make_click(Point{100, 200});
  s0.reflection = "clicked";
  s0.action_ok = true;
  Step s1;
  s1.index = 1;
  s1.observation = sample_screen(salt + 1);
  s1.action = make_answer("done " + std::to_string(salt));
  t.steps = {s0, s1};
  t.final_answer = "done " + std::to_string(salt);
  t.traj_id = digest_trajectory(t);
  return t;
}

template <typename T>
void check_round_trip(const T& value) {
  json encoded = value;
  T decoded = encoded.get<T>();
  CHECK(decoded == value);
}

std::string random_word(std::mt19937_64& rng) {
  static const char* words[] = {"tokyo", "paris", "clock", "event", "note", "alpha", "beta"};
  return words[rng() % 7];
}

}  // namespace

TEST_CASE("canonical_task_key normalizes case whitespace and punctuation") {
  CHECK(canonical_task_key("Add  clock for Tokyo", "clock") ==
        canonical_task_key("add clock for tokyo", "clock"));
  CHECK(canonical_task_key("Add clock, for Tokyo!", "clock") ==
        canonical_task_key("add clock for tokyo", "clock"));
  CHECK(canonical_task_key("Add clock for Tokyo", "clock") !=
        canonical_task_key("Add clock for Paris", "clock"));
  CHECK(canonical_task_key("x", "a") != canonical_task_key("x", "b"));
  CHECK_THROWS_AS(canonical_task_key("", "clock"), InvalidInputError);
  CHECK_THROWS_AS(canonical_task_key("  !! ", "clock"), InvalidInputError);
}

TEST_CASE("digest_trajectory is content addressed") {
  Trajectory a = sample_trajectory(1);
  Trajectory b = sample_trajectory(1);
  CHECK(digest_trajectory(a) == digest_trajectory(b));

  Trajectory c = sample_trajectory(1);
  c.steps[1].action.text = "different";
  CHECK(digest_trajectory(a) != digest_trajectory(c));

  Trajectory d = sample_trajectory(1);
  std::swap(d.steps[0].observation, d.steps[1].observation);
  CHECK(digest_trajectory(a) != digest_trajectory(d));

  // the id field itself does not feed the digest
  Trajectory e = sample_trajectory(1);
  e.traj_id = "something-else";
  CHECK(digest_trajectory(a) == digest_trajectory(e));
}

TEST_CASE("task_id is a stable digest of app, normalized instruction, initial state") {
  InitialState init{"calendar", 7};
  std::string id1 = make_task_id("calendar", "Add clock for Tokyo", init);
  std::string id2 = make_task_id("calendar", "add  clock for tokyo", init);
  CHECK(id1 == id2);
  CHECK(id1.size() == 64);
  CHECK(id1 != make_task_id("calendar", "Add clock for Tokyo", InitialState{"calendar", 8}));
  CHECK(id1 != make_task_id("clock", "Add clock for Tokyo", init));
}

TEST_CASE("serialization round trips for every core type") {
  check_round_trip(Goal{"do a thing", std::nullopt});
  check_round_trip(Goal{"what is x?", "42"});
  check_round_trip(TemplateParam{"city", "a city", {"Tokyo", "Paris"}});

  TaskTemplate tmpl;
  tmpl.thought = "t";
  tmpl.instruction = "Add clock for {city}";
  tmpl.tag = "feature";
  tmpl.app_name = "clock";
  tmpl.params = {TemplateParam{"city", "a city", {"Tokyo", "Paris"}}};
  tmpl.guideline_id = "feature_use";
  tmpl.context_ref = "traj-1";
  tmpl.generator_kind = GeneratorKind::autoplay;
  check_round_trip(tmpl);

  check_round_trip(InitialState{"clock", 99, std::nullopt});
  check_round_trip(InitialState{"clock", 0, "snap-1"});

  TaskInstance inst;
  inst.goal = Goal{"Add clock for Tokyo", std::nullopt};
  inst.app_name = "clock";
  inst.initial_state = InitialState{"clock", 3};
  inst.template_ref = "tpl";
  inst.assignment = {{"city", "Tokyo"}};
  inst.task_id = make_task_id(inst.app_name, inst.goal.instruction, inst.initial_state);
  check_round_trip(inst);

  check_round_trip(make_click(Point{3, 4}));
  check_round_trip(make_click(Target{5}));
  check_round_trip(make_long_press(Point{1, 2}));
  check_round_trip(make_input_text(Target{2}, "hello"));
  check_round_trip(make_open_app("clock"));
  check_round_trip(make_scroll(ScrollDirection::down));
  check_round_trip(make_wait(5.0));
  check_round_trip(make_navigate_back());
  check_round_trip(make_navigate_home());
  check_round_trip(make_terminate());
  check_round_trip(make_answer("42"));

  check_round_trip(sample_screen());
  check_round_trip(sample_trajectory());
  check_round_trip(MemorySummary{"- a", "- b", "traj-1"});

  ContextTurn turn;
  turn.trajectory = sample_trajectory(2);
  turn.summary = MemorySummary{"- x", "- y", turn.trajectory.traj_id};
  check_round_trip(turn);

  EnvironmentContext ctx;
  ctx.app_name = "calendar";
  ctx.turns = {turn};
  check_round_trip(ctx);

  check_round_trip(GuidelinePrompt{"feature_use", Platform::mobile, "Feature use", "body"});

  VerifierJudgment judgment;
  judgment.screen_details = "- details";
  judgment.reasoning = "- because";
  judgment.result = JudgmentResult::success;
  judgment.verifier_model = "mock";
  judgment.frames_used = 8;
  check_round_trip(judgment);
}

TEST_CASE("randomized trajectory round trips") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    Trajectory t;
    t.purpose = TrajectoryPurpose::exploration;
    t.app_name = random_word(rng);
    t.initial_state = InitialState{t.app_name, rng()};
    int n = 1 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) {
      Step s;
      s.index = k;
      s.observation = sample_screen(static_cast<int>(rng() % 10));
      switch (rng() % 5) {
        case 0:
          s.action = make_click(
              Point{static_cast<int>(rng() % 1080), static_cast<int>(rng() % 2400)});
          break;
        case 1: s.action = make_scroll(ScrollDirection::up); break;
        case 2: s.action = make_input_text(Target{1}, random_word(rng)); break;
        case 3: s.action = make_wait(5); break;
        default: s.action = make_navigate_back(); break;
      }
      if (rng() % 2) s.reflection = random_word(rng);
      if (rng() % 2) s.action_ok = (rng() % 2) == 0;
      t.steps.push_back(std::move(s));
    }
    t.truncated = rng() % 2;
    t.traj_id = digest_trajectory(t);
    check_round_trip(t);
    CHECK(digest_trajectory(t) == digest_trajectory(json(t).get<Trajectory>()));
  }
}

TEST_CASE("template placeholder bijection is enforced at decode time") {
  json good{{"instruction", "Add clock for {city}"},
            {"app_name", "clock"},
            {"params", json::array({json{{"name", "city"},
                                         {"description", "a city"},
                                         {"possible_values", json::array({"Tokyo"})}}})}};
  CHECK_NOTHROW(good.get<TaskTemplate>());

  json missing_param = good;
  missing_param["params"] = json::array();
  CHECK_THROWS_AS(missing_param.get<TaskTemplate>(), ValidationError);

  json unused_param = good;
  unused_param["instruction"] = "Add clock";
  CHECK_THROWS_AS(unused_param.get<TaskTemplate>(), ValidationError);

  json dup_values = good;
  dup_values["params"][0]["possible_values"] = json::array({"Tokyo", "  TOKYO "});
  CHECK_THROWS_AS(dup_values.get<TaskTemplate>(), ValidationError);

  json bad_name = good;
  bad_name["instruction"] = "Add clock";
  bad_name["params"][0]["name"] = "ci ty";
  CHECK_THROWS_AS(bad_name.get<TaskTemplate>(), ValidationError);

  // A param referenced only from the answer field is legal.
  json answer_param = good;
  answer_param["instruction"] = "What time is it in {city}?";
  answer_param["answer"] = "the time in {city}";
  CHECK_NOTHROW(answer_param.get<TaskTemplate>());
}

TEST_CASE("goal validation") {
  CHECK_THROWS_AS((Goal{"", std::nullopt}).validate(), ValidationError);
  CHECK_THROWS_AS((Goal{"   ", std::nullopt}).validate(), ValidationError);
  CHECK_THROWS_AS((Goal{"Add clock for {city}", std::nullopt}).validate(), ValidationError);
  CHECK_NOTHROW((Goal{"Add clock for Tokyo", std::nullopt}).validate());
  // literal braces that are not identifier placeholders pass
  CHECK_NOTHROW((Goal{"type '{ }' into the field", std::nullopt}).validate());
}

TEST_CASE("action kind-specific field requirements") {
  Action a;
  a.kind = ActionKind::click;
  CHECK_THROWS_AS(a.validate(), ValidationError);
  a.target = Point{1, 2};
  CHECK_NOTHROW(a.validate());

  Action t;
  t.kind = ActionKind::input_text;
  t.target = Target{1};
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t.text = "x";
  CHECK_NOTHROW(t.validate());

  Action s;
  s.kind = ActionKind::scroll;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.direction = ScrollDirection::left;
  CHECK_NOTHROW(s.validate());

  Action o;
  o.kind = ActionKind::open_app;
  CHECK_THROWS_AS(o.validate(), ValidationError);
  o.app = "clock";
  CHECK_NOTHROW(o.validate());

  Action ans;
  ans.kind = ActionKind::answer;
  CHECK_THROWS_AS(ans.validate(), ValidationError);
  ans.text = "42";
  CHECK_NOTHROW(ans.validate());

  CHECK_NOTHROW(make_terminate().validate());
  CHECK_NOTHROW(make_navigate_home().validate());
}

TEST_CASE("trajectory invariants") {
  Trajectory t = sample_trajectory();
  CHECK_NOTHROW(t.validate());

  Trajectory gap = t;
  gap.steps[1].index = 5;
  CHECK_THROWS_AS(gap.validate(), ValidationError);

  Trajectory early_terminal = t;
  std::swap(early_terminal.steps[0], early_terminal.steps[1]);
  early_terminal.steps[0].index = 0;
  early_terminal.steps[1].index = 1;
  CHECK_THROWS_AS(early_terminal.validate(), ValidationError);

  Trajectory no_ref = t;
  no_ref.task_ref.reset();
  CHECK_THROWS_AS(no_ref.validate(), ValidationError);
  no_ref.purpose = TrajectoryPurpose::exploration;
  CHECK_NOTHROW(no_ref.validate());
}

TEST_CASE("placeholder scanning and substitution") {
  auto holes = find_placeholders("Add {city} clock at {time} in {city}");
  REQUIRE(holes.size() == 2);
  CHECK(holes[0] == "city");
  CHECK(holes[1] == "time");
  CHECK(find_placeholders("nothing here").empty());
  CHECK(find_placeholders("{ not a hole }").empty());

  std::map<std::string, std::string> vals{{"city", "Tokyo"}, {"time", "09:00"}};
  CHECK(substitute_placeholders("Add {city} clock at {time}", vals) ==
        "Add Tokyo clock at 09:00");
  CHECK(substitute_placeholders("keep {unknown}", vals) == "keep {unknown}");
}

TEST_CASE("normalize_text") {
  CHECK(normalize_text("  Hello,   WORLD!  ") == "hello world");
  CHECK(normalize_text("a-b_c") == "a b c");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("...") == "");
}
