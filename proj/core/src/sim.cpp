#include "taskforge/sim.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"

#include <algorithm>

namespace taskforge {

// ---------------------------------------------------------------------------
// App registry
// ---------------------------------------------------------------------------

namespace {

std::vector<AppSpec> build_apps() {
  std::vector<std::string> event_titles = {"Standup", "Dentist", "Gym", "Lunch", "Review",
                                           "Yoga", "Budget", "Groceries", "Flight", "Piano"};
  std::vector<std::string> dates = {"2025-03-03", "2025-03-07", "2025-03-12", "2025-03-18",
                                    "2025-03-21", "2025-04-02", "2025-04-09", "2025-04-15",
                                    "2025-04-23", "2025-05-01"};
  std::vector<std::string> times = {"06:30", "08:00", "09:15", "10:45", "12:00",
                                    "14:30", "16:00", "18:20", "20:05", "21:40"};
  std::vector<std::string> durations = {"15m", "30m", "45m", "1h", "90m",
                                        "2h", "3h", "20m", "50m", "75m"};
  std::vector<std::string> note_titles = {"Shopping List", "Meeting Notes", "Ideas",
                                          "Travel Plan", "Recipes", "Workout Log",
                                          "Book List", "Garden", "Journal", "Checklist"};
  std::vector<std::string> contents = {"remember the milk",       "draft agenda for monday",
                                       "pack charger and adapter", "call the plumber",
                                       "table for four at eight",  "check tire pressure",
                                       "water the ferns",          "renew library card",
                                       "book flights early",       "refill prescriptions"};
  std::vector<std::string> folders = {"Personal", "Work", "Ideas", "Archive"};
  std::vector<std::string> expense_names = {"Coffee", "Taxi", "Hotel", "Tickets", "Books",
                                            "Cinema", "Parking", "Snacks", "Museum", "Petrol"};
  std::vector<std::string> amounts = {"4.50", "12.00", "89.90", "23.75", "7.25",
                                      "150.00", "3.10", "42.00", "18.60", "64.30"};
  std::vector<std::string> categories = {"Food", "Travel", "Bills", "Fun", "Health", "Office"};
  std::vector<std::string> alarm_labels = {"Wake Up", "Medicine", "School Run", "Standup Call",
                                           "Stretch", "Lights Out", "Bus", "Swim", "Bread Run",
                                           "Quiet Hour"};
  std::vector<std::string> timer_labels = {"Pasta", "Tea", "Eggs", "Nap", "Laundry",
                                           "Workout", "Bread", "Rice", "Sauna", "Charge"};
  std::vector<std::string> cities = {"Tokyo", "Paris", "Berlin", "Sydney", "Cairo",
                                     "Lima", "Oslo", "Delhi", "Toronto", "Madrid"};

  std::vector<AppSpec> apps;
  apps.push_back(AppSpec{
      "calendar",
      "Calendar",
      {EntityKindSpec{"event",
                      "Event",
                      "events",
                      {FieldSpec{"title", "Title", event_titles},
                       FieldSpec{"date", "Date", dates},
                       FieldSpec{"start", "Start", times},
                       FieldSpec{"duration", "Duration", durations}}}}});
  apps.push_back(AppSpec{"notes",
                         "Notes",
                         {EntityKindSpec{"note",
                                         "Note",
                                         "notes",
                                         {FieldSpec{"title", "Title", note_titles},
                                          FieldSpec{"content", "Content", contents},
                                          FieldSpec{"folder", "Folder", folders}}}}});
  apps.push_back(AppSpec{"expenses",
                         "Expenses",
                         {EntityKindSpec{"expense",
                                         "Expense",
                                         "expenses",
                                         {FieldSpec{"name", "Name", expense_names},
                                          FieldSpec{"amount", "Amount", amounts},
                                          FieldSpec{"category", "Category", categories},
                                          FieldSpec{"note", "Note", contents}}}}});
  apps.push_back(AppSpec{"clock",
                         "Clock",
                         {EntityKindSpec{"alarm",
                                         "Alarm",
                                         "alarms",
                                         {FieldSpec{"label", "Label", alarm_labels},
                                          FieldSpec{"time", "Time", times}}},
                          EntityKindSpec{"timer",
                                         "Timer",
                                         "timers",
                                         {FieldSpec{"label", "Label", timer_labels},
                                          FieldSpec{"duration", "Duration", durations}}},
                          EntityKindSpec{"world_clock",
                                         "World Clock",
                                         "world clocks",
                                         {FieldSpec{"city", "City", cities}}}}});
  return apps;
}

constexpr int kRowX = 40;
constexpr int kRowW = 1000;
constexpr int kRowH = 120;
constexpr int kRowPitch = 150;
constexpr int kRowY0 = 160;
constexpr int kListWindow = 10;  // scroll pages by a fixed 10-item window

Bounds row_bounds(int row) { return Bounds{kRowX, kRowY0 + row * kRowPitch, kRowW, kRowH}; }

}  // namespace

const std::vector<AppSpec>& sim_apps() {
  static const std::vector<AppSpec> apps = build_apps();
  return apps;
}

const AppSpec* find_app(const std::string& app_name) {
  for (const auto& a : sim_apps())
    if (a.app_name == app_name) return &a;
  return nullptr;
}

const EntityKindSpec* AppSpec::find_kind(const std::string& kind) const {
  for (const auto& k : kinds)
    if (k.kind == kind) return &k;
  return nullptr;
}

std::optional<std::string> kind_from_display(const std::string& display) {
  std::string d = normalize_text(display);
  for (const auto& app : sim_apps()) {
    for (const auto& k : app.kinds) {
      if (d == normalize_text(k.kind) || d == normalize_text(k.label) ||
          d == normalize_text(k.plural))
        return k.kind;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

SimDevice::SimDevice(const std::string& start_app, std::uint64_t seed)
    : start_app_(start_app), seed_(seed) {
  const AppSpec* spec = find_app(start_app);
  if (!spec) throw UnknownAppError("unknown app: " + start_app);
  int count = 4 + static_cast<int>(seed % 5);  // seeded entities per app
  for (const auto& app : sim_apps()) {
    std::uint64_t rng = mix_seed(seed, app.app_name);
    std::map<std::string, std::uint64_t> primary_start;
    std::map<std::string, int> kind_counts;
    auto& store = entities_[app.app_name];
    for (int i = 0; i < count; ++i) {
      const auto& kspec = app.kinds[i % app.kinds.size()];
      if (!primary_start.count(kspec.kind))
        primary_start[kspec.kind] = splitmix64(rng) % kspec.fields[0].pool.size();
      int ordinal = kind_counts[kspec.kind]++;
      SimEntity e;
      e.kind = kspec.kind;
      for (std::size_t f = 0; f < kspec.fields.size(); ++f) {
        const auto& pool = kspec.fields[f].pool;
        if (f == 0) {
          // Primary values drawn without replacement so labels stay unique.
          e.values.push_back(pool[(primary_start[kspec.kind] + ordinal) % pool.size()]);
        } else {
          e.values.push_back(pool[splitmix64(rng) % pool.size()]);
        }
      }
      store.push_back(std::move(e));
    }
  }
  Frame home;
  home.kind = Frame::Kind::home;
  home.app = start_app;
  stack_.push_back(home);
}

const std::string& SimDevice::current_app() const { return top().app; }

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

RenderedScreen SimDevice::render() const { return render_frame(top()); }

RenderedScreen SimDevice::render_frame(const Frame& f) const {
  RenderedScreen out;
  Screen& s = out.screen;
  s.app_name = f.app;
  s.scroll_offset = f.scroll;
  s.focused_element = f.focused;
  int id = 0;
  auto add = [&](ElementKind kind, std::string text, ElementRole role,
                 ElementState state = ElementState::enabled) {
    ScreenElement e;
    e.id = id;
    e.kind = kind;
    e.text = std::move(text);
    e.bounds = row_bounds(id);
    e.state = state;
    s.elements.push_back(std::move(e));
    out.roles.push_back(role);
    ++id;
  };

  switch (f.kind) {
    case Frame::Kind::launcher: {
      s.screen_id = "launcher";
      s.title = "Home";
      for (const auto& app : sim_apps())
        add(ElementKind::button, app.title,
            ElementRole{ElementRole::Type::app_button, -1, app.app_name});
      break;
    }
    case Frame::Kind::home: {
      const AppSpec* app = find_app(f.app);
      s.screen_id = "home";
      s.title = app->title;
      for (const auto& k : app->kinds)
        add(ElementKind::button, "New " + k.label,
            ElementRole{ElementRole::Type::new_button, -1, k.kind});
      add(ElementKind::button, "Search", ElementRole{ElementRole::Type::search_button, -1, ""});
      const auto& store = entities_.at(f.app);
      int from = f.scroll;
      int to = std::min<int>(static_cast<int>(store.size()), from + kListWindow);
      for (int i = from; i < to; ++i) {
        const auto& k = *app->find_kind(store[i].kind);
        add(ElementKind::list_item, k.label + ": " + store[i].values[0],
            ElementRole{ElementRole::Type::list_item, i, store[i].kind}, ElementState::none);
      }
      break;
    }
    case Frame::Kind::form: {
      const AppSpec* app = find_app(f.app);
      const EntityKindSpec* k = app->find_kind(f.form_kind);
      s.screen_id = "form";
      s.title = (f.editing ? "Edit " : "New ") + k->label;
      for (std::size_t i = 0; i < k->fields.size(); ++i) {
        std::string text = k->fields[i].label + ":";
        if (!f.draft[i].empty()) text += " " + f.draft[i];
        add(ElementKind::field, text,
            ElementRole{ElementRole::Type::form_field, static_cast<int>(i), k->kind});
      }
      add(ElementKind::button, "Save", ElementRole{ElementRole::Type::save_button, -1, ""});
      add(ElementKind::button, "Cancel", ElementRole{ElementRole::Type::cancel_button, -1, ""});
      break;
    }
    case Frame::Kind::detail: {
      const AppSpec* app = find_app(f.app);
      const auto& store = entities_.at(f.app);
      const SimEntity& e = store.at(f.entity_index);
      const EntityKindSpec* k = app->find_kind(e.kind);
      s.screen_id = "detail";
      s.title = e.values[0];
      for (std::size_t i = 0; i < k->fields.size(); ++i)
        add(ElementKind::text, k->fields[i].label + ": " + e.values[i],
            ElementRole{ElementRole::Type::detail_text, static_cast<int>(i), k->kind},
            ElementState::none);
      add(ElementKind::button, "Edit", ElementRole{ElementRole::Type::edit_button, -1, ""});
      add(ElementKind::button, "Delete", ElementRole{ElementRole::Type::delete_button, -1, ""});
      break;
    }
    case Frame::Kind::search: {
      const AppSpec* app = find_app(f.app);
      s.screen_id = "search";
      s.title = "Search";
      std::string qtext = "Query:";
      if (!f.query.empty()) qtext += " " + f.query;
      add(ElementKind::field, qtext, ElementRole{ElementRole::Type::form_field, 0, ""});
      add(ElementKind::button, "Go", ElementRole{ElementRole::Type::go_button, -1, ""});
      if (!f.query.empty()) {
        const auto& store = entities_.at(f.app);
        std::string q = normalize_text(f.query);
        std::vector<int> hits;
        for (std::size_t i = 0; i < store.size(); ++i) {
          for (const auto& v : store[i].values) {
            if (normalize_text(v).find(q) != std::string::npos) {
              hits.push_back(static_cast<int>(i));
              break;
            }
          }
        }
        int from = std::min<int>(f.scroll, static_cast<int>(hits.size()));
        int to = std::min<int>(static_cast<int>(hits.size()), from + kListWindow);
        for (int h = from; h < to; ++h) {
          int i = hits[h];
          const auto& k = *app->find_kind(store[i].kind);
          add(ElementKind::list_item, k.label + ": " + store[i].values[0],
              ElementRole{ElementRole::Type::list_item, i, store[i].kind}, ElementState::none);
        }
      }
      break;
    }
    case Frame::Kind::menu: {
      s.screen_id = "menu";
      s.title = "Actions";
      add(ElementKind::menu_item, "Delete", ElementRole{ElementRole::Type::menu_delete, -1, ""});
      add(ElementKind::menu_item, "Cancel", ElementRole{ElementRole::Type::menu_cancel, -1, ""});
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transitions
// ---------------------------------------------------------------------------

namespace {

// Topmost element whose bounds contain the point; ties broken by highest id.
std::optional<int> hit_test(const Screen& s, Point p) {
  std::optional<int> best;
  for (const auto& e : s.elements) {
    if (e.bounds.contains(p.x, p.y)) {
      if (!best || e.id > *best) best = e.id;
    }
  }
  return best;
}

}  // namespace

ActionOutcome SimDevice::apply(const Action& action) {
  if (ended_) throw SessionEndedError("session ended");
  action.validate();

  RenderedScreen r = render();
  auto resolve = [&](const Target& t) -> std::optional<int> {
    if (std::holds_alternative<int>(t)) {
      int id = std::get<int>(t);
      if (id >= 0 && id < static_cast<int>(r.screen.elements.size())) return id;
      return std::nullopt;
    }
    return hit_test(r.screen, std::get<Point>(t));
  };

  switch (action.kind) {
    case ActionKind::click:
    case ActionKind::long_press: {
      auto id = resolve(*action.target);
      if (!id) return {false, "no element at target"};
      return do_click(r, *id, action.kind == ActionKind::long_press);
    }
    case ActionKind::input_text: {
      auto id = resolve(*action.target);
      if (!id) return {false, "no element at target"};
      return do_input(r, *id, *action.text);
    }
    case ActionKind::scroll:
      return do_scroll(*action.direction);
    case ActionKind::wait:
      return {true, "waited"};
    case ActionKind::navigate_back:
      if (stack_.size() <= 1) return {false, "at root"};
      stack_.pop_back();
      return {true, "back"};
    case ActionKind::navigate_home: {
      Frame launcher;
      launcher.kind = Frame::Kind::launcher;
      launcher.app = "";
      stack_.assign(1, launcher);
      return {true, "home"};
    }
    case ActionKind::open_app: {
      if (!find_app(*action.app)) return {false, "unknown app: " + *action.app};
      Frame home;
      home.kind = Frame::Kind::home;
      home.app = *action.app;
      stack_.assign(1, home);
      return {true, "opened " + *action.app};
    }
    case ActionKind::terminate:
      ended_ = true;
      return {true, "terminated"};
    case ActionKind::answer:
      ended_ = true;
      return {true, "answered"};
  }
  return {false, "unhandled action"};
}

ActionOutcome SimDevice::do_click(const RenderedScreen& r, int element_id, bool long_press) {
  const ElementRole& role = r.roles.at(element_id);
  Frame& f = top();
  f.focused.reset();

  if (long_press) {
    if (role.type == ElementRole::Type::list_item) {
      Frame menu;
      menu.kind = Frame::Kind::menu;
      menu.app = f.app;
      menu.entity_index = role.index;
      stack_.push_back(menu);
      return {true, "menu opened"};
    }
    return {false, "no effect"};
  }

  switch (role.type) {
    case ElementRole::Type::app_button: {
      Frame home;
      home.kind = Frame::Kind::home;
      home.app = role.name;
      stack_.push_back(home);
      return {true, "opened " + role.name};
    }
    case ElementRole::Type::new_button: {
      const AppSpec* app = find_app(f.app);
      const EntityKindSpec* k = app->find_kind(role.name);
      Frame form;
      form.kind = Frame::Kind::form;
      form.app = f.app;
      form.form_kind = role.name;
      form.draft.assign(k->fields.size(), "");
      stack_.push_back(form);
      return {true, "new " + role.name + " form"};
    }
    case ElementRole::Type::search_button: {
      Frame search;
      search.kind = Frame::Kind::search;
      search.app = f.app;
      stack_.push_back(search);
      return {true, "search opened"};
    }
    case ElementRole::Type::list_item: {
      Frame detail;
      detail.kind = Frame::Kind::detail;
      detail.app = f.app;
      detail.entity_index = role.index;
      stack_.push_back(detail);
      return {true, "opened item"};
    }
    case ElementRole::Type::form_field: {
      f.focused = element_id;
      return {true, "focused"};
    }
    case ElementRole::Type::save_button: {
      const AppSpec* app = find_app(f.app);
      const EntityKindSpec* k = app->find_kind(f.form_kind);
      if (f.draft[0].empty()) return {false, k->fields[0].label + " required"};
      auto& store = entities_[f.app];
      if (f.editing) {
        store.at(*f.editing).values = f.draft;
      } else {
        SimEntity e;
        e.kind = f.form_kind;
        e.values = f.draft;
        store.push_back(std::move(e));
      }
      stack_.pop_back();
      return {true, "saved"};
    }
    case ElementRole::Type::cancel_button:
      stack_.pop_back();
      return {true, "cancelled"};
    case ElementRole::Type::go_button:
      f.scroll = 0;
      return {true, "search ran"};
    case ElementRole::Type::edit_button: {
      const auto& store = entities_.at(f.app);
      const SimEntity& e = store.at(f.entity_index);
      Frame form;
      form.kind = Frame::Kind::form;
      form.app = f.app;
      form.form_kind = e.kind;
      form.draft = e.values;
      form.editing = f.entity_index;
      stack_.push_back(form);
      return {true, "edit form"};
    }
    case ElementRole::Type::delete_button: {
      int idx = f.entity_index;
      std::string app = f.app;
      stack_.pop_back();
      erase_entity(app, idx);
      return {true, "deleted"};
    }
    case ElementRole::Type::menu_delete: {
      int idx = f.entity_index;
      std::string app = f.app;
      stack_.pop_back();
      erase_entity(app, idx);
      return {true, "deleted"};
    }
    case ElementRole::Type::menu_cancel:
      stack_.pop_back();
      return {true, "cancelled"};
    case ElementRole::Type::detail_text:
      return {false, "no effect"};
  }
  return {false, "no effect"};
}

ActionOutcome SimDevice::do_input(const RenderedScreen& r, int element_id,
                                  const std::string& text) {
  const ElementRole& role = r.roles.at(element_id);
  if (role.type != ElementRole::Type::form_field) return {false, "not a text field"};
  Frame& f = top();
  f.focused = element_id;
  if (f.kind == Frame::Kind::form) {
    f.draft.at(role.index) = text;
    return {true, "typed"};
  }
  if (f.kind == Frame::Kind::search) {
    f.query = text;
    f.scroll = 0;
    return {true, "typed"};
  }
  return {false, "not a text field"};
}

ActionOutcome SimDevice::do_scroll(ScrollDirection d) {
  Frame& f = top();
  if (d == ScrollDirection::left || d == ScrollDirection::right)
    return {false, "horizontal scroll not supported"};
  if (f.kind != Frame::Kind::home && f.kind != Frame::Kind::search)
    return {false, "nothing to scroll"};

  int total = 0;
  if (f.kind == Frame::Kind::home) {
    total = static_cast<int>(entities_.at(f.app).size());
  } else if (!f.query.empty()) {
    std::string q = normalize_text(f.query);
    for (const auto& e : entities_.at(f.app)) {
      for (const auto& v : e.values) {
        if (normalize_text(v).find(q) != std::string::npos) {
          ++total;
          break;
        }
      }
    }
  }

  if (d == ScrollDirection::down) {
    if (f.scroll + kListWindow < total) {
      f.scroll += kListWindow;
      return {true, "scrolled down"};
    }
    return {false, "end of list"};
  }
  if (f.scroll > 0) {
    f.scroll -= kListWindow;
    return {true, "scrolled up"};
  }
  return {false, "top of list"};
}

void SimDevice::erase_entity(const std::string& app, int index) {
  auto& store = entities_.at(app);
  store.erase(store.begin() + index);
  // Keep indices held by lower frames in sync.
  std::vector<std::size_t> drop;
  for (std::size_t i = 0; i < stack_.size(); ++i) {
    Frame& f = stack_[i];
    if (f.app != app) continue;
    if (f.kind == Frame::Kind::detail || f.kind == Frame::Kind::menu) {
      if (f.entity_index == index)
        drop.push_back(i);
      else if (f.entity_index > index)
        --f.entity_index;
    }
    if (f.kind == Frame::Kind::form && f.editing) {
      if (*f.editing == index)
        f.editing.reset();
      else if (*f.editing > index)
        --*f.editing;
    }
  }
  for (auto it = drop.rbegin(); it != drop.rend(); ++it)
    stack_.erase(stack_.begin() + *it);
  if (stack_.empty()) {
    Frame home;
    home.kind = Frame::Kind::home;
    home.app = app;
    stack_.push_back(home);
  }
}

// ---------------------------------------------------------------------------
// Oracle and state
// ---------------------------------------------------------------------------

std::vector<OracleEntity> SimDevice::oracle(const OracleQuery& q) const {
  std::vector<OracleEntity> out;
  for (const auto& app : sim_apps()) {
    if (q.app && *q.app != app.app_name) continue;
    for (const auto& e : entities_.at(app.app_name)) {
      if (q.kind && *q.kind != e.kind) continue;
      OracleEntity oe;
      oe.app = app.app_name;
      oe.kind = e.kind;
      const EntityKindSpec* k = app.find_kind(e.kind);
      for (std::size_t i = 0; i < k->fields.size(); ++i)
        oe.fields[k->fields[i].name] = e.values[i];
      out.push_back(std::move(oe));
    }
  }
  return out;
}

json SimDevice::state_json() const {
  json apps = json::object();
  for (const auto& [name, store] : entities_) {
    json list = json::array();
    for (const auto& e : store) list.push_back(json{{"kind", e.kind}, {"values", e.values}});
    apps[name] = list;
  }
  json frames = json::array();
  for (const auto& f : stack_) {
    json jf{{"kind", static_cast<int>(f.kind)}, {"app", f.app}, {"scroll", f.scroll},
            {"form_kind", f.form_kind}, {"draft", f.draft}, {"entity_index", f.entity_index},
            {"query", f.query}};
    if (f.focused) jf["focused"] = *f.focused;
    if (f.editing) jf["editing"] = *f.editing;
    frames.push_back(jf);
  }
  return json{{"apps", apps}, {"stack", frames}, {"ended", ended_}};
}

std::string SimDevice::state_digest() const { return sha256_hex(canonical_dump(state_json())); }

// ---------------------------------------------------------------------------
// SimEnv
// ---------------------------------------------------------------------------

std::vector<std::string> SimEnv::apps() {
  std::vector<std::string> out;
  for (const auto& a : sim_apps()) out.push_back(a.app_name);
  return out;
}

std::pair<EnvSession, Screen> SimEnv::reset(const std::string& app, const InitialState& init) {
  if (init.snapshot_id) return restore(*init.snapshot_id);
  std::lock_guard lock(mu_);
  Session s;
  s.dev = std::make_unique<SimDevice>(app, init.seed);
  s.meta = EnvSession{"sess-" + std::to_string(next_session_++), EnvBackend::sim, app, 0};
  Screen screen = s.dev->render().screen;
  std::string id = s.meta.session_id;
  EnvSession meta = s.meta;
  sessions_.emplace(id, std::move(s));
  return {meta, screen};
}

SimEnv::Session& SimEnv::find(const std::string& session_id) {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw EnvError("unknown session: " + session_id);
  return it->second;
}

std::pair<Screen, ActionOutcome> SimEnv::step(const std::string& session_id,
                                              const Action& action) {
  std::lock_guard lock(mu_);
  Session& s = find(session_id);
  ActionOutcome outcome = s.dev->apply(action);
  s.meta.step_count += 1;
  return {s.dev->render().screen, outcome};
}

std::string SimEnv::snapshot(const std::string& session_id) {
  std::lock_guard lock(mu_);
  Session& s = find(session_id);
  // Content-addressed so ids are stable across runs and scheduling orders.
  std::string id = "snap-" + s.dev->state_digest();
  snapshots_.insert_or_assign(id, *s.dev);
  return id;
}

std::pair<EnvSession, Screen> SimEnv::restore(const std::string& snapshot_id) {
  std::lock_guard lock(mu_);
  auto it = snapshots_.find(snapshot_id);
  if (it == snapshots_.end()) throw SnapshotError("unknown snapshot: " + snapshot_id);
  Session s;
  s.dev = std::make_unique<SimDevice>(it->second);  // independent copy
  s.meta = EnvSession{"sess-" + std::to_string(next_session_++), EnvBackend::sim,
                      s.dev->start_app(), 0};
  Screen screen = s.dev->render().screen;
  std::string id = s.meta.session_id;
  EnvSession meta = s.meta;
  sessions_.emplace(id, std::move(s));
  return {meta, screen};
}

Screen SimEnv::observe(const std::string& session_id) {
  std::lock_guard lock(mu_);
  return find(session_id).dev->render().screen;
}

bool SimEnv::ended(const std::string& session_id) {
  std::lock_guard lock(mu_);
  return find(session_id).dev->ended();
}

EnvSession SimEnv::session_info(const std::string& session_id) {
  std::lock_guard lock(mu_);
  return find(session_id).meta;
}

std::vector<OracleEntity> SimEnv::oracle_query(const std::string& session_id,
                                               const OracleQuery& q) {
  std::lock_guard lock(mu_);
  return find(session_id).dev->oracle(q);
}

SimDevice& SimEnv::device(const std::string& session_id) {
  std::lock_guard lock(mu_);
  return *find(session_id).dev;
}

}  // namespace taskforge
