#pragma once

#include "taskforge/env.hpp"
#include "taskforge/json.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace taskforge {

// ---------------------------------------------------------------------------
// App registry
// ---------------------------------------------------------------------------

struct FieldSpec {
  std::string name;   // "title"
  std::string label;  // "Title"
  std::vector<std::string> pool;  // seeded content values
};

struct EntityKindSpec {
  std::string kind;    // "event"
  std::string label;   // "Event"
  std::string plural;  // "events"
  std::vector<FieldSpec> fields;  // fields[0] is the primary (display) field
};

struct AppSpec {
  std::string app_name;
  std::string title;
  std::vector<EntityKindSpec> kinds;
  const EntityKindSpec* find_kind(const std::string& kind) const;
};

// The four built-in apps: calendar, notes, expenses, clock.
const std::vector<AppSpec>& sim_apps();
const AppSpec* find_app(const std::string& app_name);
// Maps a display name ("world clock" / "world clocks") back to a kind id.
std::optional<std::string> kind_from_display(const std::string& display);

// ---------------------------------------------------------------------------
// Device state
// ---------------------------------------------------------------------------

struct SimEntity {
  std::string kind;
  std::vector<std::string> values;  // aligned with EntityKindSpec::fields
  bool operator==(const SimEntity&) const = default;
};

struct OracleEntity {
  std::string app;
  std::string kind;
  std::map<std::string, std::string> fields;
};

struct OracleQuery {
  std::optional<std::string> app;
  std::optional<std::string> kind;
};

// Semantic role of each rendered element, aligned by index with
// Screen::elements. Transitions are interpreted through this table.
struct ElementRole {
  enum class Type {
    app_button,
    new_button,
    search_button,
    list_item,
    form_field,
    save_button,
    cancel_button,
    go_button,
    detail_text,
    edit_button,
    delete_button,
    menu_delete,
    menu_cancel
  };
  Type type = Type::detail_text;
  int index = -1;       // entity index or field index, role dependent
  std::string name;     // kind or app name, role dependent
};

struct RenderedScreen {
  Screen screen;
  std::vector<ElementRole> roles;
};

// Deterministic in-process device: four apps with seeded content, a screen
// stack, and pure transitions. Copyable; a snapshot is just a copy.
class SimDevice {
 public:
  SimDevice() = default;
  SimDevice(const std::string& start_app, std::uint64_t seed);

  RenderedScreen render() const;
  ActionOutcome apply(const Action& action);
  bool ended() const { return ended_; }
  const std::string& start_app() const { return start_app_; }
  const std::string& current_app() const;

  std::vector<OracleEntity> oracle(const OracleQuery& q) const;
  json state_json() const;
  std::string state_digest() const;

 private:
  struct Frame {
    enum class Kind { launcher, home, form, detail, search, menu };
    Kind kind = Kind::home;
    std::string app;
    int scroll = 0;
    std::optional<int> focused;
    std::string form_kind;
    std::vector<std::string> draft;
    std::optional<int> editing;
    int entity_index = -1;
    std::string query;
  };

  RenderedScreen render_frame(const Frame& f) const;
  ActionOutcome do_click(const RenderedScreen& r, int element_id, bool long_press);
  ActionOutcome do_input(const RenderedScreen& r, int element_id, const std::string& text);
  ActionOutcome do_scroll(ScrollDirection d);
  void erase_entity(const std::string& app, int index);
  Frame& top() { return stack_.back(); }
  const Frame& top() const { return stack_.back(); }

  std::string start_app_;
  std::uint64_t seed_ = 0;
  std::map<std::string, std::vector<SimEntity>> entities_;
  std::vector<Frame> stack_;
  bool ended_ = false;
};

// ---------------------------------------------------------------------------
// Env adapter
// ---------------------------------------------------------------------------

class SimEnv : public Env {
 public:
  std::vector<std::string> apps() override;
  std::pair<EnvSession, Screen> reset(const std::string& app, const InitialState& init) override;
  std::pair<Screen, ActionOutcome> step(const std::string& session_id,
                                        const Action& action) override;
  std::string snapshot(const std::string& session_id) override;
  std::pair<EnvSession, Screen> restore(const std::string& snapshot_id) override;
  Screen observe(const std::string& session_id) override;
  bool ended(const std::string& session_id) override;
  EnvSession session_info(const std::string& session_id) override;

  // Privileged ground truth; sim backend only.
  std::vector<OracleEntity> oracle_query(const std::string& session_id, const OracleQuery& q);
  SimDevice& device(const std::string& session_id);

 private:
  struct Session {
    std::unique_ptr<SimDevice> dev;
    EnvSession meta;
  };
  Session& find(const std::string& session_id);

  std::map<std::string, Session> sessions_;
  std::map<std::string, SimDevice> snapshots_;
  int next_session_ = 0;
  std::mutex mu_;
};

}  // namespace taskforge
