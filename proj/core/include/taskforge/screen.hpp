#pragma once

#include "taskforge/json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taskforge {

enum class ElementKind { button, text, field, list_item, checkbox, menu_item };
enum class ElementState { enabled, disabled, checked, unchecked, none };

std::string to_string(ElementKind k);
ElementKind element_kind_from_string(const std::string& s);
std::string to_string(ElementState s);
ElementState element_state_from_string(const std::string& s);

struct Bounds {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  bool operator==(const Bounds&) const = default;
  bool contains(int px, int py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
};

struct ScreenElement {
  int id = 0;
  ElementKind kind = ElementKind::text;
  std::string text;
  Bounds bounds;
  ElementState state = ElementState::none;
  bool operator==(const ScreenElement&) const = default;
};

// Structured observation. The logical display is 1080x2400 (mobile profile);
// element ids are unique per screen.
struct Screen {
  std::string app_name;
  std::string screen_id;
  std::string title;
  std::vector<ScreenElement> elements;
  int scroll_offset = 0;
  std::optional<int> focused_element;
  bool operator==(const Screen&) const = default;
};

inline constexpr int kDisplayWidth = 1080;
inline constexpr int kDisplayHeight = 2400;

void to_json(json& j, const Bounds& b);
void from_json(const json& j, Bounds& b);
void to_json(json& j, const ScreenElement& e);
void from_json(const json& j, ScreenElement& e);
void to_json(json& j, const Screen& s);
void from_json(const json& j, Screen& s);

// Deterministic text rendering of a screen: one header line, then one line
// per element (ordered by id) of the form `[id] kind 'text' (x,y,w,h) state`.
// Newlines inside element text are escaped so each element stays on one line.
std::string render_text(const Screen& s);

// sha256 over the canonical JSON encoding.
std::string screen_digest(const Screen& s);

}  // namespace taskforge
