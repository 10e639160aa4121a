#include "taskforge/screen.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"

#include <algorithm>
#include <sstream>

namespace taskforge {

std::string to_string(ElementKind k) {
  switch (k) {
    case ElementKind::button: return "button";
    case ElementKind::text: return "text";
    case ElementKind::field: return "field";
    case ElementKind::list_item: return "list_item";
    case ElementKind::checkbox: return "checkbox";
    case ElementKind::menu_item: return "menu_item";
  }
  throw ValidationError("bad ElementKind");
}

ElementKind element_kind_from_string(const std::string& s) {
  if (s == "button") return ElementKind::button;
  if (s == "text") return ElementKind::text;
  if (s == "field") return ElementKind::field;
  if (s == "list_item") return ElementKind::list_item;
  if (s == "checkbox") return ElementKind::checkbox;
  if (s == "menu_item") return ElementKind::menu_item;
  throw ValidationError("unknown element kind: " + s);
}

std::string to_string(ElementState s) {
  switch (s) {
    case ElementState::enabled: return "enabled";
    case ElementState::disabled: return "disabled";
    case ElementState::checked: return "checked";
    case ElementState::unchecked: return "unchecked";
    case ElementState::none: return "none";
  }
  throw ValidationError("bad ElementState");
}

ElementState element_state_from_string(const std::string& s) {
  if (s == "enabled") return ElementState::enabled;
  if (s == "disabled") return ElementState::disabled;
  if (s == "checked") return ElementState::checked;
  if (s == "unchecked") return ElementState::unchecked;
  if (s == "none") return ElementState::none;
  throw ValidationError("unknown element state: " + s);
}

void to_json(json& j, const Bounds& b) { j = json::array({b.x, b.y, b.w, b.h}); }

void from_json(const json& j, Bounds& b) {
  b.x = j.at(0).get<int>();
  b.y = j.at(1).get<int>();
  b.w = j.at(2).get<int>();
  b.h = j.at(3).get<int>();
}

void to_json(json& j, const ScreenElement& e) {
  j = json{{"id", e.id},
           {"kind", to_string(e.kind)},
           {"text", e.text},
           {"bounds", e.bounds},
           {"state", to_string(e.state)}};
}

void from_json(const json& j, ScreenElement& e) {
  e.id = j.at("id").get<int>();
  e.kind = element_kind_from_string(j.at("kind").get<std::string>());
  e.text = j.at("text").get<std::string>();
  e.bounds = j.at("bounds").get<Bounds>();
  e.state = element_state_from_string(j.at("state").get<std::string>());
}

void to_json(json& j, const Screen& s) {
  j = json{{"app_name", s.app_name},
           {"screen_id", s.screen_id},
           {"title", s.title},
           {"elements", s.elements},
           {"scroll_offset", s.scroll_offset}};
  if (s.focused_element) j["focused_element"] = *s.focused_element;
}

void from_json(const json& j, Screen& s) {
  s.app_name = j.at("app_name").get<std::string>();
  s.screen_id = j.at("screen_id").get<std::string>();
  s.title = j.at("title").get<std::string>();
  s.elements = j.at("elements").get<std::vector<ScreenElement>>();
  s.scroll_offset = j.at("scroll_offset").get<int>();
  if (j.contains("focused_element") && !j.at("focused_element").is_null())
    s.focused_element = j.at("focused_element").get<int>();
  else
    s.focused_element.reset();
}

namespace {

std::string escape_line(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_text(const Screen& s) {
  std::ostringstream os;
  os << "app='" << escape_line(s.app_name) << "' screen='" << escape_line(s.screen_id)
     << "' title='" << escape_line(s.title) << "' scroll=" << s.scroll_offset << " focus=";
  if (s.focused_element)
    os << *s.focused_element;
  else
    os << "none";
  std::vector<ScreenElement> sorted = s.elements;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScreenElement& a, const ScreenElement& b) { return a.id < b.id; });
  for (const auto& e : sorted) {
    os << "\n[" << e.id << "] " << to_string(e.kind) << " '" << escape_line(e.text) << "' ("
       << e.bounds.x << "," << e.bounds.y << "," << e.bounds.w << "," << e.bounds.h << ") "
       << to_string(e.state);
  }
  return os.str();
}

std::string screen_digest(const Screen& s) {
  json j = s;
  return sha256_hex(canonical_dump(j));
}

}  // namespace taskforge
