#pragma once

#include <json.hpp>

#include <string>

namespace taskforge {

using json = nlohmann::json;

// Canonical bytes: compact separators, lexicographically sorted keys (the
// default object_t is std::map), UTF-8. Every digest and every JSONL line in
// the datasets goes through this.
inline std::string canonical_dump(const json& j) { return j.dump(); }

inline json parse_json(const std::string& text) { return json::parse(text); }

}  // namespace taskforge
