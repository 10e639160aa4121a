#pragma once

#include "taskforge/gateway.hpp"
#include "taskforge/screen.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taskforge {

// Deterministic scripted backends. Each handler is a pure function of the
// message list, so replaying a pipeline with them is byte-reproducible.
//
// Registered names:
//   dfs_explorer        depth-first novelty-seeking exploration policy
//   oracle_executor     solves instructions in the shared task grammar
//   random_executor     seeded uniform-random policy (seed from prompt digest)
//   summarizer          copies visited screens/data into the two-field summary
//   taskgen             guideline-aware canned template generator
//   verifier_heuristic  success iff trajectory terminated cleanly
//   categorizer_keyword keyword-rule task categorizer
//   reflector_echo      fixed reflection text
ScriptedHandler scripted_handler(const std::string& name);
std::vector<std::string> scripted_handler_names();

// Parsed form of render_text output; used by scripted policies and tests.
struct ParsedElement {
  int id = 0;
  std::string kind;
  std::string text;
  std::string state;
};

struct ParsedScreen {
  std::string app;
  std::string screen_id;
  std::string title;
  std::vector<ParsedElement> elements;
};

std::optional<ParsedScreen> parse_rendered_screen(const std::string& rendered);

}  // namespace taskforge
