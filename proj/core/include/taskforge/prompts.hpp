#pragma once

#include "taskforge/json.hpp"
#include "taskforge/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace taskforge::prompts {

// Versioned text assets. Substitution replaces only the {PLACEHOLDER} keys
// present in the map; all other braces (JSON examples, {param_name} notation)
// pass through untouched.
std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& subs);

const std::string& task_generator();
const std::string& no_exploration_generator();
const std::string& summarizer();
const std::string& planner();
const std::string& reflection();
const std::string& grounder();
const std::string& verifier();
const std::string& categorizer();
const std::string& iterative_proposer();
const std::string& iterative_relabel();

// Fixed exploration goal, app substituted verbatim.
std::string exploration_goal(const std::string& app);

// Shipped guidelines: mobile {feature_use, information_retrieval,
// feature_composition, subtask_repetition}, desktop {feature_use,
// feature_composition}.
const std::vector<GuidelinePrompt>& builtin_guidelines();
const GuidelinePrompt* find_guideline(const std::string& id, Platform platform);
// Extra guidelines from a directory of text files; the id is the file stem.
std::vector<GuidelinePrompt> load_guidelines_dir(const std::string& dir, Platform platform);

struct CategoryDef {
  std::string id;
  std::string description;
};
const std::vector<CategoryDef>& taxonomy(Platform p);
std::string taxonomy_text(Platform p);
json taxonomy_json(Platform p);

// Static feature descriptions of the built-in apps, used by the
// no-exploration generator.
const std::map<std::string, std::string>& builtin_app_descriptions();

}  // namespace taskforge::prompts
