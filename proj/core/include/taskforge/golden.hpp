#pragma once

#include "taskforge/verifier.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace taskforge {

// Instruction grammar shared by the golden suite builder, the scripted task
// generator, and the scripted oracle executor. Rendered instructions read as
// plain user requests but parse unambiguously.
namespace grammar {

struct CreateClause {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;  // (display label, value)
};

struct DeleteClause {
  std::string kind;
  std::string label_value;  // primary field value
};

struct EditClause {
  std::string field_label;
  std::string kind;
  std::string label_value;
  std::string new_value;
};

struct CountClause {
  std::string kind;
};

struct ReadClause {
  std::string field_label;
  std::string kind;
  std::string label_value;
};

using Clause = std::variant<CreateClause, DeleteClause, EditClause, CountClause, ReadClause>;

struct ParsedInstruction {
  std::string app;
  std::vector<Clause> clauses;
};

std::string render_clause(const Clause& c);
std::string render_instruction(const std::string& app, const std::vector<Clause>& clauses);
std::optional<ParsedInstruction> parse_instruction(const std::string& instruction);

}  // namespace grammar

// Deterministic suite of >= min_tasks sim tasks with privileged checkers,
// covering create/delete/edit/count/read/composition across all four apps.
std::vector<GoldenTask> build_golden_suite(std::uint64_t seed, int min_tasks = 40);

}  // namespace taskforge
