#include "taskforge/golden.hpp"

#include "taskforge/digest.hpp"
#include "taskforge/errors.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace taskforge {
namespace grammar {

namespace {

const EntityKindSpec* kind_spec(const std::string& kind) {
  for (const auto& app : sim_apps())
    if (const auto* k = app.find_kind(kind)) return k;
  return nullptr;
}

std::string kind_display(const std::string& kind) {
  const auto* k = kind_spec(kind);
  if (!k) return kind;
  std::string d = k->label;
  std::transform(d.begin(), d.end(), d.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return d;
}

std::string article(const std::string& noun) {
  static const std::string vowels = "aeiou";
  return (!noun.empty() && vowels.find(noun[0]) != std::string::npos) ? "an" : "a";
}

std::string plural_display(const std::string& kind) {
  const auto* k = kind_spec(kind);
  return k ? k->plural : kind + "s";
}

}  // namespace

std::string render_clause(const Clause& c) {
  if (const auto* cr = std::get_if<CreateClause>(&c)) {
    std::string d = kind_display(cr->kind);
    std::string out = "create " + article(d) + " " + d + " with ";
    for (std::size_t i = 0; i < cr->fields.size(); ++i) {
      if (i) out += ", ";
      out += cr->fields[i].first + " '" + cr->fields[i].second + "'";
    }
    return out;
  }
  if (const auto* dl = std::get_if<DeleteClause>(&c))
    return "delete the " + kind_display(dl->kind) + " '" + dl->label_value + "'";
  if (const auto* ed = std::get_if<EditClause>(&c))
    return "set " + ed->field_label + " of the " + kind_display(ed->kind) + " '" +
           ed->label_value + "' to '" + ed->new_value + "'";
  if (const auto* ct = std::get_if<CountClause>(&c))
    return "how many " + plural_display(ct->kind) + " are there?";
  if (const auto* rd = std::get_if<ReadClause>(&c))
    return "what is the " + rd->field_label + " of the " + kind_display(rd->kind) + " '" +
           rd->label_value + "'?";
  throw Error("render_clause: bad clause");
}

std::string render_instruction(const std::string& app, const std::vector<Clause>& clauses) {
  std::string out = "In the " + app + " app, ";
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) out += "; then ";
    out += render_clause(clauses[i]);
  }
  if (!out.empty() && out.back() != '?') out += ".";
  return out;
}

namespace {

std::optional<Clause> parse_clause(const std::string& text) {
  static const std::regex create_re(R"(^create an? ([a-z_ ]+?) with (.+)$)",
                                    std::regex::icase);
  static const std::regex field_re(R"(\s*([A-Za-z][A-Za-z ]*?) '([^']*)'\s*(?:,|$))");
  static const std::regex delete_re(R"(^delete the ([a-z_ ]+?) '([^']*)'$)", std::regex::icase);
  static const std::regex edit_re(
      R"(^set ([A-Za-z][A-Za-z ]*?) of the ([a-z_ ]+?) '([^']*)' to '([^']*)'$)",
      std::regex::icase);
  static const std::regex count_re(R"(^how many ([a-z_ ]+?) are there\?$)", std::regex::icase);
  static const std::regex read_re(
      R"(^what is the ([A-Za-z][A-Za-z ]*?) of the ([a-z_ ]+?) '([^']*)'\?$)",
      std::regex::icase);

  std::smatch m;
  if (std::regex_match(text, m, create_re)) {
    auto kind = kind_from_display(m[1]);
    if (!kind) return std::nullopt;
    CreateClause c;
    c.kind = *kind;
    std::string rest = m[2];
    auto begin = std::sregex_iterator(rest.begin(), rest.end(), field_re);
    for (auto it = begin; it != std::sregex_iterator(); ++it)
      c.fields.emplace_back((*it)[1], (*it)[2]);
    if (c.fields.empty()) return std::nullopt;
    return Clause{c};
  }
  if (std::regex_match(text, m, delete_re)) {
    auto kind = kind_from_display(m[1]);
    if (!kind) return std::nullopt;
    return Clause{DeleteClause{*kind, m[2]}};
  }
  if (std::regex_match(text, m, edit_re)) {
    auto kind = kind_from_display(m[2]);
    if (!kind) return std::nullopt;
    return Clause{EditClause{m[1], *kind, m[3], m[4]}};
  }
  if (std::regex_match(text, m, count_re)) {
    auto kind = kind_from_display(m[1]);
    if (!kind) return std::nullopt;
    return Clause{CountClause{*kind}};
  }
  if (std::regex_match(text, m, read_re)) {
    auto kind = kind_from_display(m[2]);
    if (!kind) return std::nullopt;
    return Clause{ReadClause{m[1], *kind, m[3]}};
  }
  return std::nullopt;
}

}  // namespace

std::optional<ParsedInstruction> parse_instruction(const std::string& instruction) {
  static const std::regex head_re(R"(^In the ([A-Za-z0-9_]+) app, (.+?)\.?$)",
                                  std::regex::icase);
  std::smatch m;
  if (!std::regex_match(instruction, m, head_re)) return std::nullopt;
  ParsedInstruction out;
  out.app = m[1];
  std::string rest = m[2];

  std::vector<std::string> parts;
  const std::string sep = "; then ";
  std::size_t pos = 0;
  while (true) {
    std::size_t next = rest.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(rest.substr(pos));
      break;
    }
    parts.push_back(rest.substr(pos, next - pos));
    pos = next + sep.size();
  }
  for (const auto& part : parts) {
    auto clause = parse_clause(part);
    if (!clause) return std::nullopt;
    out.clauses.push_back(std::move(*clause));
  }
  if (out.clauses.empty()) return std::nullopt;
  return out;
}

}  // namespace grammar

// ---------------------------------------------------------------------------
// Golden suite
// ---------------------------------------------------------------------------

namespace {

using grammar::Clause;
using grammar::CountClause;
using grammar::CreateClause;
using grammar::DeleteClause;
using grammar::EditClause;
using grammar::ReadClause;

struct SeededView {
  // Entities of one app instance, grouped per kind in insertion order.
  std::map<std::string, std::vector<std::vector<std::string>>> by_kind;
};

SeededView seeded_view(const std::string& app, std::uint64_t seed) {
  SimDevice dev(app, seed);
  SeededView v;
  for (const auto& e : dev.oracle(OracleQuery{app, std::nullopt})) {
    const AppSpec* spec = find_app(app);
    const EntityKindSpec* k = spec->find_kind(e.kind);
    std::vector<std::string> values;
    for (const auto& f : k->fields) values.push_back(e.fields.at(f.name));
    v.by_kind[e.kind].push_back(std::move(values));
  }
  return v;
}

std::string unused_primary(const EntityKindSpec& kspec,
                           const std::vector<std::vector<std::string>>& seeded, int skip) {
  std::set<std::string> used;
  for (const auto& vals : seeded) used.insert(vals[0]);
  int found = 0;
  for (const auto& candidate : kspec.fields[0].pool) {
    if (used.count(candidate)) continue;
    if (found++ == skip) return candidate;
  }
  // Pool exhausted (cannot happen with <=8 seeded of a 10-value pool).
  return kspec.fields[0].pool[skip % kspec.fields[0].pool.size()];
}

std::string other_pool_value(const FieldSpec& field, const std::string& current) {
  for (const auto& v : field.pool)
    if (v != current) return v;
  return current;
}

GoldenTask make_task(const std::string& app, std::uint64_t inst_seed,
                     const std::vector<Clause>& clauses, std::string checker,
                     std::map<std::string, std::string> args,
                     std::optional<std::string> answer = std::nullopt) {
  GoldenTask g;
  g.task.goal.instruction = grammar::render_instruction(app, clauses);
  g.task.goal.answer = std::move(answer);
  g.task.app_name = app;
  g.task.initial_state = InitialState{app, inst_seed};
  g.task.template_ref = "golden";
  g.task.task_id = make_task_id(app, g.task.goal.instruction, g.task.initial_state);
  g.checker_id = std::move(checker);
  g.checker_args = std::move(args);
  return g;
}

CreateClause create_clause(const EntityKindSpec& kspec, const std::string& primary,
                           int value_salt) {
  CreateClause c;
  c.kind = kspec.kind;
  c.fields.emplace_back(kspec.fields[0].label, primary);
  for (std::size_t i = 1; i < kspec.fields.size(); ++i) {
    const auto& pool = kspec.fields[i].pool;
    c.fields.emplace_back(kspec.fields[i].label, pool[(value_salt + i) % pool.size()]);
  }
  return c;
}

std::map<std::string, std::string> exists_args(const std::string& app,
                                               const EntityKindSpec& kspec,
                                               const CreateClause& c) {
  std::map<std::string, std::string> args{{"app", app}, {"kind", kspec.kind}};
  for (std::size_t i = 0; i < c.fields.size(); ++i)
    args[kspec.fields[i].name] = c.fields[i].second;
  return args;
}

}  // namespace

std::vector<GoldenTask> build_golden_suite(std::uint64_t seed, int min_tasks) {
  std::vector<GoldenTask> out;
  int per_app_index = 0;
  for (const auto& app : sim_apps()) {
    auto next_seed = [&] { return mix_seed(seed, "golden:" + app.app_name + ":" +
                                                     std::to_string(per_app_index++)); };
    const EntityKindSpec& k0 = app.kinds.front();
    const EntityKindSpec& klast = app.kinds.back();

    // 1-2. Plain creations with full field sets.
    for (int variant = 0; variant < 2; ++variant) {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      const EntityKindSpec& k = variant == 0 ? k0 : klast;
      CreateClause c = create_clause(k, unused_primary(k, view.by_kind[k.kind], variant),
                                     variant + 1);
      out.push_back(make_task(app.app_name, s, {Clause{c}}, "entity_exists",
                              exists_args(app.app_name, k, c)));
    }

    // 3. Repetition: delete two seeded entities of the same kind.
    {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      const auto& seeded = view.by_kind[k0.kind];
      DeleteClause d1{k0.kind, seeded[0][0]};
      DeleteClause d2{k0.kind, seeded[1][0]};
      out.push_back(make_task(
          app.app_name, s, {Clause{d1}, Clause{d2}}, "entity_count",
          {{"app", app.app_name},
           {"kind", k0.kind},
           {"count", std::to_string(static_cast<int>(seeded.size()) - 2)}}));
    }

    // 4. Single deletion.
    {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      const auto& seeded = view.by_kind[k0.kind];
      DeleteClause d{k0.kind, seeded[0][0]};
      out.push_back(make_task(app.app_name, s, {Clause{d}}, "entity_absent",
                              {{"app", app.app_name},
                               {"kind", k0.kind},
                               {k0.fields[0].name, seeded[0][0]}}));
    }

    // 5-6. Edits of one non-primary field.
    for (int variant = 0; variant < 2; ++variant) {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      const auto& seeded = view.by_kind[k0.kind];
      const auto& entity = seeded[variant % seeded.size()];
      std::size_t field_idx = std::min<std::size_t>(1 + variant, k0.fields.size() - 1);
      if (field_idx == 0) field_idx = k0.fields.size() - 1;
      std::string new_value = other_pool_value(k0.fields[field_idx], entity[field_idx]);
      EditClause e{k0.fields[field_idx].label, k0.kind, entity[0], new_value};
      out.push_back(make_task(app.app_name, s, {Clause{e}}, "field_equals",
                              {{"app", app.app_name},
                               {"kind", k0.kind},
                               {"match_field", k0.fields[0].name},
                               {"match_value", entity[0]},
                               {"field", k0.fields[field_idx].name},
                               {"expected", new_value}}));
    }

    // 7. Count question.
    {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      int n = static_cast<int>(view.by_kind[k0.kind].size());
      out.push_back(make_task(app.app_name, s, {Clause{CountClause{k0.kind}}}, "answer_matches",
                              {{"required", std::to_string(n)}}, std::to_string(n)));
    }

    // 8. Field lookup question.
    {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      const auto& entity = view.by_kind[k0.kind][0];
      std::size_t field_idx = k0.fields.size() > 1 ? 1 : 0;
      ReadClause r{k0.fields[field_idx].label, k0.kind, entity[0]};
      out.push_back(make_task(app.app_name, s, {Clause{r}}, "answer_matches",
                              {{"required", entity[field_idx]}}, entity[field_idx]));
    }

    // 9. Composition: create, then delete a seeded entity.
    {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      const auto& seeded = view.by_kind[k0.kind];
      CreateClause c = create_clause(k0, unused_primary(k0, seeded, 2), 3);
      DeleteClause d{k0.kind, seeded[seeded.size() - 1][0]};
      out.push_back(make_task(app.app_name, s, {Clause{c}, Clause{d}}, "entity_absent",
                              {{"app", app.app_name},
                               {"kind", k0.kind},
                               {k0.fields[0].name, seeded[seeded.size() - 1][0]}}));
    }

    // 10. One more creation with distinct values.
    {
      std::uint64_t s = next_seed();
      auto view = seeded_view(app.app_name, s);
      CreateClause c = create_clause(k0, unused_primary(k0, view.by_kind[k0.kind], 3), 5);
      out.push_back(make_task(app.app_name, s, {Clause{c}}, "entity_exists",
                              exists_args(app.app_name, k0, c)));
    }
  }

  if (static_cast<int>(out.size()) < min_tasks)
    throw Error("golden suite smaller than requested minimum");
  return out;
}

}  // namespace taskforge
