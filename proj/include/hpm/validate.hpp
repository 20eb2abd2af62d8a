#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hpm/genealogy.hpp"
#include "hpm/model.hpp"

namespace hpm {

enum class Severity { error, warning };

inline std::string_view severity_name(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

// Rule vocabulary shared by the model validator and the document checker.
enum class Rule {
  elementary_part_cardinality,
  composite_has_process,
  mixed_input_kinds,
  dangling_ref,
  genealogy_cycle,
  state_order,
  kind_mismatch,
  duplicate_id,
  xml_syntax,
  unknown_namespace,
  schema_violation,
};

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::elementary_part_cardinality: return "ElementaryPartCardinality";
    case Rule::composite_has_process: return "CompositeHasProcess";
    case Rule::mixed_input_kinds: return "MixedInputKinds";
    case Rule::dangling_ref: return "DanglingRef";
    case Rule::genealogy_cycle: return "GenealogyCycle";
    case Rule::state_order: return "StateOrder";
    case Rule::kind_mismatch: return "KindMismatch";
    case Rule::duplicate_id: return "DuplicateId";
    case Rule::xml_syntax: return "XmlSyntax";
    case Rule::unknown_namespace: return "UnknownNamespace";
    case Rule::schema_violation: return "SchemaViolation";
  }
  return "UnknownRule";
}

struct Violation {
  Severity severity = Severity::error;
  Rule rule = Rule::schema_violation;
  std::string entity;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> entries;

  std::size_t error_count() const {
    std::size_t n = 0;
    for (const Violation& v : entries)
      if (v.severity == Severity::error) ++n;
    return n;
  }
  bool ok() const { return error_count() == 0; }
  bool has(Rule r) const {
    for (const Violation& v : entries)
      if (v.rule == r) return true;
    return false;
  }
  void add(Rule r, std::string entity, std::string message,
           Severity severity = Severity::error) {
    entries.push_back({severity, r, std::move(entity), std::move(message)});
  }
};

namespace detail {

// Referential integrity only; shared between parse_hpm (which refuses models
// with dangling references) and validate_model.
inline void check_references(const Model& m, ValidationReport& report) {
  auto dangle = [&](const std::string& entity, const std::string& message) {
    report.add(Rule::dangling_ref, entity, message);
  };
  for (const auto& [id, state] : m.states) {
    if (m.holons.count(state.holon) == 0)
      dangle(id.value, "state refers to unknown holon '" + state.holon.value + "'");
  }
  for (const auto& [id, obs] : m.observations) {
    if (m.holons.count(obs.holon) == 0)
      dangle(id.value, "observation refers to unknown holon '" + obs.holon.value + "'");
  }
  for (const auto& [id, holon] : m.holons) {
    for (const StateId& sid : holon.state_history) {
      auto it = m.states.find(sid);
      if (it == m.states.end())
        dangle(id.value, "state history refers to unknown state '" + sid.value + "'");
      else if (it->second.holon != id)
        dangle(id.value, "state history lists state '" + sid.value + "' of another holon");
    }
    for (const StateId& sid : holon.physical_track) {
      auto it = m.observations.find(sid);
      if (it == m.observations.end())
        dangle(id.value, "physical track refers to unknown observation '" + sid.value + "'");
      else if (it->second.holon != id)
        dangle(id.value, "physical track lists observation '" + sid.value + "' of another holon");
    }
  }
  for (const auto& [id, pi] : m.process_instances) {
    if (m.processes.count(pi.process) == 0)
      dangle(id.value, "instance refers to unknown process '" + pi.process.value + "'");
    for (const StateId& sid : pi.input_states)
      if (m.states.count(sid) == 0)
        dangle(id.value, "instance input refers to unknown state '" + sid.value + "'");
    for (const HolonId& hid : pi.output_holons)
      if (m.holons.count(hid) == 0)
        dangle(id.value, "instance output refers to unknown holon '" + hid.value + "'");
    for (const ResourceId& rid : pi.resources)
      if (m.resources.count(rid) == 0)
        dangle(id.value, "instance refers to unknown resource '" + rid.value + "'");
    for (const ResourceId& rid : pi.personnel)
      if (m.resources.count(rid) == 0)
        dangle(id.value, "instance personnel refers to unknown resource '" + rid.value + "'");
  }
  for (const auto& [id, flow] : m.flows) {
    for (const std::string& member : flow.members) {
      bool known = false;
      switch (flow.kind) {
        case FlowKind::holon: known = m.holons.count(HolonId(member)) != 0; break;
        case FlowKind::informational:
          known = find_holon_by_informational_id(m, member) != nullptr;
          break;
        case FlowKind::physical: known = find_holon_by_physical_id(m, member) != nullptr; break;
      }
      if (!known)
        dangle(id.value, "flow member '" + member + "' does not name a " +
                             std::string(flow_kind_name(flow.kind)) + " entity");
    }
  }
  for (const AssemblyEdge& e : m.assembly_edges) {
    if (m.holons.count(e.parent) == 0)
      dangle(e.child.value, "assembly edge refers to unknown parent '" + e.parent.value + "'");
    if (m.holons.count(e.child) == 0)
      dangle(e.parent.value, "assembly edge refers to unknown child '" + e.child.value + "'");
  }
}

inline void check_genealogy_cycles(const Model& m, ValidationReport& report) {
  // Iterative three-color DFS over the genealogy edge relation.
  std::multimap<HolonId, HolonId> children;
  std::set<std::pair<HolonId, HolonId>> dedup;
  for (const GenealogyEdge& e : all_genealogy_edges(m))
    if (dedup.insert({e.parent, e.child}).second) children.emplace(e.parent, e.child);

  std::map<HolonId, int> color;  // 0 white, 1 gray, 2 black
  for (const auto& [start, holon] : m.holons) {
    if (color[start] != 0) continue;
    std::vector<std::pair<HolonId, bool>> stack{{start, false}};
    while (!stack.empty()) {
      auto [node, done] = stack.back();
      stack.pop_back();
      if (done) {
        color[node] = 2;
        continue;
      }
      if (color[node] == 2) continue;
      color[node] = 1;
      stack.push_back({node, true});
      auto [lo, hi] = children.equal_range(node);
      for (auto it = lo; it != hi; ++it) {
        if (color[it->second] == 1) {
          report.add(Rule::genealogy_cycle, it->second.value,
                     "genealogy cycle through edge " + node.value + " -> " + it->second.value);
        } else if (color[it->second] == 0) {
          stack.push_back({it->second, false});
        }
      }
    }
  }
}

}  // namespace detail

// Mechanizes the meta-model constraints over an arbitrary model value.
// Violations are data, not errors: the report is always produced.
inline ValidationReport validate_model(const Model& m) {
  ValidationReport report;
  detail::check_references(m, report);

  std::set<HolonId> produced;
  for (const auto& [id, pi] : m.process_instances)
    produced.insert(pi.output_holons.begin(), pi.output_holons.end());
  std::set<HolonId> assembled;
  for (const AssemblyEdge& e : m.assembly_edges) assembled.insert(e.child);

  for (const auto& [id, holon] : m.holons) {
    if (holon.kind == HolonKind::elementary) {
      if (!holon.physical)
        report.add(Rule::elementary_part_cardinality, id.value,
                   "elementary holon lacks its physical part");
      else if (holon.physical->tag.empty())
        report.add(Rule::elementary_part_cardinality, id.value,
                   "elementary holon has an empty physical tag");
      if (produced.count(id) || assembled.count(id))
        report.add(Rule::kind_mismatch, id.value,
                   "elementary holon is listed as a process or assembly output");
    } else {
      if (holon.physical)
        report.add(Rule::elementary_part_cardinality, id.value,
                   "composite holon carries a stored physical part");
      if (!produced.count(id) && !assembled.count(id))
        report.add(Rule::composite_has_process, id.value,
                   "composite holon is not the output of any process instance");
    }
    if (holon.informational.id.empty())
      report.add(Rule::elementary_part_cardinality, id.value,
                 "holon lacks an informational part id");
    // Strict timestamp order along both tracks.
    const State* prev = nullptr;
    for (const StateId& sid : holon.state_history) {
      auto it = m.states.find(sid);
      if (it == m.states.end()) continue;
      if (prev && it->second.timestamp <= prev->timestamp)
        report.add(Rule::state_order, id.value,
                   "state '" + sid.value + "' does not advance the holon's history");
      prev = &it->second;
    }
    const Observation* prev_obs = nullptr;
    for (const StateId& sid : holon.physical_track) {
      auto it = m.observations.find(sid);
      if (it == m.observations.end()) continue;
      if (prev_obs && it->second.timestamp <= prev_obs->timestamp)
        report.add(Rule::state_order, id.value,
                   "observation '" + sid.value + "' does not advance the physical track");
      prev_obs = &it->second;
    }
    if (holon.kind == HolonKind::composite && !holon.physical_track.empty())
      report.add(Rule::kind_mismatch, id.value,
                 "composite holon carries a physical track");
  }

  for (const auto& [id, state] : m.states) {
    auto it = m.holons.find(state.holon);
    if (it != m.holons.end() && it->second.kind != state.kind)
      report.add(Rule::kind_mismatch, id.value,
                 "state kind does not match its holon's kind");
  }

  for (const auto& [id, pi] : m.process_instances) {
    std::set<HolonKind> kinds;
    for (const StateId& sid : pi.input_states) {
      auto it = m.states.find(sid);
      if (it != m.states.end()) kinds.insert(it->second.kind);
    }
    if (kinds.size() > 1)
      report.add(Rule::mixed_input_kinds, id.value,
                 "instance inputs mix elementary and composite states");
    if (pi.input_states.empty())
      report.add(Rule::mixed_input_kinds, id.value, "instance has no input states");
    if (pi.output_holons.empty())
      report.add(Rule::kind_mismatch, id.value, "instance has no output holons");
    if (pi.end < pi.start)
      report.add(Rule::state_order, id.value, "instance ends before it starts");
  }

  detail::check_genealogy_cycles(m, report);
  return report;
}

}  // namespace hpm
