#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hpm/errors.hpp"
#include "hpm/ids.hpp"
#include "hpm/time.hpp"
#include "hpm/value.hpp"

namespace hpm {

enum class HolonKind { elementary, composite };
enum class ResourceKind { material, human };
enum class FlowKind { holon, informational, physical };

inline std::string_view holon_kind_name(HolonKind k) {
  return k == HolonKind::elementary ? "elementary" : "composite";
}
inline std::string_view resource_kind_name(ResourceKind k) {
  return k == ResourceKind::material ? "material" : "human";
}
inline std::string_view flow_kind_name(FlowKind k) {
  switch (k) {
    case FlowKind::holon: return "holon";
    case FlowKind::informational: return "informational";
    default: return "physical";
  }
}

// The virtual image of a product: identity, description, free-form attributes.
struct InformationalPart {
  std::string id;
  std::string description;
  AttributeGroup attributes;

  friend bool operator==(const InformationalPart&, const InformationalPart&) = default;
};

// Reference to the material object an elementary holon encapsulates. The tag
// is the shop-floor identifier (serial number, RFID payload).
struct PhysicalPartRef {
  std::string id;
  std::string tag;

  friend bool operator==(const PhysicalPartRef&, const PhysicalPartRef&) = default;
};

// Timestamped snapshot of a holon. The three attribute groups always exist;
// any of them may be empty.
struct State {
  StateId id;
  HolonId holon;
  HolonKind kind = HolonKind::elementary;  // must equal the owning holon's kind
  Instant timestamp;
  StateAttributes attrs;

  friend bool operator==(const State&, const State&) = default;
};

// A shop-floor observation on the physical track of an elementary holon.
// Shadow history: parallel to, and never mixed with, the informational
// state history. Shares the state id category.
struct Observation {
  StateId id;
  HolonId holon;
  Instant timestamp;
  StateAttributes attrs;
  bool overridden = false;  // set when an InformationalWins reconciliation discards it

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct Holon {
  HolonId id;
  HolonKind kind = HolonKind::elementary;
  InformationalPart informational;
  std::optional<PhysicalPartRef> physical;  // present iff elementary
  std::map<std::string, TypedValue> properties;
  std::vector<StateId> state_history;   // informational track, append-only
  std::vector<StateId> physical_track;  // observation ids, append-only

  friend bool operator==(const Holon&, const Holon&) = default;
};

struct Process {
  ProcessId id;
  std::string name;
  std::string description;

  friend bool operator==(const Process&, const Process&) = default;
};

// Record of one execution of a process: the genealogy edge. Inputs are holon
// states of a single kind; outputs are the composite holons it produced.
struct ProcessInstance {
  ProcessInstanceId id;
  ProcessId process;
  std::vector<StateId> input_states;
  std::vector<HolonId> output_holons;
  Instant start;
  Instant end;
  std::vector<ResourceId> resources;
  std::vector<std::string> equipment;
  std::vector<ResourceId> personnel;  // human-kind resource references

  friend bool operator==(const ProcessInstance&, const ProcessInstance&) = default;
};

struct Resource {
  ResourceId id;
  ResourceKind kind = ResourceKind::material;
  std::string name;

  friend bool operator==(const Resource&, const Resource&) = default;
};

// Member ids are holon ids, informational part ids, or physical part ids,
// depending on the flow kind.
struct Flow {
  FlowId id;
  FlowKind kind = FlowKind::holon;
  std::vector<std::string> members;

  friend bool operator==(const Flow&, const Flow&) = default;
};

// Genealogy edge imported from an external document (B2MML assembly
// references). Carries no process instance; recorded so that imported
// composite holons keep their ancestry.
struct AssemblyEdge {
  HolonId parent;
  HolonId child;

  friend auto operator<=>(const AssemblyEdge&, const AssemblyEdge&) = default;
};

// One holonic model instance. Collections are public values; the operations
// below maintain the meta-model invariants, and validate_model() checks them
// on models built any other way (e.g. parsed from disk).
struct Model {
  std::map<HolonId, Holon> holons;
  std::map<StateId, State> states;
  std::map<StateId, Observation> observations;
  std::map<ProcessId, Process> processes;
  std::map<ProcessInstanceId, ProcessInstance> process_instances;
  std::map<ResourceId, Resource> resources;
  std::map<FlowId, Flow> flows;
  std::set<AssemblyEdge> assembly_edges;

  friend bool operator==(const Model&, const Model&) = default;
};

// Attribute well-formedness policy. Units on numeric values are optional by
// default; a deployment can require them.
struct AttributePolicy {
  bool require_numeric_units = false;
};

namespace detail {

inline void check_attribute(const std::string& name, const TypedValue& value,
                            const AttributePolicy& policy, const std::string& entity) {
  if (name.empty()) fail(Errc::malformed_attribute, entity, "attribute with empty name");
  if (policy.require_numeric_units) {
    if (const auto* q = std::get_if<Quantity>(&value); q && q->unit.empty())
      fail(Errc::malformed_attribute, entity, "numeric attribute '" + name + "' lacks a unit");
  }
}

inline void check_attrs(const StateAttributes& attrs, const AttributePolicy& policy,
                        const std::string& entity) {
  for (const auto* group : {&attrs.space, &attrs.shape, &attrs.time})
    for (const auto& [name, value] : *group) check_attribute(name, value, policy, entity);
}

inline void check_group(const AttributeGroup& group, const AttributePolicy& policy,
                        const std::string& entity) {
  for (const auto& [name, value] : group) check_attribute(name, value, policy, entity);
}

inline bool state_id_used(const Model& m, const StateId& id) {
  return m.states.count(id) != 0 || m.observations.count(id) != 0;
}

// Deterministic generated id: "<holon>-s<n>" / "<holon>-p<n>", bumped past
// any ids already taken.
inline StateId fresh_state_id(const Model& m, const HolonId& holon, char track) {
  for (std::size_t n = 1;; ++n) {
    StateId candidate(holon.value + "-" + track + std::to_string(n));
    if (!state_id_used(m, candidate)) return candidate;
  }
}

inline ProcessInstanceId fresh_instance_id(const Model& m) {
  for (std::size_t n = m.process_instances.size() + 1;; ++n) {
    ProcessInstanceId candidate("pi" + std::to_string(n));
    if (m.process_instances.count(candidate) == 0) return candidate;
  }
}

}  // namespace detail

inline const Holon& require_holon(const Model& m, const HolonId& id) {
  auto it = m.holons.find(id);
  if (it == m.holons.end()) fail(Errc::unknown_holon, id.value, "no such holon");
  return it->second;
}

inline const State& require_state(const Model& m, const StateId& id) {
  auto it = m.states.find(id);
  if (it == m.states.end()) fail(Errc::unknown_state, id.value, "no such state");
  return it->second;
}

inline std::optional<StateId> latest_state_id(const Model& m, const HolonId& holon) {
  const Holon& h = require_holon(m, holon);
  if (h.state_history.empty()) return std::nullopt;
  return h.state_history.back();
}

inline const Process& add_process(Model& m, ProcessId id, std::string name,
                                  std::string description = {}) {
  if (id.empty() || !is_id_token(id.value))
    fail(Errc::malformed_attribute, id.value, "process id is not a valid id token");
  if (name.empty()) fail(Errc::malformed_attribute, id.value, "process name must be non-empty");
  if (m.processes.count(id)) fail(Errc::duplicate_id, id.value, "process id already in use");
  auto [it, ok] = m.processes.emplace(
      id, Process{id, std::move(name), std::move(description)});
  (void)ok;
  return it->second;
}

inline const Resource& add_resource(Model& m, ResourceId id, ResourceKind kind,
                                    std::string name) {
  if (id.empty() || !is_id_token(id.value))
    fail(Errc::malformed_attribute, id.value, "resource id is not a valid id token");
  if (m.resources.count(id)) fail(Errc::duplicate_id, id.value, "resource id already in use");
  auto [it, ok] = m.resources.emplace(id, Resource{id, kind, std::move(name)});
  (void)ok;
  return it->second;
}

// Informational / physical part ids form their own categories: no two holons
// may share one.
inline const Holon* find_holon_by_informational_id(const Model& m, const std::string& part_id) {
  for (const auto& [id, h] : m.holons)
    if (h.informational.id == part_id) return &h;
  return nullptr;
}

inline const Holon* find_holon_by_physical_id(const Model& m, const std::string& part_id) {
  for (const auto& [id, h] : m.holons)
    if (h.physical && h.physical->id == part_id) return &h;
  return nullptr;
}

// Creates an elementary holon together with its initial elementary state.
inline const Holon& new_elementary_holon(Model& m, HolonId id, InformationalPart informational,
                                         PhysicalPartRef physical, StateAttributes initial_attrs,
                                         Instant t0, const AttributePolicy& policy = {}) {
  if (id.empty() || !is_id_token(id.value))
    fail(Errc::malformed_attribute, id.value, "holon id is not a valid id token");
  if (m.holons.count(id)) fail(Errc::duplicate_id, id.value, "holon id already in use");
  if (informational.id.empty())
    fail(Errc::malformed_attribute, id.value, "informational part id must be non-empty");
  if (physical.tag.empty())
    fail(Errc::malformed_attribute, id.value, "physical part tag must be non-empty");
  if (find_holon_by_informational_id(m, informational.id))
    fail(Errc::duplicate_id, informational.id, "informational part id already in use");
  if (!physical.id.empty() && find_holon_by_physical_id(m, physical.id))
    fail(Errc::duplicate_id, physical.id, "physical part id already in use");
  detail::check_group(informational.attributes, policy, id.value);
  detail::check_attrs(initial_attrs, policy, id.value);

  Holon h;
  h.id = id;
  h.kind = HolonKind::elementary;
  h.informational = std::move(informational);
  h.physical = std::move(physical);

  StateId sid = detail::fresh_state_id(m, id, 's');
  m.states.emplace(sid, State{sid, id, HolonKind::elementary, t0, std::move(initial_attrs)});
  h.state_history.push_back(sid);
  auto [it, ok] = m.holons.emplace(id, std::move(h));
  (void)ok;
  return it->second;
}

// Appends a state to a holon's informational history. Timestamps are strictly
// monotonic per holon; ties are rejected.
inline StateId record_state(Model& m, const HolonId& holon_id, StateAttributes attrs,
                            Instant timestamp, const AttributePolicy& policy = {}) {
  const Holon& h = require_holon(m, holon_id);
  detail::check_attrs(attrs, policy, holon_id.value);
  if (!h.state_history.empty()) {
    const State& last = m.states.at(h.state_history.back());
    if (timestamp <= last.timestamp)
      fail(Errc::non_monotonic_timestamp, holon_id.value,
           "state timestamp " + format_instant(timestamp) + " not after " +
               format_instant(last.timestamp));
  }
  StateId sid = detail::fresh_state_id(m, holon_id, 's');
  m.states.emplace(sid, State{sid, holon_id, h.kind, timestamp, std::move(attrs)});
  m.holons.at(holon_id).state_history.push_back(sid);
  return sid;
}

inline void set_property(Model& m, const HolonId& holon_id, const std::string& name,
                         TypedValue value, const AttributePolicy& policy = {}) {
  require_holon(m, holon_id);
  detail::check_attribute(name, value, policy, holon_id.value);
  m.holons.at(holon_id).properties[name] = std::move(value);
}

// Output of one process execution: a new composite holon plus its initial
// composite state.
struct OutputSpec {
  HolonId id;
  InformationalPart informational;
  StateAttributes initial_attrs;
};

struct ProcessExecution {
  ProcessId process;
  std::vector<StateId> inputs;
  std::vector<OutputSpec> outputs;
  Instant start;
  Instant end;
  std::vector<ResourceId> resources;
  std::vector<std::string> equipment;
  std::vector<ResourceId> personnel;
};

// Executes a process on input states, producing composite holons and the
// ProcessInstance record linking them. Appends one post-processing state to
// each distinct input holon, copying its prior attributes plus a consumption
// marker in the time group.
inline std::vector<HolonId> apply_process_instance(Model& m, const ProcessExecution& exec,
                                                   const AttributePolicy& policy = {}) {
  if (m.processes.count(exec.process) == 0)
    fail(Errc::unknown_process, exec.process.value, "no such process");
  if (exec.inputs.empty())
    fail(Errc::unknown_state, "", "process instance needs at least one input state");
  if (exec.outputs.empty())
    fail(Errc::malformed_attribute, exec.process.value, "process instance needs at least one output spec");
  if (exec.end < exec.start)
    fail(Errc::time_order_violation, exec.process.value,
         "instance ends " + format_instant(exec.end) + " before it starts " +
             format_instant(exec.start));

  std::optional<HolonKind> input_kind;
  std::vector<HolonId> input_holons;  // distinct, in first-seen order
  std::set<StateId> seen_states;
  for (const StateId& sid : exec.inputs) {
    const State& s = require_state(m, sid);
    if (!seen_states.insert(sid).second)
      fail(Errc::duplicate_id, sid.value, "input state listed twice");
    if (input_kind && *input_kind != s.kind)
      fail(Errc::mixed_input_kinds, sid.value,
           "input states mix elementary and composite kinds");
    input_kind = s.kind;
    if (std::find(input_holons.begin(), input_holons.end(), s.holon) == input_holons.end())
      input_holons.push_back(s.holon);
  }
  for (const ResourceId& rid : exec.resources)
    if (m.resources.count(rid) == 0) fail(Errc::unknown_resource, rid.value, "no such resource");
  for (const ResourceId& rid : exec.personnel) {
    auto it = m.resources.find(rid);
    if (it == m.resources.end()) fail(Errc::unknown_resource, rid.value, "no such resource");
    if (it->second.kind != ResourceKind::human)
      fail(Errc::malformed_attribute, rid.value, "personnel must reference human resources");
  }
  // The post-processing append must keep every input history monotonic.
  for (const HolonId& hid : input_holons) {
    const Holon& h = m.holons.at(hid);
    if (!h.state_history.empty()) {
      const State& last = m.states.at(h.state_history.back());
      if (exec.end <= last.timestamp)
        fail(Errc::time_order_violation, hid.value,
             "instance end does not advance the holon's history");
    }
  }
  std::set<HolonId> output_ids;
  std::set<std::string> output_info_ids;
  for (const OutputSpec& spec : exec.outputs) {
    if (spec.id.empty() || !is_id_token(spec.id.value))
      fail(Errc::malformed_attribute, spec.id.value, "output holon id is not a valid id token");
    if (m.holons.count(spec.id) || !output_ids.insert(spec.id).second)
      fail(Errc::duplicate_id, spec.id.value, "output holon id already in use");
    if (spec.informational.id.empty())
      fail(Errc::malformed_attribute, spec.id.value, "informational part id must be non-empty");
    if (find_holon_by_informational_id(m, spec.informational.id) ||
        !output_info_ids.insert(spec.informational.id).second)
      fail(Errc::duplicate_id, spec.informational.id, "informational part id already in use");
    detail::check_group(spec.informational.attributes, policy, spec.id.value);
    detail::check_attrs(spec.initial_attrs, policy, spec.id.value);
  }

  ProcessInstance instance;
  instance.id = detail::fresh_instance_id(m);
  instance.process = exec.process;
  instance.input_states = exec.inputs;
  instance.start = exec.start;
  instance.end = exec.end;
  instance.resources = exec.resources;
  instance.equipment = exec.equipment;
  instance.personnel = exec.personnel;

  std::vector<HolonId> created;
  for (const OutputSpec& spec : exec.outputs) {
    Holon h;
    h.id = spec.id;
    h.kind = HolonKind::composite;
    h.informational = spec.informational;
    StateId sid = detail::fresh_state_id(m, spec.id, 's');
    m.states.emplace(sid, State{sid, spec.id, HolonKind::composite, exec.end, spec.initial_attrs});
    h.state_history.push_back(sid);
    m.holons.emplace(spec.id, std::move(h));
    instance.output_holons.push_back(spec.id);
    created.push_back(spec.id);
  }
  for (const HolonId& hid : input_holons) {
    Holon& h = m.holons.at(hid);
    StateAttributes attrs;
    if (!h.state_history.empty()) attrs = m.states.at(h.state_history.back()).attrs;
    attrs.time["consumedBy"] = instance.id.value;
    StateId sid = detail::fresh_state_id(m, hid, 's');
    m.states.emplace(sid, State{sid, hid, h.kind, exec.end, std::move(attrs)});
    h.state_history.push_back(sid);
  }
  auto [it, ok] = m.process_instances.emplace(instance.id, std::move(instance));
  (void)ok;
  return created;
}

inline const Flow& add_flow(Model& m, FlowId id, FlowKind kind,
                            std::vector<std::string> members) {
  if (id.empty() || !is_id_token(id.value))
    fail(Errc::malformed_attribute, id.value, "flow id is not a valid id token");
  if (m.flows.count(id)) fail(Errc::duplicate_id, id.value, "flow id already in use");
  for (const std::string& member : members) {
    bool known = false;
    switch (kind) {
      case FlowKind::holon: known = m.holons.count(HolonId(member)) != 0; break;
      case FlowKind::informational: known = find_holon_by_informational_id(m, member) != nullptr; break;
      case FlowKind::physical: known = find_holon_by_physical_id(m, member) != nullptr; break;
    }
    if (!known)
      fail(Errc::dangling_ref, id.value,
           "flow member '" + member + "' does not name a " +
               std::string(flow_kind_name(kind)) + " entity");
  }
  auto [it, ok] = m.flows.emplace(id, Flow{id, kind, std::move(members)});
  (void)ok;
  return it->second;
}

// The holon's whole lifecycle: its informational states in history order.
inline std::vector<State> lifecycle(const Model& m, const HolonId& holon_id) {
  const Holon& h = require_holon(m, holon_id);
  std::vector<State> out;
  out.reserve(h.state_history.size());
  for (const StateId& sid : h.state_history) out.push_back(require_state(m, sid));
  return out;
}

}  // namespace hpm
