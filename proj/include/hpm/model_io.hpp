#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hpm/model.hpp"
#include "hpm/schema.hpp"
#include "hpm/validate.hpp"
#include "hpm/xml.hpp"

// Canonical on-disk format for a Model (HPM-XML, extension .hpm.xml).
// Namespace urn:hpm:model:1. Emission is deterministic: entities sorted by
// id, attributes alphabetical, list-valued children in semantic order.
namespace hpm {

inline constexpr std::string_view hpm_ns = "urn:hpm:model:1";

inline const schema::Grammar& hpm_grammar() {
  static const schema::Grammar g = [] {
    using schema::ElementSpec;
    using schema::Occurs;
    schema::Grammar g;
    g.ns = hpm_ns;
    g.root = "model";
    g.elements["model"] = {{{"holons", {1, 1}},
                            {"states", {1, 1}},
                            {"processes", {1, 1}},
                            {"processInstances", {1, 1}},
                            {"resources", {1, 1}},
                            {"flows", {1, 1}},
                            {"observations", {0, 1}},
                            {"assemblyEdges", {0, 1}}},
                           {},
                           {},
                           {},
                           false};
    g.elements["holons"] = {{{"holon", {}}}, {}, {}, {}, false};
    g.elements["holon"] = {{{"informationalPart", {1, 1}},
                            {"physicalPart", {0, 1}},
                            {"property", {}},
                            {"stateHistory", {1, 1}}},
                           {"id", "kind"},
                           {},
                           {{"kind", {"elementary", "composite"}}},
                           false};
    g.elements["informationalPart"] = {
        {{"attribute", {}}}, {"id"}, {"description"}, {}, false};
    g.elements["physicalPart"] = {{}, {"tag"}, {"id"}, {}, false};
    g.elements["property"] = {{},
                              {"name", "type", "value"},
                              {"unit"},
                              {{"type", {"number", "text", "boolean"}}},
                              false};
    g.elements["attribute"] = {{},
                               {"name", "type", "value"},
                               {"unit"},
                               {{"type", {"number", "text", "boolean"}}},
                               false};
    g.elements["stateHistory"] = {{{"stateRef", {}}}, {}, {}, {}, false};
    g.elements["stateRef"] = {{}, {"ref"}, {}, {}, false};
    g.elements["states"] = {{{"state", {}}}, {}, {}, {}, false};
    g.elements["state"] = {{{"space", {1, 1}}, {"shape", {1, 1}}, {"time", {1, 1}}},
                           {"id", "holon", "kind", "timestamp"},
                           {},
                           {{"kind", {"elementary", "composite"}}},
                           false};
    g.elements["space"] = {{{"attribute", {}}}, {}, {}, {}, false};
    g.elements["shape"] = {{{"attribute", {}}}, {}, {}, {}, false};
    g.elements["time"] = {{{"attribute", {}}}, {}, {}, {}, false};
    g.elements["processes"] = {{{"process", {}}}, {}, {}, {}, false};
    g.elements["process"] = {{}, {"id", "name"}, {"description"}, {}, false};
    g.elements["processInstances"] = {{{"processInstance", {}}}, {}, {}, {}, false};
    g.elements["processInstance"] = {{{"inputState", {1, schema::many}},
                                      {"outputHolon", {1, schema::many}},
                                      {"resourceRef", {}},
                                      {"equipment", {}},
                                      {"personnel", {}}},
                                     {"id", "process", "start", "end"},
                                     {},
                                     {},
                                     false};
    g.elements["inputState"] = {{}, {"ref"}, {}, {}, false};
    g.elements["outputHolon"] = {{}, {"ref"}, {}, {}, false};
    g.elements["resourceRef"] = {{}, {"ref"}, {}, {}, false};
    g.elements["resource"] = {{},
                              {"id", "kind", "name"},
                              {},
                              {{"kind", {"material", "human"}}},
                              false};
    g.elements["equipment"] = {{}, {"name"}, {}, {}, false};
    g.elements["personnel"] = {{}, {"ref"}, {}, {}, false};
    g.elements["resources"] = {{{"resource", {}}}, {}, {}, {}, false};
    g.elements["flows"] = {{{"flow", {}}}, {}, {}, {}, false};
    g.elements["flow"] = {{{"member", {}}},
                          {"id", "kind"},
                          {},
                          {{"kind", {"holon", "informational", "physical"}}},
                          false};
    g.elements["member"] = {{}, {"ref"}, {}, {}, false};
    g.elements["observations"] = {{{"observation", {}}}, {}, {}, {}, false};
    g.elements["observation"] = {{{"space", {1, 1}}, {"shape", {1, 1}}, {"time", {1, 1}}},
                                 {"id", "holon", "timestamp"},
                                 {"overridden"},
                                 {{"overridden", {"true", "false"}}},
                                 false};
    g.elements["assemblyEdges"] = {{{"assemblyEdge", {}}}, {}, {}, {}, false};
    g.elements["assemblyEdge"] = {{}, {"parent", "child"}, {}, {}, false};
    return g;
  }();
  return g;
}

namespace io_detail {

inline std::optional<TypedValue> read_typed_value(const xml::Element& e, const std::string& where,
                                                  ValidationReport& report) {
  std::string type(e.attr("type").value_or("text"));
  std::string value(e.attr("value").value_or(""));
  std::string unit(e.attr("unit").value_or(""));
  if (type == "number") {
    auto num = parse_number(value);
    if (!num) {
      report.add(Rule::schema_violation, where, "'" + value + "' is not a finite number");
      return std::nullopt;
    }
    return TypedValue(Quantity{*num, unit});
  }
  if (!unit.empty()) {
    report.add(Rule::schema_violation, where, "unit given for non-numeric value");
    return std::nullopt;
  }
  if (type == "boolean") {
    if (value == "true") return TypedValue(true);
    if (value == "false") return TypedValue(false);
    report.add(Rule::schema_violation, where, "'" + value + "' is not a boolean");
    return std::nullopt;
  }
  return TypedValue(value);
}

inline void read_group(const xml::Element& parent, AttributeGroup& group,
                       const std::string& where, ValidationReport& report) {
  for (const xml::Element* a : parent.children_named("attribute")) {
    std::string name(a->attr("name").value_or(""));
    if (name.empty()) {
      report.add(Rule::schema_violation, where, "attribute with empty name");
      continue;
    }
    if (group.count(name)) {
      report.add(Rule::duplicate_id, where, "duplicate attribute '" + name + "'");
      continue;
    }
    if (auto v = read_typed_value(*a, where + "/" + name, report)) group.emplace(name, *v);
  }
}

inline StateAttributes read_state_attrs(const xml::Element& e, const std::string& where,
                                        ValidationReport& report) {
  StateAttributes attrs;
  if (const xml::Element* c = e.child("space")) read_group(*c, attrs.space, where, report);
  if (const xml::Element* c = e.child("shape")) read_group(*c, attrs.shape, where, report);
  if (const xml::Element* c = e.child("time")) read_group(*c, attrs.time, where, report);
  return attrs;
}

inline std::optional<Instant> read_instant(const xml::Element& e, std::string_view key,
                                           const std::string& where, ValidationReport& report) {
  std::string raw(e.attr(key).value_or(""));
  auto t = parse_instant(raw);
  if (!t)
    report.add(Rule::schema_violation, where,
               "'" + raw + "' is not an ISO-8601 UTC timestamp");
  return t;
}

inline std::string read_id(const xml::Element& e, std::string_view key, const std::string& where,
                           ValidationReport& report) {
  std::string raw(e.attr(key).value_or(""));
  if (!is_id_token(raw)) {
    report.add(Rule::schema_violation, where,
               "'" + raw + "' is not a valid id token (" + std::string(key) + ")");
    return "";
  }
  return raw;
}

inline void build_model(const xml::Element& root, Model& m, ValidationReport& report) {
  auto section = [&](std::string_view name) -> const xml::Element* {
    return root.child(name);
  };

  if (const xml::Element* holons = section("holons")) {
    for (const xml::Element* h : holons->children_named("holon")) {
      std::string id = read_id(*h, "id", "holon", report);
      if (id.empty()) continue;
      Holon holon;
      holon.id = HolonId(id);
      holon.kind = h->attr("kind") == "composite" ? HolonKind::composite : HolonKind::elementary;
      if (const xml::Element* info = h->child("informationalPart")) {
        holon.informational.id = std::string(info->attr("id").value_or(""));
        holon.informational.description = std::string(info->attr("description").value_or(""));
        read_group(*info, holon.informational.attributes, id, report);
        if (holon.informational.id.empty())
          report.add(Rule::schema_violation, id, "informational part id must be non-empty");
      }
      if (const xml::Element* phys = h->child("physicalPart")) {
        PhysicalPartRef ref;
        ref.id = std::string(phys->attr("id").value_or(""));
        ref.tag = std::string(phys->attr("tag").value_or(""));
        holon.physical = std::move(ref);
      }
      for (const xml::Element* p : h->children_named("property")) {
        std::string name(p->attr("name").value_or(""));
        if (name.empty()) {
          report.add(Rule::schema_violation, id, "property with empty name");
          continue;
        }
        if (holon.properties.count(name)) {
          report.add(Rule::duplicate_id, id, "duplicate property '" + name + "'");
          continue;
        }
        if (auto v = read_typed_value(*p, id + "/" + name, report))
          holon.properties.emplace(name, *v);
      }
      if (const xml::Element* hist = h->child("stateHistory"))
        for (const xml::Element* r : hist->children_named("stateRef"))
          holon.state_history.push_back(StateId(std::string(r->attr("ref").value_or(""))));
      if (m.holons.count(holon.id)) {
        report.add(Rule::duplicate_id, id, "holon id declared twice");
        continue;
      }
      for (const auto& [other_id, other] : m.holons) {
        if (other.informational.id == holon.informational.id)
          report.add(Rule::duplicate_id, holon.informational.id,
                     "informational part id shared by '" + other_id.value + "' and '" + id + "'");
        if (other.physical && holon.physical && !holon.physical->id.empty() &&
            other.physical->id == holon.physical->id)
          report.add(Rule::duplicate_id, holon.physical->id,
                     "physical part id shared by '" + other_id.value + "' and '" + id + "'");
      }
      m.holons.emplace(holon.id, std::move(holon));
    }
  }

  if (const xml::Element* states = section("states")) {
    for (const xml::Element* s : states->children_named("state")) {
      std::string id = read_id(*s, "id", "state", report);
      if (id.empty()) continue;
      State state;
      state.id = StateId(id);
      state.holon = HolonId(std::string(s->attr("holon").value_or("")));
      state.kind = s->attr("kind") == "composite" ? HolonKind::composite : HolonKind::elementary;
      if (auto t = read_instant(*s, "timestamp", id, report)) state.timestamp = *t;
      state.attrs = read_state_attrs(*s, id, report);
      if (m.states.count(state.id)) {
        report.add(Rule::duplicate_id, id, "state id declared twice");
        continue;
      }
      m.states.emplace(state.id, std::move(state));
    }
  }

  if (const xml::Element* obs_section = section("observations")) {
    for (const xml::Element* o : obs_section->children_named("observation")) {
      std::string id = read_id(*o, "id", "observation", report);
      if (id.empty()) continue;
      Observation obs;
      obs.id = StateId(id);
      obs.holon = HolonId(std::string(o->attr("holon").value_or("")));
      if (auto t = read_instant(*o, "timestamp", id, report)) obs.timestamp = *t;
      obs.attrs = read_state_attrs(*o, id, report);
      obs.overridden = o->attr("overridden") == "true";
      if (m.states.count(obs.id) || m.observations.count(obs.id)) {
        report.add(Rule::duplicate_id, id, "state id declared twice");
        continue;
      }
      m.observations.emplace(obs.id, std::move(obs));
    }
    // Physical tracks are rebuilt per holon in observation timestamp order.
    for (auto& [id, holon] : m.holons) {
      std::vector<const Observation*> track;
      for (const auto& [oid, obs] : m.observations)
        if (obs.holon == id) track.push_back(&obs);
      std::sort(track.begin(), track.end(), [](const Observation* a, const Observation* b) {
        return a->timestamp == b->timestamp ? a->id < b->id : a->timestamp < b->timestamp;
      });
      for (const Observation* obs : track) holon.physical_track.push_back(obs->id);
    }
  }

  if (const xml::Element* procs = section("processes")) {
    for (const xml::Element* p : procs->children_named("process")) {
      std::string id = read_id(*p, "id", "process", report);
      if (id.empty()) continue;
      Process process{ProcessId(id), std::string(p->attr("name").value_or("")),
                      std::string(p->attr("description").value_or(""))};
      if (process.name.empty())
        report.add(Rule::schema_violation, id, "process name must be non-empty");
      if (!m.processes.emplace(process.id, process).second)
        report.add(Rule::duplicate_id, id, "process id declared twice");
    }
  }

  if (const xml::Element* instances = section("processInstances")) {
    for (const xml::Element* pi : instances->children_named("processInstance")) {
      std::string id = read_id(*pi, "id", "processInstance", report);
      if (id.empty()) continue;
      ProcessInstance instance;
      instance.id = ProcessInstanceId(id);
      instance.process = ProcessId(std::string(pi->attr("process").value_or("")));
      if (auto t = read_instant(*pi, "start", id, report)) instance.start = *t;
      if (auto t = read_instant(*pi, "end", id, report)) instance.end = *t;
      for (const xml::Element* r : pi->children_named("inputState"))
        instance.input_states.push_back(StateId(std::string(r->attr("ref").value_or(""))));
      for (const xml::Element* r : pi->children_named("outputHolon"))
        instance.output_holons.push_back(HolonId(std::string(r->attr("ref").value_or(""))));
      for (const xml::Element* r : pi->children_named("resourceRef"))
        instance.resources.push_back(ResourceId(std::string(r->attr("ref").value_or(""))));
      for (const xml::Element* r : pi->children_named("equipment"))
        instance.equipment.push_back(std::string(r->attr("name").value_or("")));
      for (const xml::Element* r : pi->children_named("personnel"))
        instance.personnel.push_back(ResourceId(std::string(r->attr("ref").value_or(""))));
      if (!m.process_instances.emplace(instance.id, std::move(instance)).second)
        report.add(Rule::duplicate_id, id, "process instance id declared twice");
    }
  }

  if (const xml::Element* resources = section("resources")) {
    for (const xml::Element* r : resources->children_named("resource")) {
      std::string id = read_id(*r, "id", "resource", report);
      if (id.empty()) continue;
      Resource resource{ResourceId(id),
                        r->attr("kind") == "human" ? ResourceKind::human : ResourceKind::material,
                        std::string(r->attr("name").value_or(""))};
      if (!m.resources.emplace(resource.id, resource).second)
        report.add(Rule::duplicate_id, id, "resource id declared twice");
    }
  }

  if (const xml::Element* flows = section("flows")) {
    for (const xml::Element* f : flows->children_named("flow")) {
      std::string id = read_id(*f, "id", "flow", report);
      if (id.empty()) continue;
      Flow flow;
      flow.id = FlowId(id);
      auto kind = f->attr("kind");
      flow.kind = kind == "informational" ? FlowKind::informational
                  : kind == "physical"    ? FlowKind::physical
                                          : FlowKind::holon;
      for (const xml::Element* mref : f->children_named("member"))
        flow.members.push_back(std::string(mref->attr("ref").value_or("")));
      if (!m.flows.emplace(flow.id, std::move(flow)).second)
        report.add(Rule::duplicate_id, id, "flow id declared twice");
    }
  }

  if (const xml::Element* edges = section("assemblyEdges")) {
    for (const xml::Element* e : edges->children_named("assemblyEdge")) {
      AssemblyEdge edge{HolonId(std::string(e->attr("parent").value_or(""))),
                        HolonId(std::string(e->attr("child").value_or("")))};
      m.assembly_edges.insert(edge);
    }
  }
}

struct ParseOutcome {
  std::optional<Model> model;
  ValidationReport report;  // syntax, grammar, and structural build issues only
};

// Syntax -> grammar -> build -> referential integrity. Semantic meta-model
// rules (cycles, kind constraints) are validate_model's job, so documents
// describing semantically broken models still parse.
inline ParseOutcome parse_structural(std::string_view bytes) {
  ParseOutcome out;
  xml::Element root;
  try {
    root = xml::parse(bytes);
  } catch (const Error& e) {
    Rule rule = e.code() == Errc::unknown_namespace  ? Rule::unknown_namespace
                : e.code() == Errc::schema_violation ? Rule::schema_violation
                                                     : Rule::xml_syntax;
    out.report.add(rule, e.entity(), e.what());
    return out;
  }
  if (root.ns != hpm_ns) {
    out.report.add(Rule::unknown_namespace, root.name,
                   "root element namespace is '" + root.ns + "', expected '" +
                       std::string(hpm_ns) + "'");
    return out;
  }
  ValidationReport grammar_report = schema::check(hpm_grammar(), root);
  out.report.entries.insert(out.report.entries.end(), grammar_report.entries.begin(),
                            grammar_report.entries.end());
  if (!out.report.ok()) return out;

  Model m;
  build_model(root, m, out.report);
  detail::check_references(m, out.report);
  if (out.report.ok()) out.model = std::move(m);
  return out;
}

inline Errc errc_for(Rule rule) {
  switch (rule) {
    case Rule::xml_syntax: return Errc::xml_syntax;
    case Rule::unknown_namespace: return Errc::unknown_namespace;
    case Rule::dangling_ref: return Errc::dangling_ref;
    case Rule::duplicate_id: return Errc::duplicate_id;
    default: return Errc::schema_violation;
  }
}

inline xml::Element typed_value_element(std::string_view element_name, const std::string& name_key,
                                        const std::string& name, const TypedValue& value) {
  xml::Element e{std::string(hpm_ns), "hpm:" + std::string(element_name)};
  e.set(name_key, name);
  e.set("type", std::string(typed_value_kind(value)));
  if (const auto* q = std::get_if<Quantity>(&value)) {
    e.set("value", format_number(q->value));
    if (!q->unit.empty()) e.set("unit", q->unit);
  } else {
    e.set("value", typed_value_text(value));
  }
  return e;
}

inline void append_group(xml::Element& parent, std::string_view group_name,
                         const AttributeGroup& group) {
  xml::Element g{std::string(hpm_ns), "hpm:" + std::string(group_name)};
  for (const auto& [name, value] : group)
    g.children.push_back(typed_value_element("attribute", "name", name, value));
  parent.children.push_back(std::move(g));
}

inline void append_state_attrs(xml::Element& parent, const StateAttributes& attrs) {
  append_group(parent, "space", attrs.space);
  append_group(parent, "shape", attrs.shape);
  append_group(parent, "time", attrs.time);
}

inline xml::Element ref_element(std::string_view name, std::string_view key,
                                const std::string& value) {
  xml::Element e{std::string(hpm_ns), "hpm:" + std::string(name)};
  e.set(std::string(key), value);
  return e;
}

}  // namespace io_detail

// Serializes a model to canonical HPM-XML. Requires a model with no
// error-severity validation entries.
inline std::string emit_hpm(const Model& m) {
  ValidationReport report = validate_model(m);
  if (!report.ok())
    fail(Errc::invalid_model, report.entries.front().entity,
         "model has " + std::to_string(report.error_count()) +
             " validation error(s); first: " + report.entries.front().message);

  using io_detail::ref_element;
  xml::Element root{std::string(hpm_ns), "hpm:model"};
  root.set("xmlns:hpm", std::string(hpm_ns));

  xml::Element holons{std::string(hpm_ns), "hpm:holons"};
  for (const auto& [id, h] : m.holons) {
    xml::Element e{std::string(hpm_ns), "hpm:holon"};
    e.set("id", id.value);
    e.set("kind", std::string(holon_kind_name(h.kind)));
    xml::Element info{std::string(hpm_ns), "hpm:informationalPart"};
    info.set("id", h.informational.id);
    if (!h.informational.description.empty())
      info.set("description", h.informational.description);
    for (const auto& [name, value] : h.informational.attributes)
      info.children.push_back(io_detail::typed_value_element("attribute", "name", name, value));
    e.children.push_back(std::move(info));
    if (h.physical) {
      xml::Element phys{std::string(hpm_ns), "hpm:physicalPart"};
      if (!h.physical->id.empty()) phys.set("id", h.physical->id);
      phys.set("tag", h.physical->tag);
      e.children.push_back(std::move(phys));
    }
    for (const auto& [name, value] : h.properties)
      e.children.push_back(io_detail::typed_value_element("property", "name", name, value));
    xml::Element hist{std::string(hpm_ns), "hpm:stateHistory"};
    for (const StateId& sid : h.state_history)
      hist.children.push_back(ref_element("stateRef", "ref", sid.value));
    e.children.push_back(std::move(hist));
    holons.children.push_back(std::move(e));
  }
  root.children.push_back(std::move(holons));

  xml::Element states{std::string(hpm_ns), "hpm:states"};
  for (const auto& [id, s] : m.states) {
    xml::Element e{std::string(hpm_ns), "hpm:state"};
    e.set("id", id.value);
    e.set("holon", s.holon.value);
    e.set("kind", std::string(holon_kind_name(s.kind)));
    e.set("timestamp", format_instant(s.timestamp));
    io_detail::append_state_attrs(e, s.attrs);
    states.children.push_back(std::move(e));
  }
  root.children.push_back(std::move(states));

  xml::Element processes{std::string(hpm_ns), "hpm:processes"};
  for (const auto& [id, p] : m.processes) {
    xml::Element e{std::string(hpm_ns), "hpm:process"};
    e.set("id", id.value);
    e.set("name", p.name);
    if (!p.description.empty()) e.set("description", p.description);
    processes.children.push_back(std::move(e));
  }
  root.children.push_back(std::move(processes));

  xml::Element instances{std::string(hpm_ns), "hpm:processInstances"};
  for (const auto& [id, pi] : m.process_instances) {
    xml::Element e{std::string(hpm_ns), "hpm:processInstance"};
    e.set("id", id.value);
    e.set("process", pi.process.value);
    e.set("start", format_instant(pi.start));
    e.set("end", format_instant(pi.end));
    for (const StateId& sid : pi.input_states)
      e.children.push_back(ref_element("inputState", "ref", sid.value));
    for (const HolonId& hid : pi.output_holons)
      e.children.push_back(ref_element("outputHolon", "ref", hid.value));
    for (const ResourceId& rid : pi.resources)
      e.children.push_back(ref_element("resourceRef", "ref", rid.value));
    for (const std::string& name : pi.equipment)
      e.children.push_back(ref_element("equipment", "name", name));
    for (const ResourceId& rid : pi.personnel)
      e.children.push_back(ref_element("personnel", "ref", rid.value));
    instances.children.push_back(std::move(e));
  }
  root.children.push_back(std::move(instances));

  xml::Element resources{std::string(hpm_ns), "hpm:resources"};
  for (const auto& [id, r] : m.resources) {
    xml::Element e{std::string(hpm_ns), "hpm:resource"};
    e.set("id", id.value);
    e.set("kind", std::string(resource_kind_name(r.kind)));
    e.set("name", r.name);
    resources.children.push_back(std::move(e));
  }
  root.children.push_back(std::move(resources));

  xml::Element flows{std::string(hpm_ns), "hpm:flows"};
  for (const auto& [id, f] : m.flows) {
    xml::Element e{std::string(hpm_ns), "hpm:flow"};
    e.set("id", id.value);
    e.set("kind", std::string(flow_kind_name(f.kind)));
    for (const std::string& member : f.members)
      e.children.push_back(ref_element("member", "ref", member));
    flows.children.push_back(std::move(e));
  }
  root.children.push_back(std::move(flows));

  if (!m.observations.empty()) {
    xml::Element obs_section{std::string(hpm_ns), "hpm:observations"};
    for (const auto& [id, o] : m.observations) {
      xml::Element e{std::string(hpm_ns), "hpm:observation"};
      e.set("id", id.value);
      e.set("holon", o.holon.value);
      e.set("timestamp", format_instant(o.timestamp));
      if (o.overridden) e.set("overridden", "true");
      io_detail::append_state_attrs(e, o.attrs);
      obs_section.children.push_back(std::move(e));
    }
    root.children.push_back(std::move(obs_section));
  }

  if (!m.assembly_edges.empty()) {
    xml::Element edges{std::string(hpm_ns), "hpm:assemblyEdges"};
    for (const AssemblyEdge& edge : m.assembly_edges) {
      xml::Element e{std::string(hpm_ns), "hpm:assemblyEdge"};
      e.set("parent", edge.parent.value);
      e.set("child", edge.child.value);
      edges.children.push_back(std::move(e));
    }
    root.children.push_back(std::move(edges));
  }

  return xml::write(root);
}

// Parses HPM-XML into a model with referential integrity, or throws.
inline Model parse_hpm(std::string_view bytes) {
  io_detail::ParseOutcome outcome = io_detail::parse_structural(bytes);
  if (!outcome.model) {
    const Violation& first = outcome.report.entries.front();
    fail(io_detail::errc_for(first.rule), first.entity, first.message);
  }
  return std::move(*outcome.model);
}

// Total document check: any byte string yields a report, never a crash.
// Empty report iff the document parses to a model passing validate_model.
inline ValidationReport check_document(std::string_view bytes) {
  io_detail::ParseOutcome outcome = io_detail::parse_structural(bytes);
  if (!outcome.model) return std::move(outcome.report);
  ValidationReport semantic = validate_model(*outcome.model);
  outcome.report.entries.insert(outcome.report.entries.end(), semantic.entries.begin(),
                                semantic.entries.end());
  return std::move(outcome.report);
}

}  // namespace hpm
