#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hpm/genealogy.hpp"
#include "hpm/model.hpp"
#include "hpm/schema.hpp"
#include "hpm/validate.hpp"
#include "hpm/xml.hpp"

// IEC 62264 exchange via a B2MML-style subset. Material view:
// Holon -> MaterialSublot, HolonFlow -> MaterialLot, InformationalPart ->
// MaterialDefinition, properties and attributes -> MaterialLotProperty.
// Product definition view: ProcessInstance -> ProductSegment, Equipment ->
// EquipmentSpecification. The material view round-trips; the product
// definition view is export-only.
namespace hpm::b2mml {

inline constexpr std::string_view b2mml_ns = "urn:b2mml:subset:1";

// Holons belonging to no holon flow are grouped under this synthetic lot,
// which the importer does not materialize as a flow.
inline constexpr std::string_view unassigned_lot = "__unassigned__";

// Latest-state attributes export under "state.<group>.<name>"; the importer
// skips that prefix so holon property sets survive a round trip.
inline constexpr std::string_view state_property_prefix = "state.";

inline const schema::Grammar& material_grammar() {
  static const schema::Grammar g = [] {
    schema::Grammar g;
    g.ns = b2mml_ns;
    g.root = "MaterialInformation";
    g.elements["MaterialInformation"] = {
        {{"MaterialDefinition", {}}, {"MaterialLot", {}}}, {}, {}, {}, false};
    g.elements["MaterialDefinition"] = {{{"ID", {1, 1}},
                                         {"Description", {0, 1}},
                                         {"MaterialDefinitionProperty", {}}},
                                        {},
                                        {},
                                        {},
                                        false};
    g.elements["MaterialDefinitionProperty"] = {
        {{"ID", {1, 1}}, {"Value", {1, 1}}}, {}, {}, {}, false};
    g.elements["MaterialLot"] = {
        {{"ID", {1, 1}}, {"MaterialSublot", {}}}, {}, {}, {}, false};
    g.elements["MaterialSublot"] = {{{"ID", {1, 1}},
                                     {"MaterialDefinitionID", {1, 1}},
                                     {"PhysicalPartID", {0, 1}},
                                     {"PhysicalPartTag", {0, 1}},
                                     {"MaterialLotProperty", {}},
                                     {"AssemblySublotID", {}}},
                                    {},
                                    {},
                                    {},
                                    false};
    g.elements["MaterialLotProperty"] = {
        {{"ID", {1, 1}}, {"Value", {1, 1}}}, {}, {}, {}, false};
    g.elements["Value"] = {{{"ValueString", {1, 1}},
                            {"DataType", {0, 1}},
                            {"UnitOfMeasure", {0, 1}}},
                           {},
                           {},
                           {},
                           false};
    g.elements["ID"] = {{}, {}, {}, {}, true};
    g.elements["Description"] = {{}, {}, {}, {}, true};
    g.elements["MaterialDefinitionID"] = {{}, {}, {}, {}, true};
    g.elements["PhysicalPartID"] = {{}, {}, {}, {}, true};
    g.elements["PhysicalPartTag"] = {{}, {}, {}, {}, true};
    g.elements["AssemblySublotID"] = {{}, {}, {}, {}, true};
    g.elements["ValueString"] = {{}, {}, {}, {}, true};
    g.elements["DataType"] = {{}, {}, {}, {}, true};
    g.elements["UnitOfMeasure"] = {{}, {}, {}, {}, true};
    return g;
  }();
  return g;
}

inline const schema::Grammar& product_definition_grammar() {
  static const schema::Grammar g = [] {
    schema::Grammar g;
    g.ns = b2mml_ns;
    g.root = "ProductDefinitionInformation";
    g.elements["ProductDefinitionInformation"] = {
        {{"ProductSegment", {}}}, {}, {}, {}, false};
    g.elements["ProductSegment"] = {{{"ID", {1, 1}},
                                     {"Description", {0, 1}},
                                     {"Duration", {0, 1}},
                                     {"EquipmentSpecification", {}},
                                     {"PersonnelSpecification", {}},
                                     {"MaterialSpecification", {}}},
                                    {},
                                    {},
                                    {},
                                    false};
    g.elements["EquipmentSpecification"] = {{{"EquipmentID", {1, 1}}}, {}, {}, {}, false};
    g.elements["PersonnelSpecification"] = {{{"PersonnelID", {1, 1}}}, {}, {}, {}, false};
    g.elements["MaterialSpecification"] = {{{"MaterialID", {1, 1}}}, {}, {}, {}, false};
    g.elements["ID"] = {{}, {}, {}, {}, true};
    g.elements["Description"] = {{}, {}, {}, {}, true};
    g.elements["Duration"] = {{}, {}, {}, {}, true};
    g.elements["EquipmentID"] = {{}, {}, {}, {}, true};
    g.elements["PersonnelID"] = {{}, {}, {}, {}, true};
    g.elements["MaterialID"] = {{}, {}, {}, {}, true};
    return g;
  }();
  return g;
}

namespace detail {

inline xml::Element leaf(std::string_view local, std::string text) {
  xml::Element e{std::string(b2mml_ns), "b2mml:" + std::string(local)};
  e.text = std::move(text);
  return e;
}

inline xml::Element value_element(const TypedValue& value) {
  xml::Element e{std::string(b2mml_ns), "b2mml:Value"};
  if (const auto* q = std::get_if<Quantity>(&value)) {
    e.children.push_back(leaf("ValueString", format_number(q->value)));
    e.children.push_back(leaf("DataType", "number"));
    if (!q->unit.empty()) e.children.push_back(leaf("UnitOfMeasure", q->unit));
  } else {
    e.children.push_back(leaf("ValueString", typed_value_text(value)));
    e.children.push_back(leaf("DataType", std::string(typed_value_kind(value))));
  }
  return e;
}

inline xml::Element property_element(std::string_view element_name, const std::string& name,
                                     const TypedValue& value) {
  xml::Element e{std::string(b2mml_ns), "b2mml:" + std::string(element_name)};
  e.children.push_back(leaf("ID", name));
  e.children.push_back(value_element(value));
  return e;
}

inline TypedValue parse_value(const xml::Element& value_e, const std::string& where) {
  std::string text(value_e.child_text("ValueString"));
  std::string type(value_e.child_text("DataType"));
  std::string unit(value_e.child_text("UnitOfMeasure"));
  if (type.empty()) type = "text";
  if (type == "number") {
    auto num = parse_number(text);
    if (!num)
      fail(Errc::schema_violation, where, "'" + text + "' is not a finite number");
    return TypedValue(Quantity{*num, unit});
  }
  if (!unit.empty())
    fail(Errc::schema_violation, where, "UnitOfMeasure given for non-numeric value");
  if (type == "boolean") {
    if (text == "true") return TypedValue(true);
    if (text == "false") return TypedValue(false);
    fail(Errc::schema_violation, where, "'" + text + "' is not a boolean");
  }
  if (type != "text")
    fail(Errc::schema_violation, where, "unknown DataType '" + type + "'");
  return TypedValue(text);
}

inline xml::Element checked_root(std::string_view bytes, const schema::Grammar& grammar) {
  xml::Element root = xml::parse(bytes);
  if (root.ns != grammar.ns)
    fail(Errc::unknown_namespace, root.name,
         "root element namespace is '" + root.ns + "', expected '" + grammar.ns + "'");
  ValidationReport report = schema::check(grammar, root);
  if (!report.ok())
    fail(Errc::schema_violation, report.entries.front().entity,
         report.entries.front().message);
  return root;
}

}  // namespace detail

// Serializes the material view. With properties_only, per-state attribute
// snapshots are left out and only holon properties are exported.
inline std::string to_b2mml_material(const Model& m, bool properties_only = false) {
  ValidationReport report = validate_model(m);
  if (!report.ok())
    fail(Errc::invalid_model, report.entries.front().entity,
         "model has " + std::to_string(report.error_count()) +
             " validation error(s); first: " + report.entries.front().message);

  using detail::leaf;
  xml::Element root{std::string(b2mml_ns), "b2mml:MaterialInformation"};
  root.set("xmlns:b2mml", std::string(b2mml_ns));

  for (const auto& [id, h] : m.holons) {
    xml::Element def{std::string(b2mml_ns), "b2mml:MaterialDefinition"};
    def.children.push_back(leaf("ID", h.informational.id));
    if (!h.informational.description.empty())
      def.children.push_back(leaf("Description", h.informational.description));
    for (const auto& [name, value] : h.informational.attributes)
      def.children.push_back(detail::property_element("MaterialDefinitionProperty", name, value));
    root.children.push_back(std::move(def));
  }

  std::map<std::string, std::vector<HolonId>> lots;
  std::set<HolonId> assigned;
  for (const auto& [fid, flow] : m.flows) {
    if (flow.kind != FlowKind::holon) continue;
    auto& members = lots[fid.value];
    for (const std::string& member : flow.members) {
      members.push_back(HolonId(member));
      assigned.insert(HolonId(member));
    }
  }
  for (const auto& [id, h] : m.holons)
    if (!assigned.count(id)) lots[std::string(unassigned_lot)].push_back(id);

  GenealogyGraph genealogy_edges;
  for (const GenealogyEdge& e : all_genealogy_edges(m)) genealogy_edges.edges.insert(e);
  std::map<HolonId, std::set<HolonId>> parents;
  for (const GenealogyEdge& e : genealogy_edges.edges) parents[e.child].insert(e.parent);

  for (auto& [lot_id, members] : lots) {
    std::sort(members.begin(), members.end());
    xml::Element lot{std::string(b2mml_ns), "b2mml:MaterialLot"};
    lot.children.push_back(leaf("ID", lot_id));
    for (const HolonId& hid : members) {
      const Holon& h = m.holons.at(hid);
      xml::Element sublot{std::string(b2mml_ns), "b2mml:MaterialSublot"};
      sublot.children.push_back(leaf("ID", hid.value));
      sublot.children.push_back(leaf("MaterialDefinitionID", h.informational.id));
      if (h.kind == HolonKind::elementary && h.physical) {
        if (!h.physical->id.empty())
          sublot.children.push_back(leaf("PhysicalPartID", h.physical->id));
        sublot.children.push_back(leaf("PhysicalPartTag", h.physical->tag));
      }
      for (const auto& [name, value] : h.properties)
        sublot.children.push_back(detail::property_element("MaterialLotProperty", name, value));
      if (!properties_only && !h.state_history.empty()) {
        const State& latest = m.states.at(h.state_history.back());
        auto emit_group = [&](std::string_view group, const AttributeGroup& attrs) {
          for (const auto& [name, value] : attrs)
            sublot.children.push_back(detail::property_element(
                "MaterialLotProperty",
                std::string(state_property_prefix) + std::string(group) + "." + name, value));
        };
        emit_group("space", latest.attrs.space);
        emit_group("shape", latest.attrs.shape);
        emit_group("time", latest.attrs.time);
      }
      if (auto it = parents.find(hid); it != parents.end())
        for (const HolonId& parent : it->second)
          sublot.children.push_back(leaf("AssemblySublotID", parent.value));
      lot.children.push_back(std::move(sublot));
    }
    root.children.push_back(std::move(lot));
  }

  return xml::write(root);
}

// Rebuilds a partial model from the material view: holons with parts and
// properties, holon flows, and assembly edges standing in for the original
// process genealogy. States and processes are not recoverable.
inline Model from_b2mml_material(std::string_view bytes) {
  xml::Element root = detail::checked_root(bytes, material_grammar());

  struct Definition {
    std::string description;
    AttributeGroup attributes;
  };
  std::map<std::string, Definition> definitions;
  for (const xml::Element* def : root.children_named("MaterialDefinition")) {
    std::string id(def->child_text("ID"));
    if (!is_id_token(id))
      fail(Errc::schema_violation, id, "'" + id + "' is not a valid id token");
    Definition d;
    d.description = std::string(def->child_text("Description"));
    for (const xml::Element* p : def->children_named("MaterialDefinitionProperty")) {
      std::string name(p->child_text("ID"));
      if (name.empty()) fail(Errc::schema_violation, id, "property with empty ID");
      if (d.attributes.count(name))
        fail(Errc::duplicate_id, id, "duplicate definition property '" + name + "'");
      d.attributes.emplace(name, detail::parse_value(*p->child("Value"), id + "/" + name));
    }
    if (!definitions.emplace(id, std::move(d)).second)
      fail(Errc::duplicate_id, id, "material definition declared twice");
  }

  Model m;
  std::set<std::string> used_definitions;
  std::vector<std::pair<HolonId, std::string>> pending_parents;
  for (const xml::Element* lot : root.children_named("MaterialLot")) {
    std::string lot_id(lot->child_text("ID"));
    if (!is_id_token(lot_id))
      fail(Errc::schema_violation, lot_id, "'" + lot_id + "' is not a valid id token");
    bool synthetic = lot_id == unassigned_lot;
    if (!synthetic && m.flows.count(FlowId(lot_id)))
      fail(Errc::duplicate_id, lot_id, "material lot declared twice");
    Flow flow;
    flow.id = FlowId(lot_id);
    flow.kind = FlowKind::holon;

    for (const xml::Element* sublot : lot->children_named("MaterialSublot")) {
      std::string id(sublot->child_text("ID"));
      if (!is_id_token(id))
        fail(Errc::schema_violation, id, "'" + id + "' is not a valid id token");
      HolonId hid{id};
      if (m.holons.count(hid))
        fail(Errc::ambiguous_sublot, id,
             "sublot '" + id + "' appears in more than one lot or twice in one");

      Holon h;
      h.id = hid;
      std::string def_id(sublot->child_text("MaterialDefinitionID"));
      auto def = definitions.find(def_id);
      if (def == definitions.end())
        fail(Errc::dangling_ref, id,
             "sublot '" + id + "' references unknown material definition '" + def_id + "'");
      if (!used_definitions.insert(def_id).second)
        fail(Errc::duplicate_id, def_id,
             "material definition '" + def_id + "' is used by more than one sublot");
      h.informational.id = def_id;
      h.informational.description = def->second.description;
      h.informational.attributes = def->second.attributes;

      std::string tag(sublot->child_text("PhysicalPartTag"));
      if (!tag.empty()) {
        h.kind = HolonKind::elementary;
        h.physical = PhysicalPartRef{std::string(sublot->child_text("PhysicalPartID")), tag};
      } else {
        h.kind = HolonKind::composite;
      }

      for (const xml::Element* p : sublot->children_named("MaterialLotProperty")) {
        std::string name(p->child_text("ID"));
        if (name.empty()) fail(Errc::schema_violation, id, "property with empty ID");
        if (name.rfind(state_property_prefix, 0) == 0) continue;
        if (h.properties.count(name))
          fail(Errc::duplicate_id, id, "duplicate lot property '" + name + "'");
        h.properties.emplace(name, detail::parse_value(*p->child("Value"), id + "/" + name));
      }

      for (const xml::Element* parent : sublot->children_named("AssemblySublotID"))
        pending_parents.emplace_back(hid, std::string(parent->text));

      if (!synthetic) flow.members.push_back(id);
      m.holons.emplace(hid, std::move(h));
    }
    if (!synthetic) m.flows.emplace(flow.id, std::move(flow));
  }

  for (const auto& [child, parent] : pending_parents) {
    HolonId pid{parent};
    if (!m.holons.count(pid))
      fail(Errc::dangling_ref, child.value,
           "sublot '" + child.value + "' references unknown assembly parent '" + parent + "'");
    m.assembly_edges.insert(AssemblyEdge{pid, child});
  }
  return m;
}

// Serializes the product definition view: one ProductSegment per process
// instance.
inline std::string to_b2mml_product_definition(const Model& m) {
  ValidationReport report = validate_model(m);
  if (!report.ok())
    fail(Errc::invalid_model, report.entries.front().entity,
         "model has " + std::to_string(report.error_count()) +
             " validation error(s); first: " + report.entries.front().message);

  using detail::leaf;
  xml::Element root{std::string(b2mml_ns), "b2mml:ProductDefinitionInformation"};
  root.set("xmlns:b2mml", std::string(b2mml_ns));

  for (const auto& [id, pi] : m.process_instances) {
    xml::Element seg{std::string(b2mml_ns), "b2mml:ProductSegment"};
    seg.children.push_back(leaf("ID", id.value));
    if (auto it = m.processes.find(pi.process); it != m.processes.end())
      seg.children.push_back(leaf("Description", it->second.name));
    seg.children.push_back(leaf("Duration", format_duration(pi.end - pi.start)));
    for (const std::string& name : pi.equipment) {
      xml::Element spec{std::string(b2mml_ns), "b2mml:EquipmentSpecification"};
      spec.children.push_back(leaf("EquipmentID", name));
      seg.children.push_back(std::move(spec));
    }
    std::set<ResourceId> personnel_seen;
    auto add_person = [&](const ResourceId& rid) {
      if (!personnel_seen.insert(rid).second) return;
      xml::Element spec{std::string(b2mml_ns), "b2mml:PersonnelSpecification"};
      spec.children.push_back(leaf("PersonnelID", rid.value));
      seg.children.push_back(std::move(spec));
    };
    for (const ResourceId& rid : pi.personnel) add_person(rid);
    for (const ResourceId& rid : pi.resources) {
      auto it = m.resources.find(rid);
      if (it != m.resources.end() && it->second.kind == ResourceKind::human) add_person(rid);
    }
    for (const ResourceId& rid : pi.resources) {
      auto it = m.resources.find(rid);
      if (it == m.resources.end() || it->second.kind != ResourceKind::material) continue;
      xml::Element spec{std::string(b2mml_ns), "b2mml:MaterialSpecification"};
      spec.children.push_back(leaf("MaterialID", rid.value));
      seg.children.push_back(std::move(spec));
    }
    root.children.push_back(std::move(seg));
  }

  return xml::write(root);
}

}  // namespace hpm::b2mml
