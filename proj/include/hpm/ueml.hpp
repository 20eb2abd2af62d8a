#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "hpm/model.hpp"
#include "hpm/model_io.hpp"
#include "hpm/schema.hpp"
#include "hpm/validate.hpp"
#include "hpm/xml.hpp"

// UEML subset export. Concept correspondence: Holon -> Object,
// InformationalPart -> InformationObject, PhysicalPart -> MaterialResource,
// Process -> Activity. One-way: there is no UEML import.
namespace hpm::ueml {

inline constexpr std::string_view ueml_ns = "urn:ueml:subset:1";

inline const schema::Grammar& ueml_grammar() {
  static const schema::Grammar g = [] {
    schema::Grammar g;
    g.ns = ueml_ns;
    g.root = "Model";
    g.elements["Model"] = {{{"InformationObject", {}},
                            {"MaterialResource", {}},
                            {"Object", {}},
                            {"Activity", {}}},
                           {},
                           {},
                           {},
                           false};
    g.elements["InformationObject"] = {
        {{"Attribute", {}}}, {"id"}, {"description"}, {}, false};
    g.elements["Attribute"] = {{},
                               {"name", "type", "value"},
                               {"unit"},
                               {{"type", {"number", "text", "boolean"}}},
                               false};
    g.elements["MaterialResource"] = {{}, {"id", "tag"}, {}, {}, false};
    g.elements["Object"] = {{{"informationObject", {1, 1}}, {"materialResource", {0, 1}}},
                            {"id", "classification"},
                            {},
                            {{"classification", {"holon"}}},
                            false};
    g.elements["informationObject"] = {{}, {"ref"}, {}, {}, false};
    g.elements["materialResource"] = {{}, {"ref"}, {}, {}, false};
    g.elements["Activity"] = {{{"Input", {}}, {"Output", {}}}, {"id", "name"}, {}, {}, false};
    g.elements["Input"] = {{}, {"object"}, {}, {}, false};
    g.elements["Output"] = {{}, {"object"}, {}, {}, false};
    return g;
  }();
  return g;
}

// Serializes the model's holons and processes into the UEML subset.
// Activity inputs and outputs are the holons its instances consumed and
// produced, deduplicated and sorted. Requires a valid model.
inline std::string to_ueml(const Model& m) {
  ValidationReport report = validate_model(m);
  if (!report.ok())
    fail(Errc::invalid_model, report.entries.front().entity,
         "model has " + std::to_string(report.error_count()) +
             " validation error(s); first: " + report.entries.front().message);

  xml::Element root{std::string(ueml_ns), "ueml:Model"};
  root.set("xmlns:ueml", std::string(ueml_ns));

  for (const auto& [id, h] : m.holons) {
    xml::Element info{std::string(ueml_ns), "ueml:InformationObject"};
    info.set("id", h.informational.id);
    if (!h.informational.description.empty())
      info.set("description", h.informational.description);
    for (const auto& [name, value] : h.informational.attributes) {
      xml::Element a{std::string(ueml_ns), "ueml:Attribute"};
      a.set("name", name);
      a.set("type", std::string(typed_value_kind(value)));
      if (const auto* q = std::get_if<Quantity>(&value)) {
        a.set("value", format_number(q->value));
        if (!q->unit.empty()) a.set("unit", q->unit);
      } else {
        a.set("value", typed_value_text(value));
      }
      info.children.push_back(std::move(a));
    }
    root.children.push_back(std::move(info));
  }

  for (const auto& [id, h] : m.holons) {
    if (!h.physical) continue;
    xml::Element mat{std::string(ueml_ns), "ueml:MaterialResource"};
    mat.set("id", h.physical->id.empty() ? id.value + "-material" : h.physical->id);
    mat.set("tag", h.physical->tag);
    root.children.push_back(std::move(mat));
  }

  for (const auto& [id, h] : m.holons) {
    xml::Element obj{std::string(ueml_ns), "ueml:Object"};
    obj.set("id", id.value);
    obj.set("classification", "holon");
    xml::Element info_ref{std::string(ueml_ns), "ueml:informationObject"};
    info_ref.set("ref", h.informational.id);
    obj.children.push_back(std::move(info_ref));
    if (h.physical) {
      xml::Element mat_ref{std::string(ueml_ns), "ueml:materialResource"};
      mat_ref.set("ref", h.physical->id.empty() ? id.value + "-material" : h.physical->id);
      obj.children.push_back(std::move(mat_ref));
    }
    root.children.push_back(std::move(obj));
  }

  std::map<ProcessId, std::pair<std::set<HolonId>, std::set<HolonId>>> activity_io;
  for (const auto& [id, p] : m.processes) activity_io[id];
  for (const auto& [id, pi] : m.process_instances) {
    auto& [inputs, outputs] = activity_io[pi.process];
    for (const StateId& sid : pi.input_states) {
      auto it = m.states.find(sid);
      if (it != m.states.end()) inputs.insert(it->second.holon);
    }
    for (const HolonId& hid : pi.output_holons) outputs.insert(hid);
  }
  for (const auto& [id, p] : m.processes) {
    xml::Element act{std::string(ueml_ns), "ueml:Activity"};
    act.set("id", id.value);
    act.set("name", p.name);
    const auto& [inputs, outputs] = activity_io[id];
    for (const HolonId& hid : inputs) {
      xml::Element in{std::string(ueml_ns), "ueml:Input"};
      in.set("object", hid.value);
      act.children.push_back(std::move(in));
    }
    for (const HolonId& hid : outputs) {
      xml::Element outp{std::string(ueml_ns), "ueml:Output"};
      outp.set("object", hid.value);
      act.children.push_back(std::move(outp));
    }
    root.children.push_back(std::move(act));
  }

  return xml::write(root);
}

}  // namespace hpm::ueml
