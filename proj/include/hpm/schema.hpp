#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "hpm/validate.hpp"
#include "hpm/xml.hpp"

// Declarative subset grammars for the emitted dialects. A grammar names the
// namespace, the root element, and for every element its allowed children
// (with multiplicities), attributes, and whether text content is allowed.
namespace hpm::schema {

constexpr std::size_t many = std::numeric_limits<std::size_t>::max();

struct Occurs {
  std::size_t min = 0;
  std::size_t max = many;
};

struct ElementSpec {
  std::map<std::string, Occurs> children;  // by local name
  std::set<std::string> required_attrs;
  std::set<std::string> optional_attrs;
  std::map<std::string, std::set<std::string>> attr_values;  // enumerated attributes
  bool text = false;  // text content allowed
};

struct Grammar {
  std::string ns;
  std::string root;
  std::map<std::string, ElementSpec> elements;  // by local name
};

namespace detail {

inline std::string element_entity(const xml::Element& e) {
  if (auto id = e.attr("id")) return std::string(*id);
  if (const xml::Element* idc = e.child("ID")) return idc->text;
  return "";
}

inline void check_element(const Grammar& g, const xml::Element& e, const std::string& path,
                          ValidationReport& report) {
  if (e.ns != g.ns) {
    report.add(Rule::unknown_namespace, element_entity(e),
               path + ": element '" + e.name + "' is not in namespace " + g.ns);
    return;
  }
  auto spec_it = g.elements.find(e.local);
  if (spec_it == g.elements.end()) {
    report.add(Rule::schema_violation, element_entity(e),
               path + ": unknown element '" + e.local + "'");
    return;
  }
  const ElementSpec& spec = spec_it->second;
  std::string entity = element_entity(e);

  for (const auto& [key, value] : e.attrs) {
    if (key == "xmlns" || key.rfind("xmlns:", 0) == 0) continue;
    if (!spec.required_attrs.count(key) && !spec.optional_attrs.count(key)) {
      report.add(Rule::schema_violation, entity,
                 path + ": attribute '" + key + "' not allowed on '" + e.local + "'");
      continue;
    }
    auto allowed = spec.attr_values.find(key);
    if (allowed != spec.attr_values.end() && !allowed->second.count(value))
      report.add(Rule::schema_violation, entity,
                 path + ": attribute '" + key + "' has unknown value '" + value + "'");
  }
  for (const std::string& key : spec.required_attrs)
    if (!e.attr(key))
      report.add(Rule::schema_violation, entity,
                 path + ": missing required attribute '" + key + "' on '" + e.local + "'");

  if (!spec.text && !e.text.empty())
    report.add(Rule::schema_violation, entity,
               path + ": text content not allowed in '" + e.local + "'");

  std::map<std::string, std::size_t> counts;
  for (const xml::Element& c : e.children) ++counts[c.local];
  for (const xml::Element& c : e.children) {
    if (!spec.children.count(c.local)) {
      report.add(Rule::schema_violation, element_entity(c),
                 path + ": element '" + c.local + "' not allowed inside '" + e.local + "'");
      continue;
    }
    check_element(g, c, path + "/" + c.local, report);
  }
  for (const auto& [child_name, occurs] : spec.children) {
    std::size_t n = counts.count(child_name) ? counts[child_name] : 0;
    if (n < occurs.min)
      report.add(Rule::schema_violation, entity,
                 path + ": expected at least " + std::to_string(occurs.min) + " '" + child_name +
                     "' in '" + e.local + "', found " + std::to_string(n));
    if (n > occurs.max)
      report.add(Rule::schema_violation, entity,
                 path + ": expected at most " + std::to_string(occurs.max) + " '" + child_name +
                     "' in '" + e.local + "', found " + std::to_string(n));
  }
}

}  // namespace detail

inline ValidationReport check(const Grammar& g, const xml::Element& root) {
  ValidationReport report;
  if (root.local != g.root) {
    report.add(Rule::schema_violation, detail::element_entity(root),
               "root element is '" + root.local + "', expected '" + g.root + "'");
    return report;
  }
  detail::check_element(g, root, "/" + root.local, report);
  return report;
}

}  // namespace hpm::schema
