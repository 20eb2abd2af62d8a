#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hpm/errors.hpp"
#include "hpm/ids.hpp"

// Meta-model mapping tables and the interoperability check. Two meta-models
// interoperate on a concept universe iff a forward and a backward mapping
// both exist and each covers its side's universe.
namespace hpm::mapping {

enum class MetaModel { holonic, ueml, iec62264 };

inline std::string_view meta_model_name(MetaModel m) {
  switch (m) {
    case MetaModel::holonic: return "HOLONIC";
    case MetaModel::ueml: return "UEML";
    case MetaModel::iec62264: return "IEC62264";
  }
  return "?";
}

inline std::optional<MetaModel> parse_meta_model(std::string_view name) {
  if (name == "HOLONIC") return MetaModel::holonic;
  if (name == "UEML") return MetaModel::ueml;
  if (name == "IEC62264") return MetaModel::iec62264;
  return std::nullopt;
}

// OMG model-driven architecture layers. Meta-models sit at M2, model
// instances at M1, the running facility at M0.
enum class MdaLevel { m0, m1, m2, m3 };

inline std::string_view mda_level_name(MdaLevel level) {
  switch (level) {
    case MdaLevel::m0: return "M0";
    case MdaLevel::m1: return "M1";
    case MdaLevel::m2: return "M2";
    case MdaLevel::m3: return "M3";
  }
  return "?";
}

struct MetaModelId {
  MetaModel model;
  MdaLevel level = MdaLevel::m2;
};

enum class MappingView { none, material_model, product_definition_model };

inline std::string_view view_name(MappingView v) {
  switch (v) {
    case MappingView::none: return "";
    case MappingView::material_model: return "MaterialModel";
    case MappingView::product_definition_model: return "ProductDefinitionModel";
  }
  return "";
}

struct MappingRule {
  std::string source;
  std::string target;
  MappingView view = MappingView::none;

  auto operator<=>(const MappingRule&) const = default;
};

struct MappingRuleSet {
  MetaModel source;
  MetaModel target;
  std::vector<MappingRule> rules;
};

inline std::set<std::string> sources(const MappingRuleSet& rs) {
  std::set<std::string> out;
  for (const MappingRule& r : rs.rules) out.insert(r.source);
  return out;
}

inline std::set<std::string> targets(const MappingRuleSet& rs) {
  std::set<std::string> out;
  for (const MappingRule& r : rs.rules) out.insert(r.target);
  return out;
}

// Bundled rule tables. HOLONIC<->IEC62264 inverts cleanly on the material
// view; HOLONIC->UEML has no bundled inverse.
inline const MappingRuleSet& builtin_ruleset(MetaModel source, MetaModel target) {
  static const MappingRuleSet holonic_to_ueml{
      MetaModel::holonic,
      MetaModel::ueml,
      {{"Holon", "Object", MappingView::none},
       {"InformationalPart", "InformationObject", MappingView::none},
       {"PhysicalPart", "MaterialResource", MappingView::none},
       {"Process", "Activity", MappingView::none}}};
  static const MappingRuleSet holonic_to_iec{
      MetaModel::holonic,
      MetaModel::iec62264,
      {{"Holon", "MaterialSublot", MappingView::material_model},
       {"HolonFlow", "MaterialLot", MappingView::material_model},
       {"InformationalPart", "MaterialDefinition", MappingView::material_model},
       {"PropertiesAndAttributes", "MaterialLotPropertyDefinition",
        MappingView::material_model},
       {"ProcessInstance", "ProductSegment", MappingView::product_definition_model},
       {"Equipment", "EquipmentSpecification", MappingView::product_definition_model}}};
  static const MappingRuleSet iec_to_holonic{
      MetaModel::iec62264,
      MetaModel::holonic,
      {{"MaterialSublot", "Holon", MappingView::material_model},
       {"MaterialLot", "HolonFlow", MappingView::material_model},
       {"MaterialDefinition", "InformationalPart", MappingView::material_model},
       {"MaterialLotPropertyDefinition", "PropertiesAndAttributes",
        MappingView::material_model}}};

  if (source == MetaModel::holonic && target == MetaModel::ueml) return holonic_to_ueml;
  if (source == MetaModel::holonic && target == MetaModel::iec62264) return holonic_to_iec;
  if (source == MetaModel::iec62264 && target == MetaModel::holonic) return iec_to_holonic;
  fail(Errc::unsupported_pair,
       std::string(meta_model_name(source)) + "->" + std::string(meta_model_name(target)),
       "no bundled mapping from " + std::string(meta_model_name(source)) + " to " +
           std::string(meta_model_name(target)));
}

namespace detail {

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t next_diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = next_diag;
    }
  }
  return row[b.size()];
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace detail

// Exact-match lookup; failures name the closest known source concepts.
inline const MappingRule& map_concept(const MappingRuleSet& rs, std::string_view concept_name) {
  for (const MappingRule& r : rs.rules)
    if (r.source == concept_name) return r;

  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const MappingRule& r : rs.rules)
    ranked.emplace_back(detail::levenshtein(concept_name, r.source), r.source);
  std::sort(ranked.begin(), ranked.end());
  std::string hint;
  for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
    hint += (i ? ", " : "") + ranked[i].second;
  fail(Errc::unmapped_concept, std::string(concept_name),
       "concept '" + std::string(concept_name) + "' has no " +
           std::string(meta_model_name(rs.source)) + "->" +
           std::string(meta_model_name(rs.target)) +
           " rule" + (hint.empty() ? "" : "; nearest: " + hint));
}

// Rules file: one `Source -> Target [View]` per line, `#` starts a comment.
inline MappingRuleSet load_rules(std::string_view text, MetaModel source, MetaModel target) {
  MappingRuleSet rs{source, target, {}};
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    auto bad = [&](const std::string& why) {
      fail(Errc::rules_syntax, "line " + std::to_string(line_no),
           "line " + std::to_string(line_no) + ": " + why);
    };

    std::size_t arrow = line.find("->");
    if (arrow == std::string_view::npos) bad("expected 'Source -> Target [View]'");
    std::string_view lhs = detail::trim(line.substr(0, arrow));
    std::string_view rhs = detail::trim(line.substr(arrow + 2));

    MappingRule rule;
    if (!rhs.empty() && rhs.back() == ']') {
      std::size_t open = rhs.rfind('[');
      if (open == std::string_view::npos) bad("unmatched ']'");
      std::string_view view = detail::trim(rhs.substr(open + 1, rhs.size() - open - 2));
      rhs = detail::trim(rhs.substr(0, open));
      if (view == "MaterialModel")
        rule.view = MappingView::material_model;
      else if (view == "ProductDefinitionModel")
        rule.view = MappingView::product_definition_model;
      else
        bad("unknown view '" + std::string(view) + "'");
    }
    if (!is_id_token(lhs)) bad("'" + std::string(lhs) + "' is not a concept name");
    if (!is_id_token(rhs)) bad("'" + std::string(rhs) + "' is not a concept name");
    rule.source = std::string(lhs);
    rule.target = std::string(rhs);
    if (!seen.insert(rule.source).second)
      bad("duplicate rule for source concept '" + rule.source + "'");
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

struct InteropReport {
  bool interoperable = false;
  std::vector<std::string> uncovered_a;  // concepts of A the forward mapping misses
  std::vector<std::string> uncovered_b;  // concepts of B the backward mapping misses
};

// A and B interoperate iff the forward mapping covers every concept of A and
// the backward mapping covers every concept of B. The verdict is symmetric:
// swapping (forward, backward, A, B) for (backward, forward, B, A) cannot
// change it.
inline InteropReport check_interoperability(const MappingRuleSet& forward,
                                            const MappingRuleSet& backward,
                                            const std::set<std::string>& concepts_a,
                                            const std::set<std::string>& concepts_b) {
  if (forward.source != backward.target || forward.target != backward.source)
    fail(Errc::mismatched_pair,
         std::string(meta_model_name(forward.source)) + "->" +
             std::string(meta_model_name(forward.target)),
         "rule sets do not form a pair: " + std::string(meta_model_name(forward.source)) +
             "->" + std::string(meta_model_name(forward.target)) + " vs " +
             std::string(meta_model_name(backward.source)) + "->" +
             std::string(meta_model_name(backward.target)));

  InteropReport report;
  std::set<std::string> fwd_sources = sources(forward);
  std::set<std::string> bwd_sources = sources(backward);
  for (const std::string& c : concepts_a)
    if (!fwd_sources.count(c)) report.uncovered_a.push_back(c);
  for (const std::string& c : concepts_b)
    if (!bwd_sources.count(c)) report.uncovered_b.push_back(c);
  report.interoperable = report.uncovered_a.empty() && report.uncovered_b.empty();
  return report;
}

}  // namespace hpm::mapping
