#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hpm/model.hpp"

// Physical/informational synchronization: observations land on a holon's
// physical track, updates on its informational state history, and the two
// are compared attribute by attribute under per-attribute tolerances.
namespace hpm::sync {

struct PhysicalEvent {
  Instant timestamp;
  std::string physical_tag;  // resolved to exactly one elementary holon
  StateAttributes observed;
};

struct InformationalUpdate {
  Instant timestamp;
  HolonId holon;
  StateAttributes attrs;
};

// Absolute tolerances keyed by qualified attribute name ("space.x").
// Missing keys default to exact (0.0).
using ToleranceMap = std::map<std::string, double>;

enum class Verdict { coherent, divergent };

struct DivergenceEntry {
  std::string attribute;  // qualified "group.name"
  std::optional<TypedValue> physical;
  std::optional<TypedValue> informational;
  std::optional<double> delta;  // |physical - informational| when both numeric
  double tolerance = 0.0;
  bool divergent = false;
};

struct DivergenceReport {
  HolonId holon;
  std::vector<DivergenceEntry> entries;
  Verdict verdict = Verdict::coherent;
};

enum class ReconciliationPolicy { physical_wins, informational_wins, manual };

inline std::string_view policy_name(ReconciliationPolicy p) {
  switch (p) {
    case ReconciliationPolicy::physical_wins: return "physical-wins";
    case ReconciliationPolicy::informational_wins: return "informational-wins";
    case ReconciliationPolicy::manual: return "manual";
  }
  return "?";
}

inline std::optional<ReconciliationPolicy> parse_policy(std::string_view name) {
  if (name == "physical-wins") return ReconciliationPolicy::physical_wins;
  if (name == "informational-wins") return ReconciliationPolicy::informational_wins;
  if (name == "manual") return ReconciliationPolicy::manual;
  return std::nullopt;
}

enum class ResolutionAction { updated_informational, overrode_physical, pending };

struct Resolution {
  ResolutionAction action;
  std::optional<StateId> new_state;  // set for updated_informational
};

namespace detail {

inline const Holon& resolve_tag(const Model& m, const std::string& tag) {
  const Holon* found = nullptr;
  for (const auto& [id, h] : m.holons) {
    if (!h.physical || h.physical->tag != tag) continue;
    if (found)
      fail(Errc::ambiguous_tag, tag,
           "tag '" + tag + "' matches holons '" + found->id.value + "' and '" + id.value + "'");
    found = &h;
  }
  if (!found) fail(Errc::unknown_tag, tag, "no holon carries physical tag '" + tag + "'");
  return *found;
}

inline const Observation* latest_live_observation(const Model& m, const Holon& h) {
  for (auto it = h.physical_track.rbegin(); it != h.physical_track.rend(); ++it) {
    const Observation& obs = m.observations.at(*it);
    if (!obs.overridden) return &obs;
  }
  return nullptr;
}

inline void collect_qualified(const StateAttributes& attrs,
                              std::map<std::string, const TypedValue*>& out) {
  for (const auto& [name, value] : attrs.space) out.emplace("space." + name, &value);
  for (const auto& [name, value] : attrs.shape) out.emplace("shape." + name, &value);
  for (const auto& [name, value] : attrs.time) out.emplace("time." + name, &value);
}

}  // namespace detail

// Appends an observation to the physical track of the holon carrying the
// event's tag. Timestamps are strictly monotonic per track.
inline StateId ingest_physical_event(Model& m, const PhysicalEvent& event,
                                     const AttributePolicy& policy = {}) {
  const Holon& h = detail::resolve_tag(m, event.physical_tag);
  if (h.kind != HolonKind::elementary)
    fail(Errc::not_elementary, h.id.value, "physical events apply to elementary holons only");
  hpm::detail::check_attrs(event.observed, policy, h.id.value);
  if (!h.physical_track.empty()) {
    const Observation& last = m.observations.at(h.physical_track.back());
    if (event.timestamp <= last.timestamp)
      fail(Errc::non_monotonic_timestamp, h.id.value,
           "observation timestamp " + format_instant(event.timestamp) + " not after " +
               format_instant(last.timestamp));
  }
  StateId oid = hpm::detail::fresh_state_id(m, h.id, 'p');
  m.observations.emplace(oid,
                         Observation{oid, h.id, event.timestamp, event.observed, false});
  m.holons.at(h.id).physical_track.push_back(oid);
  return oid;
}

// Appends an informational state carrying the update's attributes.
inline StateId ingest_informational_update(Model& m, const InformationalUpdate& update,
                                           const AttributePolicy& policy = {}) {
  return record_state(m, update.holon, update.attrs, update.timestamp, policy);
}

// Compares the latest live observation against the latest informational
// state. Numeric pairs diverge when units differ or |delta| exceeds the
// tolerance; non-numeric pairs diverge on inequality; one-sided or
// type-mismatched attributes always diverge.
inline DivergenceReport detect_divergence(const Model& m, const HolonId& holon_id,
                                          const ToleranceMap& tolerances = {}) {
  const Holon& h = require_holon(m, holon_id);
  if (h.kind != HolonKind::elementary)
    fail(Errc::not_elementary, holon_id.value, "divergence applies to elementary holons only");
  const Observation* obs = detail::latest_live_observation(m, h);
  if (!obs)
    fail(Errc::no_observations, holon_id.value,
         "holon '" + holon_id.value + "' has no live observations");

  StateAttributes informational;
  if (!h.state_history.empty()) informational = m.states.at(h.state_history.back()).attrs;

  std::map<std::string, const TypedValue*> physical_attrs, informational_attrs;
  detail::collect_qualified(obs->attrs, physical_attrs);
  detail::collect_qualified(informational, informational_attrs);

  std::map<std::string, std::pair<const TypedValue*, const TypedValue*>> merged;
  for (const auto& [name, value] : physical_attrs) merged[name].first = value;
  for (const auto& [name, value] : informational_attrs) merged[name].second = value;

  DivergenceReport report;
  report.holon = holon_id;
  for (const auto& [name, pair] : merged) {
    DivergenceEntry entry;
    entry.attribute = name;
    if (auto it = tolerances.find(name); it != tolerances.end()) entry.tolerance = it->second;
    if (pair.first) entry.physical = *pair.first;
    if (pair.second) entry.informational = *pair.second;
    if (!pair.first || !pair.second) {
      entry.divergent = true;
    } else if (const auto* pq = std::get_if<Quantity>(pair.first)) {
      const auto* iq = std::get_if<Quantity>(pair.second);
      if (!iq) {
        entry.divergent = true;
      } else {
        double delta = pq->value - iq->value;
        if (delta < 0) delta = -delta;
        entry.delta = delta;
        entry.divergent = pq->unit != iq->unit || delta > entry.tolerance;
      }
    } else {
      entry.divergent = *pair.first != *pair.second;
    }
    if (entry.divergent) report.verdict = Verdict::divergent;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

// Resolves a detected divergence. physical_wins appends an informational
// state copying the live observation at a logical-now timestamp (replay
// stays deterministic); informational_wins marks that observation
// overridden; manual records nothing and reports pending.
inline Resolution reconcile(Model& m, const HolonId& holon_id, const DivergenceReport& report,
                            ReconciliationPolicy policy) {
  if (report.verdict == Verdict::coherent)
    fail(Errc::not_divergent, holon_id.value,
         "holon '" + holon_id.value + "' is coherent; nothing to reconcile");

  const Holon& h = require_holon(m, holon_id);
  const Observation* obs = detail::latest_live_observation(m, h);
  if (!obs)
    fail(Errc::no_observations, holon_id.value,
         "holon '" + holon_id.value + "' has no live observations");

  switch (policy) {
    case ReconciliationPolicy::physical_wins: {
      Instant now = obs->timestamp;
      if (!h.state_history.empty()) {
        Instant floor = m.states.at(h.state_history.back()).timestamp + 1;
        if (floor > now) now = floor;
      }
      StateId sid = record_state(m, holon_id, obs->attrs, now);
      return Resolution{ResolutionAction::updated_informational, sid};
    }
    case ReconciliationPolicy::informational_wins:
      m.observations.at(obs->id).overridden = true;
      return Resolution{ResolutionAction::overrode_physical, std::nullopt};
    case ReconciliationPolicy::manual: break;
  }
  return Resolution{ResolutionAction::pending, std::nullopt};
}

// Detect-then-reconcile convenience used by log replay.
inline Resolution reconcile(Model& m, const HolonId& holon_id, ReconciliationPolicy policy,
                            const ToleranceMap& tolerances = {}) {
  return reconcile(m, holon_id, detect_divergence(m, holon_id, tolerances), policy);
}

struct ReplaySummary {
  std::size_t applied = 0;
  std::size_t rejected = 0;
  std::size_t divergences = 0;
  std::size_t reconciled = 0;
  std::vector<std::string> rejected_messages;
};

namespace detail {

inline TypedValue value_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_object()) {
    if (!j.contains("value") || !j.at("value").is_number())
      fail(Errc::malformed_attribute, where, "expected {\"value\": <number>, \"unit\"?}");
    std::string unit = j.value("unit", std::string{});
    return TypedValue(Quantity{j.at("value").get<double>(), unit});
  }
  if (j.is_number()) return TypedValue(Quantity{j.get<double>(), ""});
  if (j.is_string()) return TypedValue(j.get<std::string>());
  if (j.is_boolean()) return TypedValue(j.get<bool>());
  fail(Errc::malformed_attribute, where, "attribute value must be number, object, string, or bool");
}

inline StateAttributes attrs_from_json(const nlohmann::json& j, const std::string& where) {
  StateAttributes attrs;
  auto read = [&](const char* key, AttributeGroup& group) {
    if (!j.contains(key)) return;
    const nlohmann::json& g = j.at(key);
    if (!g.is_object()) fail(Errc::malformed_attribute, where, "attribute group must be an object");
    for (auto it = g.begin(); it != g.end(); ++it)
      group.emplace(it.key(), value_from_json(it.value(), where + "/" + it.key()));
  };
  read("space", attrs.space);
  read("shape", attrs.shape);
  read("time", attrs.time);
  return attrs;
}

inline Instant instant_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) fail(Errc::malformed_attribute, where, "timestamp must be a string");
  auto t = parse_instant(j.get<std::string>());
  if (!t)
    fail(Errc::malformed_attribute, where,
         "'" + j.get<std::string>() + "' is not an ISO-8601 UTC timestamp");
  return *t;
}

}  // namespace detail

// Replays a JSONL event log. Rejected lines are skipped, not fatal. After
// each applied event the affected holon is checked for divergence and, under
// a non-manual policy, reconciled immediately.
inline ReplaySummary replay_log(Model& m, std::string_view log, ReconciliationPolicy policy,
                                const ToleranceMap& tolerances = {}) {
  ReplaySummary summary;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= log.size()) {
    std::size_t eol = log.find('\n', pos);
    std::string_view line = log.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? log.size() + 1 : eol + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;

    HolonId affected;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      std::string where = "line " + std::to_string(line_no);
      if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        fail(Errc::malformed_attribute, where, "event must be an object with a \"kind\"");
      std::string kind = j.at("kind").get<std::string>();
      if (kind == "physical") {
        PhysicalEvent event;
        event.timestamp = detail::instant_from_json(j.at("timestamp"), where);
        if (!j.contains("tag") || !j.at("tag").is_string())
          fail(Errc::malformed_attribute, where, "physical event needs a \"tag\"");
        event.physical_tag = j.at("tag").get<std::string>();
        if (j.contains("attrs")) event.observed = detail::attrs_from_json(j.at("attrs"), where);
        ingest_physical_event(m, event);
        affected = detail::resolve_tag(m, event.physical_tag).id;
      } else if (kind == "informational") {
        InformationalUpdate update;
        update.timestamp = detail::instant_from_json(j.at("timestamp"), where);
        if (!j.contains("holon") || !j.at("holon").is_string())
          fail(Errc::malformed_attribute, where, "informational event needs a \"holon\"");
        update.holon = HolonId(j.at("holon").get<std::string>());
        if (j.contains("attrs")) update.attrs = detail::attrs_from_json(j.at("attrs"), where);
        ingest_informational_update(m, update);
        affected = update.holon;
      } else {
        fail(Errc::malformed_attribute, where, "unknown event kind '" + kind + "'");
      }
    } catch (const Error& e) {
      ++summary.rejected;
      summary.rejected_messages.push_back("line " + std::to_string(line_no) + ": " + e.what());
      continue;
    } catch (const nlohmann::json::exception& e) {
      ++summary.rejected;
      summary.rejected_messages.push_back("line " + std::to_string(line_no) + ": " + e.what());
      continue;
    }

    ++summary.applied;
    try {
      DivergenceReport report = detect_divergence(m, affected, tolerances);
      if (report.verdict == Verdict::divergent) {
        ++summary.divergences;
        if (policy != ReconciliationPolicy::manual) {
          reconcile(m, affected, policy, tolerances);
          ++summary.reconciled;
        }
      }
    } catch (const Error& e) {
      if (e.code() != Errc::no_observations && e.code() != Errc::not_elementary) throw;
    }
  }
  return summary;
}

}  // namespace hpm::sync
