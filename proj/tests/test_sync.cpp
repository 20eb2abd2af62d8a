#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "hpm/hpm.hpp"
#include "support/builders.hpp"
#include "support/catch_helpers.hpp"
#include "support/generators.hpp"

using namespace hpm;
using namespace hpm::sync;
using hpmtest::at_minutes;
using hpmtest::epoch;
using hpmtest::qty;
using hpmtest::thrown_code;

namespace {

// One elementary holon with a width of 2 mm on its informational track.
Model width_model() {
  Model m;
  InformationalPart info;
  info.id = "spec-1";
  StateAttributes attrs;
  attrs.space["width"] = qty(2.0, "mm");
  new_elementary_holon(m, HolonId("H1"), info, PhysicalPartRef{"part-1", "SN-001"}, attrs,
                       epoch());
  return m;
}

PhysicalEvent width_event(Instant t, double width) {
  PhysicalEvent e;
  e.timestamp = t;
  e.physical_tag = "SN-001";
  e.observed.space["width"] = qty(width, "mm");
  return e;
}

}  // namespace

TEST_CASE("observations land on the physical track only") {
  Model m = width_model();
  StateId oid = ingest_physical_event(m, width_event(at_minutes(5), 2.0));
  CHECK(oid == StateId("H1-p1"));

  const Holon& h = m.holons.at(HolonId("H1"));
  CHECK(h.physical_track == std::vector<StateId>{oid});
  CHECK(h.state_history.size() == 1);  // untouched
  const Observation& obs = m.observations.at(oid);
  CHECK(obs.holon == HolonId("H1"));
  CHECK(obs.timestamp == at_minutes(5));
  CHECK_FALSE(obs.overridden);
  CHECK(m.states.count(oid) == 0);
}

TEST_CASE("events resolve holons by physical tag") {
  Model m = width_model();
  CHECK(thrown_code([&] {
          PhysicalEvent e = width_event(at_minutes(1), 2.0);
          e.physical_tag = "no-such-tag";
          ingest_physical_event(m, e);
        }) == Errc::unknown_tag);

  // A second holon carrying the same tag makes resolution ambiguous.
  new_elementary_holon(m, HolonId("H2"), InformationalPart{"spec-2", {}, {}},
                       PhysicalPartRef{"part-2", "SN-001"}, {}, epoch());
  CHECK(thrown_code([&] { ingest_physical_event(m, width_event(at_minutes(1), 2.0)); }) ==
        Errc::ambiguous_tag);
}

TEST_CASE("observation timestamps are strictly monotonic per track") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.0));
  CHECK(thrown_code([&] { ingest_physical_event(m, width_event(at_minutes(5), 2.1)); }) ==
        Errc::non_monotonic_timestamp);
  CHECK(thrown_code([&] { ingest_physical_event(m, width_event(at_minutes(4), 2.1)); }) ==
        Errc::non_monotonic_timestamp);
  ingest_physical_event(m, width_event(at_minutes(6), 2.1));
  CHECK(m.holons.at(HolonId("H1")).physical_track.size() == 2);
}

TEST_CASE("physical events apply to elementary holons only") {
  Model m = width_model();
  Holon c;
  c.id = HolonId("C1");
  c.kind = HolonKind::composite;
  c.informational.id = "spec-c";
  c.physical = PhysicalPartRef{{}, "TAG-C"};  // deliberately malformed record
  m.holons.emplace(c.id, c);

  PhysicalEvent e = width_event(at_minutes(1), 2.0);
  e.physical_tag = "TAG-C";
  CHECK(thrown_code([&] { ingest_physical_event(m, e); }) == Errc::not_elementary);
  CHECK(thrown_code([&] { detect_divergence(m, HolonId("C1")); }) == Errc::not_elementary);
}

TEST_CASE("malformed observation attributes are rejected") {
  Model m = width_model();
  PhysicalEvent e;
  e.timestamp = at_minutes(1);
  e.physical_tag = "SN-001";
  e.observed.space[""] = qty(1.0);
  CHECK(thrown_code([&] { ingest_physical_event(m, e); }) == Errc::malformed_attribute);
}

TEST_CASE("interleaved ingestion keeps both tracks ordered and independent") {
  Model m = width_model();
  for (int i = 1; i <= 25; ++i) {
    ingest_physical_event(m, width_event(at_minutes(2 * i), 2.0 + i * 0.001));
    InformationalUpdate u;
    u.timestamp = at_minutes(2 * i + 1);
    u.holon = HolonId("H1");
    u.attrs.space["width"] = qty(2.0 + i * 0.001, "mm");
    ingest_informational_update(m, u);
  }
  const Holon& h = m.holons.at(HolonId("H1"));
  CHECK(h.physical_track.size() == 25);
  CHECK(h.state_history.size() == 26);
  for (std::size_t i = 1; i < h.physical_track.size(); ++i)
    CHECK(m.observations.at(h.physical_track[i - 1]).timestamp <
          m.observations.at(h.physical_track[i]).timestamp);
  for (std::size_t i = 1; i < h.state_history.size(); ++i)
    CHECK(m.states.at(h.state_history[i - 1]).timestamp <
          m.states.at(h.state_history[i]).timestamp);
}

TEST_CASE("matching values are coherent") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.0));
  DivergenceReport report = detect_divergence(m, HolonId("H1"));
  CHECK(report.verdict == Verdict::coherent);
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].attribute == "space.width");
  CHECK_FALSE(report.entries[0].divergent);
  CHECK(report.entries[0].delta == 0.0);
}

TEST_CASE("a 0.05 discrepancy diverges under a 0.01 tolerance") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.05));
  DivergenceReport report = detect_divergence(m, HolonId("H1"), {{"space.width", 0.01}});
  CHECK(report.verdict == Verdict::divergent);
  REQUIRE(report.entries.size() == 1);
  const DivergenceEntry& entry = report.entries[0];
  CHECK(entry.divergent);
  CHECK(entry.tolerance == 0.01);
  REQUIRE(entry.delta.has_value());
  CHECK(*entry.delta == Catch::Approx(0.05).epsilon(1e-9));
  CHECK(std::get<Quantity>(*entry.physical).value == 2.05);
  CHECK(std::get<Quantity>(*entry.informational).value == 2.0);
}

TEST_CASE("the same discrepancy is coherent under a 0.1 tolerance") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.05));
  DivergenceReport report = detect_divergence(m, HolonId("H1"), {{"space.width", 0.1}});
  CHECK(report.verdict == Verdict::coherent);
}

TEST_CASE("unit mismatches diverge regardless of tolerance") {
  Model m = width_model();
  PhysicalEvent e;
  e.timestamp = at_minutes(5);
  e.physical_tag = "SN-001";
  e.observed.space["width"] = qty(2.0, "cm");
  ingest_physical_event(m, e);
  DivergenceReport report = detect_divergence(m, HolonId("H1"), {{"space.width", 100.0}});
  CHECK(report.verdict == Verdict::divergent);
}

TEST_CASE("one-sided and type-mismatched attributes diverge") {
  Model m = width_model();
  PhysicalEvent e;
  e.timestamp = at_minutes(5);
  e.physical_tag = "SN-001";
  e.observed.space["width"] = TypedValue(std::string("wide"));  // type clash
  e.observed.shape["dent"] = TypedValue(true);                  // physical only
  ingest_physical_event(m, e);

  DivergenceReport report = detect_divergence(m, HolonId("H1"));
  CHECK(report.verdict == Verdict::divergent);
  REQUIRE(report.entries.size() == 2);
  CHECK(report.entries[0].attribute == "shape.dent");
  CHECK(report.entries[0].divergent);
  CHECK_FALSE(report.entries[0].informational.has_value());
  CHECK(report.entries[1].attribute == "space.width");
  CHECK(report.entries[1].divergent);
  CHECK_FALSE(report.entries[1].delta.has_value());
}

TEST_CASE("equal non-numeric values are coherent") {
  Model m;
  InformationalPart info;
  info.id = "spec-1";
  StateAttributes attrs;
  attrs.time["station"] = TypedValue(std::string("press"));
  new_elementary_holon(m, HolonId("H1"), info, PhysicalPartRef{{}, "SN-1"}, attrs, epoch());
  PhysicalEvent e;
  e.timestamp = at_minutes(5);
  e.physical_tag = "SN-1";
  e.observed.time["station"] = TypedValue(std::string("press"));
  ingest_physical_event(m, e);
  CHECK(detect_divergence(m, HolonId("H1")).verdict == Verdict::coherent);
}

TEST_CASE("divergence needs at least one live observation") {
  Model m = width_model();
  CHECK(thrown_code([&] { detect_divergence(m, HolonId("H1")); }) == Errc::no_observations);
  CHECK(thrown_code([&] { detect_divergence(m, HolonId("H9")); }) == Errc::unknown_holon);
}

TEST_CASE("physical-wins reconciliation updates the informational track") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.05));
  DivergenceReport report = detect_divergence(m, HolonId("H1"));
  REQUIRE(report.verdict == Verdict::divergent);

  Resolution res = reconcile(m, HolonId("H1"), report, ReconciliationPolicy::physical_wins);
  CHECK(res.action == ResolutionAction::updated_informational);
  REQUIRE(res.new_state.has_value());

  const State& s = m.states.at(*res.new_state);
  CHECK(std::get<Quantity>(s.attrs.space.at("width")).value == 2.05);
  CHECK(s.timestamp == at_minutes(5));  // observation is newer than the last state
  CHECK(detect_divergence(m, HolonId("H1")).verdict == Verdict::coherent);
}

TEST_CASE("physical-wins lands one tick after a newer informational state") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.05));
  InformationalUpdate u;
  u.timestamp = at_minutes(8);
  u.holon = HolonId("H1");
  u.attrs.space["width"] = qty(2.0, "mm");
  ingest_informational_update(m, u);

  Resolution res = reconcile(m, HolonId("H1"), ReconciliationPolicy::physical_wins);
  REQUIRE(res.new_state.has_value());
  CHECK(m.states.at(*res.new_state).timestamp == at_minutes(8) + 1);
}

TEST_CASE("informational-wins overrides the observation") {
  Model m = width_model();
  StateId oid = ingest_physical_event(m, width_event(at_minutes(5), 2.05));
  Resolution res = reconcile(m, HolonId("H1"), ReconciliationPolicy::informational_wins);
  CHECK(res.action == ResolutionAction::overrode_physical);
  CHECK_FALSE(res.new_state.has_value());
  CHECK(m.observations.at(oid).overridden);
  // The overridden observation no longer feeds detection.
  CHECK(thrown_code([&] { detect_divergence(m, HolonId("H1")); }) == Errc::no_observations);
}

TEST_CASE("manual reconciliation records nothing") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.05));
  Model before = m;
  Resolution res = reconcile(m, HolonId("H1"), ReconciliationPolicy::manual);
  CHECK(res.action == ResolutionAction::pending);
  CHECK(m == before);
}

TEST_CASE("reconciling a coherent holon is an error") {
  Model m = width_model();
  ingest_physical_event(m, width_event(at_minutes(5), 2.0));
  CHECK(thrown_code([&] { reconcile(m, HolonId("H1"), ReconciliationPolicy::physical_wins); }) ==
        Errc::not_divergent);
}

TEST_CASE("policy names round-trip") {
  for (ReconciliationPolicy p :
       {ReconciliationPolicy::physical_wins, ReconciliationPolicy::informational_wins,
        ReconciliationPolicy::manual})
    CHECK(parse_policy(policy_name(p)) == p);
  CHECK_FALSE(parse_policy("coin-flip").has_value());
}

TEST_CASE("replay applies good lines and reports bad ones") {
  Model m = width_model();
  std::string log =
      R"({"kind":"physical","timestamp":"2024-03-01T08:05:00Z","tag":"SN-001","attrs":{"space":{"width":{"value":2.05,"unit":"mm"}}}})"
      "\n"
      R"(not json at all)"
      "\n"
      R"({"kind":"teleport","timestamp":"2024-03-01T08:06:00Z","tag":"SN-001"})"
      "\n"
      R"({"kind":"physical","timestamp":"yesterday","tag":"SN-001"})"
      "\n"
      R"({"kind":"physical","timestamp":"2024-03-01T08:07:00Z","tag":"no-such-tag"})"
      "\n"
      R"({"kind":"informational","timestamp":"2024-03-01T08:08:00Z","holon":"H1","attrs":{"space":{"width":{"value":2.05,"unit":"mm"}}}})"
      "\n";

  ReplaySummary summary = replay_log(m, log, ReconciliationPolicy::physical_wins,
                                     {{"space.width", 0.01}});
  CHECK(summary.applied == 2);
  CHECK(summary.rejected == 4);
  REQUIRE(summary.rejected_messages.size() == 4);
  CHECK(summary.rejected_messages[0].rfind("line 2:", 0) == 0);
  CHECK(summary.rejected_messages[1].rfind("line 3:", 0) == 0);
  CHECK(summary.rejected_messages[2].rfind("line 4:", 0) == 0);
  CHECK(summary.rejected_messages[3].rfind("line 5:", 0) == 0);

  // The first event diverged and physical-wins reconciled it immediately;
  // the final informational update matches the observation.
  CHECK(summary.divergences == 1);
  CHECK(summary.reconciled == 1);
  CHECK(detect_divergence(m, HolonId("H1"), {{"space.width", 0.01}}).verdict ==
        Verdict::coherent);
}

TEST_CASE("manual replay counts divergences without touching the model") {
  Model m = width_model();
  std::string log =
      R"({"kind":"physical","timestamp":"2024-03-01T08:05:00Z","tag":"SN-001","attrs":{"space":{"width":2.5}}})"
      "\n";
  ReplaySummary summary = replay_log(m, log, ReconciliationPolicy::manual);
  CHECK(summary.applied == 1);
  CHECK(summary.divergences == 1);
  CHECK(summary.reconciled == 0);
  CHECK(m.holons.at(HolonId("H1")).state_history.size() == 1);
}

TEST_CASE("replay is deterministic") {
  Model base = hpmtest::random_model(77, 8);
  std::string log = hpmtest::random_event_log(99, base, 120, true);

  Model a = base;
  Model b = base;
  ReplaySummary sa = replay_log(a, log, ReconciliationPolicy::physical_wins);
  ReplaySummary sb = replay_log(b, log, ReconciliationPolicy::physical_wins);
  CHECK(sa.applied == sb.applied);
  CHECK(sa.rejected == sb.rejected);
  CHECK(sa.divergences == sb.divergences);
  CHECK(sa.reconciled == sb.reconciled);
  CHECK(sa.applied + sa.rejected == 120);
  CHECK(sa.rejected > 0);  // the generator was asked for bad lines
  CHECK(emit_hpm(a) == emit_hpm(b));
}

TEST_CASE("replayed models under physical-wins end coherent") {
  Model m = hpmtest::random_model(31, 8);
  std::string log = hpmtest::random_event_log(32, m, 150, false);
  replay_log(m, log, ReconciliationPolicy::physical_wins);
  for (const auto& [id, h] : m.holons) {
    if (h.kind != HolonKind::elementary || h.physical_track.empty()) continue;
    if (!sync::detail::latest_live_observation(m, h)) continue;
    CHECK(detect_divergence(m, id).verdict == Verdict::coherent);
  }
}
