#include <catch2/catch_amalgamated.hpp>

#include "hpm/hpm.hpp"
#include "support/builders.hpp"
#include "support/catch_helpers.hpp"

using namespace hpm;
using hpmtest::at_minutes;
using hpmtest::qty;
using hpmtest::thrown_code;

namespace {

Model bolt_model() {
  Model m;
  InformationalPart info;
  info.id = "bolt-spec";
  info.description = "bolt spec";
  StateAttributes attrs;
  attrs.space["x"] = qty(0, "m");
  new_elementary_holon(m, HolonId("H1"), info, PhysicalPartRef{"bolt-phys", "SN-001"}, attrs,
                       at_minutes(0));
  return m;
}

}  // namespace

TEST_CASE("a new elementary holon carries one initial state") {
  Model m = bolt_model();
  const Holon& h = m.holons.at(HolonId("H1"));
  CHECK(h.kind == HolonKind::elementary);
  REQUIRE(h.state_history.size() == 1);
  const State& s0 = m.states.at(h.state_history[0]);
  CHECK(s0.kind == HolonKind::elementary);
  CHECK(s0.timestamp == at_minutes(0));
  CHECK(s0.attrs.space.at("x") == qty(0, "m"));
  CHECK(h.physical->tag == "SN-001");
}

TEST_CASE("reusing a holon id is rejected") {
  Model m = bolt_model();
  InformationalPart info;
  info.id = "other-spec";
  CHECK(thrown_code([&] {
          new_elementary_holon(m, HolonId("H1"), info, PhysicalPartRef{"p2", "SN-002"}, {},
                               at_minutes(1));
        }) == Errc::duplicate_id);
}

TEST_CASE("empty attribute groups are a valid initial state") {
  Model m = bolt_model();
  InformationalPart info;
  info.id = "washer-spec";
  new_elementary_holon(m, HolonId("H2"), info, PhysicalPartRef{"washer-phys", "SN-002"},
                       StateAttributes{}, at_minutes(1));
  const State& s0 = m.states.at(m.holons.at(HolonId("H2")).state_history[0]);
  CHECK(s0.attrs.space.empty());
  CHECK(s0.attrs.shape.empty());
  CHECK(s0.attrs.time.empty());
  CHECK(validate_model(m).ok());
}

TEST_CASE("informational and physical part ids are uniqueness categories") {
  Model m = bolt_model();
  InformationalPart dup_info;
  dup_info.id = "bolt-spec";
  CHECK(thrown_code([&] {
          new_elementary_holon(m, HolonId("H2"), dup_info, PhysicalPartRef{"p2", "SN-002"}, {},
                               at_minutes(1));
        }) == Errc::duplicate_id);

  InformationalPart fresh;
  fresh.id = "fresh-spec";
  CHECK(thrown_code([&] {
          new_elementary_holon(m, HolonId("H2"), fresh, PhysicalPartRef{"bolt-phys", "SN-002"},
                               {}, at_minutes(1));
        }) == Errc::duplicate_id);
}

TEST_CASE("record_state appends strictly after the last state") {
  Model m = bolt_model();
  StateAttributes attrs;
  attrs.space["x"] = qty(2, "m");
  StateId s1 = record_state(m, HolonId("H1"), attrs, at_minutes(5));
  const Holon& h = m.holons.at(HolonId("H1"));
  REQUIRE(h.state_history.size() == 2);
  CHECK(h.state_history[1] == s1);

  CHECK(thrown_code([&] { record_state(m, HolonId("H1"), attrs, at_minutes(5)); }) ==
        Errc::non_monotonic_timestamp);
  CHECK(thrown_code([&] { record_state(m, HolonId("H1"), attrs, at_minutes(0)); }) ==
        Errc::non_monotonic_timestamp);
  CHECK(thrown_code([&] { record_state(m, HolonId("nope"), attrs, at_minutes(9)); }) ==
        Errc::unknown_holon);
}

TEST_CASE("one hundred sequential records keep the lifecycle sorted") {
  Model m = bolt_model();
  for (int i = 1; i <= 100; ++i) {
    StateAttributes attrs;
    attrs.space["x"] = qty(i, "m");
    record_state(m, HolonId("H1"), attrs, at_minutes(i));
  }
  std::vector<State> hist = lifecycle(m, HolonId("H1"));
  REQUIRE(hist.size() == 101);
  for (std::size_t i = 1; i < hist.size(); ++i)
    REQUIRE(hist[i - 1].timestamp < hist[i].timestamp);
}

TEST_CASE("a process instance creates composites and closes input histories") {
  Model m = hpmtest::three_holon_model();
  REQUIRE(m.process_instances.size() == 1);
  const ProcessInstance& pi = m.process_instances.begin()->second;

  const Holon& out = m.holons.at(HolonId("h-asm"));
  CHECK(out.kind == HolonKind::composite);
  CHECK_FALSE(out.physical.has_value());
  REQUIRE(out.state_history.size() == 1);
  CHECK(m.states.at(out.state_history[0]).timestamp == pi.end);

  // Each input holon gained exactly one post-processing state marking the
  // consuming instance.
  for (const char* id : {"h-plate", "h-bolt"}) {
    const Holon& in = m.holons.at(HolonId(id));
    REQUIRE(in.state_history.size() == 2);
    const State& last = m.states.at(in.state_history.back());
    CHECK(last.timestamp == pi.end);
    CHECK(last.attrs.time.at("consumedBy") == TypedValue(pi.id.value));
  }
  CHECK(validate_model(m).ok());
}

TEST_CASE("decomposition: one input state may yield several composites") {
  Model m = bolt_model();
  add_process(m, ProcessId("split"), "Split");
  ProcessExecution exec;
  exec.process = ProcessId("split");
  exec.inputs = {m.holons.at(HolonId("H1")).state_history.back()};
  OutputSpec a, b;
  a.id = HolonId("H3");
  a.informational.id = "h3-spec";
  b.id = HolonId("H4");
  b.informational.id = "h4-spec";
  exec.outputs = {a, b};
  exec.start = at_minutes(10);
  exec.end = at_minutes(11);
  std::vector<HolonId> made = apply_process_instance(m, exec);
  REQUIRE(made == std::vector<HolonId>{HolonId("H3"), HolonId("H4")});
  CHECK(m.process_instances.size() == 1);
  CHECK(m.holons.at(HolonId("H1")).state_history.size() == 2);

  std::set<std::pair<std::string, std::string>> edges;
  for (const GenealogyEdge& e : all_genealogy_edges(m))
    edges.insert({e.parent.value, e.child.value});
  CHECK(edges == std::set<std::pair<std::string, std::string>>{{"H1", "H3"}, {"H1", "H4"}});
}

TEST_CASE("mixed elementary and composite inputs are rejected") {
  Model m = hpmtest::three_holon_model();
  add_process(m, ProcessId("pack"), "Pack");
  ProcessExecution exec;
  exec.process = ProcessId("pack");
  exec.inputs = {m.holons.at(HolonId("h-plate")).state_history.back(),
                 m.holons.at(HolonId("h-asm")).state_history.back()};
  OutputSpec out;
  out.id = HolonId("h-box");
  out.informational.id = "box-spec";
  exec.outputs = {out};
  exec.start = at_minutes(40);
  exec.end = at_minutes(50);
  CHECK(thrown_code([&] { apply_process_instance(m, exec); }) == Errc::mixed_input_kinds);
  CHECK(m.holons.count(HolonId("h-box")) == 0);
  CHECK(m.process_instances.size() == 1);  // nothing half-applied
}

TEST_CASE("process execution preconditions") {
  Model m = bolt_model();
  add_process(m, ProcessId("p"), "P");
  StateId s0 = m.holons.at(HolonId("H1")).state_history.back();
  OutputSpec out;
  out.id = HolonId("H9");
  out.informational.id = "h9-spec";

  ProcessExecution exec;
  exec.process = ProcessId("missing");
  exec.inputs = {s0};
  exec.outputs = {out};
  exec.start = at_minutes(1);
  exec.end = at_minutes(2);
  CHECK(thrown_code([&] { apply_process_instance(m, exec); }) == Errc::unknown_process);

  exec.process = ProcessId("p");
  exec.inputs = {StateId("S9")};
  CHECK(thrown_code([&] { apply_process_instance(m, exec); }) == Errc::unknown_state);

  exec.inputs = {s0};
  exec.end = at_minutes(0);
  exec.start = at_minutes(2);
  CHECK(thrown_code([&] { apply_process_instance(m, exec); }) == Errc::time_order_violation);

  exec.start = at_minutes(1);
  exec.end = at_minutes(2);
  exec.personnel = {ResourceId("r9")};
  CHECK(thrown_code([&] { apply_process_instance(m, exec); }) == Errc::unknown_resource);

  add_resource(m, ResourceId("r9"), ResourceKind::material, "rig");
  CHECK(thrown_code([&] { apply_process_instance(m, exec); }) == Errc::malformed_attribute);

  exec.personnel.clear();
  apply_process_instance(m, exec);
  CHECK(m.holons.count(HolonId("H9")) == 1);
}

TEST_CASE("flows check membership against the right id category") {
  Model m = hpmtest::three_holon_model();
  CHECK(thrown_code([&] {
          add_flow(m, FlowId("f-bad"), FlowKind::holon, {"plate-spec"});
        }) == Errc::dangling_ref);
  CHECK(thrown_code([&] {
          add_flow(m, FlowId("f-bad"), FlowKind::informational, {"h-plate"});
        }) == Errc::dangling_ref);
  CHECK(thrown_code([&] {
          add_flow(m, FlowId("f-bad"), FlowKind::physical, {"rfid-plate"});
        }) == Errc::dangling_ref);
  add_flow(m, FlowId("f-ok"), FlowKind::physical, {"plate-1"});
  CHECK(m.flows.at(FlowId("f-ok")).members == std::vector<std::string>{"plate-1"});
}

TEST_CASE("lifecycle basics") {
  Model m = bolt_model();
  CHECK(lifecycle(m, HolonId("H1")).size() == 1);
  CHECK(thrown_code([&] { lifecycle(m, HolonId("H8")); }) == Errc::unknown_holon);

  Model full = hpmtest::three_holon_model();
  CHECK(lifecycle(full, HolonId("h-plate")).size() == 2);
}

TEST_CASE("properties are flat name-value pairs") {
  Model m = bolt_model();
  set_property(m, HolonId("H1"), "hardness", qty(42, "HRC"));
  set_property(m, HolonId("H1"), "vendor", TypedValue(std::string("acme")));
  set_property(m, HolonId("H1"), "hardness", qty(43, "HRC"));  // overwrite
  CHECK(m.holons.at(HolonId("H1")).properties.at("hardness") == qty(43, "HRC"));
  CHECK(m.holons.at(HolonId("H1")).properties.size() == 2);
  CHECK(thrown_code([&] { set_property(m, HolonId("H1"), "", qty(1)); }) ==
        Errc::malformed_attribute);
}
