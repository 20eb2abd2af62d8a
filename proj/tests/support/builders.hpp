#pragma once

#include <string>

#include "hpm/hpm.hpp"

// Shared fixture builders. All timestamps hang off one fixed epoch so tests
// stay deterministic and readable.
namespace hpmtest {

inline hpm::Instant epoch() {
  return *hpm::parse_instant("2024-03-01T08:00:00Z");
}

inline hpm::Instant at_minutes(std::int64_t minutes) {
  return epoch() + minutes * 60'000;
}

inline hpm::TypedValue qty(double value, std::string unit = {}) {
  return hpm::TypedValue(hpm::Quantity{value, std::move(unit)});
}

inline hpm::StateAttributes xy(double x, double y) {
  hpm::StateAttributes attrs;
  attrs.space["x"] = qty(x, "mm");
  attrs.space["y"] = qty(y, "mm");
  return attrs;
}

// Two elementary holons welded into one composite, with resources, an
// operator, and one flow of each kind.
inline hpm::Model three_holon_model() {
  using namespace hpm;
  Model m;

  InformationalPart plate_info;
  plate_info.id = "plate-spec";
  plate_info.description = "steel plate";
  plate_info.attributes["thickness"] = hpmtest::qty(4, "mm");
  new_elementary_holon(m, HolonId("h-plate"), plate_info, PhysicalPartRef{"plate-1", "rfid-plate"},
                       xy(0, 0), at_minutes(0));

  InformationalPart bolt_info;
  bolt_info.id = "bolt-spec";
  bolt_info.description = "hex bolt";
  new_elementary_holon(m, HolonId("h-bolt"), bolt_info, PhysicalPartRef{"bolt-1", "rfid-bolt"},
                       xy(5, 5), at_minutes(1));

  set_property(m, HolonId("h-plate"), "batch", TypedValue(std::string("B-77")));
  set_property(m, HolonId("h-bolt"), "coated", TypedValue(true));

  add_process(m, ProcessId("weld"), "Weld assembly", "joins plate and bolt");
  add_resource(m, ResourceId("r-rig"), ResourceKind::material, "welding rig");
  add_resource(m, ResourceId("r-op"), ResourceKind::human, "operator");

  ProcessExecution exec;
  exec.process = ProcessId("weld");
  exec.inputs = {m.holons.at(HolonId("h-plate")).state_history.back(),
                 m.holons.at(HolonId("h-bolt")).state_history.back()};
  OutputSpec out;
  out.id = HolonId("h-asm");
  out.informational.id = "asm-spec";
  out.informational.description = "welded assembly";
  out.initial_attrs = xy(2, 2);
  out.initial_attrs.shape["welds"] = qty(3);
  exec.outputs = {out};
  exec.start = at_minutes(10);
  exec.end = at_minutes(30);
  exec.resources = {ResourceId("r-rig")};
  exec.equipment = {"cell-7"};
  exec.personnel = {ResourceId("r-op")};
  apply_process_instance(m, exec);

  add_flow(m, FlowId("f-line"), FlowKind::holon, {"h-plate", "h-bolt", "h-asm"});
  add_flow(m, FlowId("f-specs"), FlowKind::informational, {"plate-spec", "bolt-spec"});
  add_flow(m, FlowId("f-parts"), FlowKind::physical, {"plate-1", "bolt-1"});
  return m;
}

}  // namespace hpmtest
