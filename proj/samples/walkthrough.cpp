// End-to-end tour: build a model, round-trip it, export partner documents,
// query genealogy, and reconcile a physical observation.

#include <cassert>
#include <iostream>

#include "hpm/hpm.hpp"

using namespace hpm;

namespace {

Instant at(const char* iso) {
  auto t = parse_instant(iso);
  assert(t);
  return *t;
}

TypedValue mm(double v) { return Quantity{v, "mm"}; }

}  // namespace

int main() {
  Model m;

  // Two elementary holons: an informational description paired with a tagged
  // physical part, each starting its lifecycle with an initial state.
  new_elementary_holon(m, HolonId("h-plate"),
                       InformationalPart{"plate-spec", "steel plate",
                                         {{"thickness", mm(4.0)}}},
                       PhysicalPartRef{"plate-1", "rfid-plate"},
                       StateAttributes{{{"x", mm(0.0)}, {"y", mm(0.0)}}, {}, {}},
                       at("2024-03-01T08:00:00Z"));
  new_elementary_holon(m, HolonId("h-bolt"),
                       InformationalPart{"bolt-spec", "hex bolt", {}},
                       PhysicalPartRef{"bolt-1", "rfid-bolt"},
                       StateAttributes{{{"x", mm(5.0)}, {"y", mm(5.0)}}, {}, {}},
                       at("2024-03-01T08:01:00Z"));
  set_property(m, HolonId("h-plate"), "batch", std::string("B-77"));

  add_process(m, ProcessId("weld"), "Weld assembly", "joins plate and bolt");
  add_resource(m, ResourceId("r-rig"), ResourceKind::material, "welding rig");
  add_resource(m, ResourceId("r-op"), ResourceKind::human, "operator");

  // Executing the process consumes the latest input states and creates a
  // composite holon; the instance records the genealogy edge.
  ProcessExecution exec;
  exec.process = ProcessId("weld");
  exec.inputs = {*latest_state_id(m, HolonId("h-plate")),
                 *latest_state_id(m, HolonId("h-bolt"))};
  exec.outputs = {{HolonId("h-asm"),
                   InformationalPart{"asm-spec", "welded assembly", {}},
                   StateAttributes{{{"x", mm(2.0)}}, {{"welds", Quantity{3.0, ""}}}, {}}}};
  exec.start = at("2024-03-01T08:10:00Z");
  exec.end = at("2024-03-01T08:30:00Z");
  exec.resources = {ResourceId("r-rig")};
  exec.equipment = {"cell-7"};
  exec.personnel = {ResourceId("r-op")};
  apply_process_instance(m, exec);

  add_flow(m, FlowId("f-line"), FlowKind::holon, {"h-plate", "h-bolt", "h-asm"});

  // The canonical document round-trips exactly.
  std::string doc = emit_hpm(m);
  Model back = parse_hpm(doc);
  assert(back == m);
  assert(validate_model(m).ok());
  std::cout << "model: " << m.holons.size() << " holons, " << m.states.size()
            << " states, document " << doc.size() << " bytes\n";

  // Partner exports; the material document carries enough to rebuild ids,
  // flows, properties, and genealogy.
  std::string ueml_doc = ueml::to_ueml(m);
  std::string material = b2mml::to_b2mml_material(m);
  Model from_material = b2mml::from_b2mml_material(material);
  std::cout << "exports: ueml " << ueml_doc.size() << " bytes, material "
            << material.size() << " bytes, " << from_material.holons.size()
            << " holons recovered\n";

  GenealogyGraph g = genealogy(m, HolonId("h-asm"));
  std::cout << "genealogy of h-asm: " << g.nodes.size() << " nodes, "
            << g.edges.size() << " edges\n";

  // A shop-floor reading lands on the physical shadow track; reconciliation
  // under physical-wins appends the corrected informational state.
  sync::PhysicalEvent reading;
  reading.timestamp = at("2024-03-01T09:00:00Z");
  reading.physical_tag = "rfid-plate";
  reading.observed = StateAttributes{{{"x", mm(0.4)}}, {}, {}};
  sync::ingest_physical_event(m, reading);

  sync::DivergenceReport report = sync::detect_divergence(m, HolonId("h-plate"));
  std::cout << "h-plate before reconcile: "
            << (report.verdict == sync::Verdict::divergent ? "divergent" : "coherent") << "\n";
  sync::reconcile(m, HolonId("h-plate"), report, sync::ReconciliationPolicy::physical_wins);
  report = sync::detect_divergence(m, HolonId("h-plate"));
  std::cout << "h-plate after reconcile:  "
            << (report.verdict == sync::Verdict::divergent ? "divergent" : "coherent") << "\n";

  assert(report.verdict == sync::Verdict::coherent);
  assert(validate_model(m).ok());
  std::cout << "walkthrough complete\n";
  return 0;
}
