#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "hpm/hpm.hpp"
#include "support/builders.hpp"
#include "support/catch_helpers.hpp"
#include "support/generators.hpp"

using namespace hpm;
using hpmtest::thrown_code;

namespace {

const xml::Element* by_id(const xml::Element& root, std::string_view local, std::string_view id) {
  for (const xml::Element& c : root.children)
    if (c.local == local && c.attr("id") == id) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("an empty model exports to an empty UEML document") {
  std::string bytes = ueml::to_ueml(Model{});
  xml::Element root = xml::parse(bytes);
  CHECK(root.ns == ueml::ueml_ns);
  CHECK(root.local == "Model");
  CHECK(root.children.empty());
  CHECK(schema::check(ueml::ueml_grammar(), root).ok());
}

TEST_CASE("one elementary holon becomes a cross-referenced Object triple") {
  Model m;
  InformationalPart info;
  info.id = "spec-1";
  info.description = "bolt spec";
  info.attributes["grade"] = TypedValue(Quantity{8.8, {}});
  new_elementary_holon(m, HolonId("H1"), info, PhysicalPartRef{"part-1", "SN-001"}, {},
                       hpmtest::epoch());

  xml::Element root = xml::parse(ueml::to_ueml(m));
  REQUIRE(root.children.size() == 3);

  const xml::Element* io = by_id(root, "InformationObject", "spec-1");
  REQUIRE(io != nullptr);
  CHECK(io->attr("description") == "bolt spec");
  REQUIRE(io->children.size() == 1);
  CHECK(io->children[0].attr("name") == "grade");
  CHECK(io->children[0].attr("value") == "8.8");

  const xml::Element* mat = by_id(root, "MaterialResource", "part-1");
  REQUIRE(mat != nullptr);
  CHECK(mat->attr("tag") == "SN-001");

  const xml::Element* obj = by_id(root, "Object", "H1");
  REQUIRE(obj != nullptr);
  CHECK(obj->attr("classification") == "holon");
  CHECK(obj->child("informationObject")->attr("ref") == "spec-1");
  CHECK(obj->child("materialResource")->attr("ref") == "part-1");
}

TEST_CASE("a holon without a physical part id gets a synthetic material id") {
  Model m;
  new_elementary_holon(m, HolonId("H1"), InformationalPart{"spec-1", {}, {}},
                       PhysicalPartRef{{}, "SN-1"}, {}, hpmtest::epoch());
  xml::Element root = xml::parse(ueml::to_ueml(m));
  const xml::Element* mat = by_id(root, "MaterialResource", "H1-material");
  REQUIRE(mat != nullptr);
  const xml::Element* obj = by_id(root, "Object", "H1");
  REQUIRE(obj != nullptr);
  CHECK(obj->child("materialResource")->attr("ref") == "H1-material");
}

TEST_CASE("a process exports as an Activity carrying its name") {
  Model m;
  new_elementary_holon(m, HolonId("H1"), InformationalPart{"spec-1", {}, {}},
                       PhysicalPartRef{{}, "SN-1"}, {}, hpmtest::epoch());
  add_process(m, ProcessId("p-drill"), "drill", "");

  xml::Element root = xml::parse(ueml::to_ueml(m));
  const xml::Element* act = by_id(root, "Activity", "p-drill");
  REQUIRE(act != nullptr);
  CHECK(act->attr("name") == "drill");
  CHECK(act->children.empty());  // never instantiated: no inputs or outputs
}

TEST_CASE("activity inputs and outputs are the holons its instances touched") {
  Model m = hpmtest::three_holon_model();
  xml::Element root = xml::parse(ueml::to_ueml(m));
  const xml::Element* act = by_id(root, "Activity", "weld");
  REQUIRE(act != nullptr);

  std::vector<std::string> inputs, outputs;
  for (const xml::Element* e : act->children_named("Input"))
    inputs.push_back(std::string(*e->attr("object")));
  for (const xml::Element* e : act->children_named("Output"))
    outputs.push_back(std::string(*e->attr("object")));
  CHECK(inputs == std::vector<std::string>{"h-bolt", "h-plate"});
  CHECK(outputs == std::vector<std::string>{"h-asm"});

  // Composite: Object without a materialResource reference.
  const xml::Element* asm_obj = by_id(root, "Object", "h-asm");
  REQUIRE(asm_obj != nullptr);
  CHECK(asm_obj->child("materialResource") == nullptr);
  CHECK(asm_obj->child("informationObject")->attr("ref") == "asm-spec");
}

TEST_CASE("every exported document passes the UEML grammar") {
  for (unsigned seed : {2u, 11u, 42u, 77u}) {
    CAPTURE(seed);
    Model m = hpmtest::random_model(seed);
    xml::Element root = xml::parse(ueml::to_ueml(m));
    ValidationReport report = schema::check(ueml::ueml_grammar(), root);
    CHECK(report.ok());
  }
}

TEST_CASE("export is deterministic") {
  Model m = hpmtest::random_model(9);
  CHECK(ueml::to_ueml(m) == ueml::to_ueml(m));
}

TEST_CASE("invalid models are refused") {
  Model m = hpmtest::three_holon_model();
  m.holons.at(HolonId("h-plate")).physical.reset();  // break cardinality
  CHECK(thrown_code([&] { ueml::to_ueml(m); }) == Errc::invalid_model);
}
