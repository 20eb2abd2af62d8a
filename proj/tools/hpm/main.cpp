// hpm: validate, convert, and replay holonic product models.
//
// Exit codes: 0 success, 1 domain failure (invalid document, divergent
// outcome, non-interoperable pair), 2 usage or environment failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hpm/hpm.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_domain = 1;
constexpr int exit_env = 2;

struct EnvironmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EnvironmentError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw EnvironmentError("error while reading '" + path + "'");
  return std::move(buf).str();
}

// Writes via a sibling temp file and rename, so a crash never leaves a
// half-written output behind.
void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw EnvironmentError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw EnvironmentError("error while writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw EnvironmentError("cannot move output into place at '" + path + "'");
  }
}

void emit_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file_atomic(out_path, content);
}

hpm::sync::ToleranceMap load_tolerances(const std::string& path) {
  hpm::sync::ToleranceMap tolerances;
  if (path.empty()) return tolerances;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw EnvironmentError("tolerances file '" + path + "': " + e.what());
  }
  if (!j.is_object())
    throw EnvironmentError("tolerances file '" + path + "' must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number() || it.value().get<double>() < 0)
      throw EnvironmentError("tolerance '" + it.key() + "' must be a non-negative number");
    tolerances[it.key()] = it.value().get<double>();
  }
  return tolerances;
}

std::set<std::string> load_concepts(const std::string& path) {
  std::set<std::string> concepts;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string_view token = hpm::mapping::detail::trim(line);
    if (!token.empty()) concepts.insert(std::string(token));
  }
  return concepts;
}

int run_validate(const std::string& model_path) {
  hpm::ValidationReport report = hpm::check_document(read_file(model_path));
  for (const hpm::Violation& v : report.entries)
    std::cout << hpm::severity_name(v.severity) << " " << hpm::rule_name(v.rule) << " ["
              << v.entity << "] " << v.message << "\n";
  std::cout << report.error_count() << " error(s)\n";
  return report.ok() ? exit_ok : exit_domain;
}

int run_export(const std::string& model_path, const std::string& format,
               const std::string& out_path, bool properties_only) {
  hpm::Model m = hpm::parse_hpm(read_file(model_path));
  std::string doc;
  if (format == "ueml")
    doc = hpm::ueml::to_ueml(m);
  else if (format == "b2mml-material")
    doc = hpm::b2mml::to_b2mml_material(m, properties_only);
  else if (format == "b2mml-proddef")
    doc = hpm::b2mml::to_b2mml_product_definition(m);
  else
    throw CLI::ValidationError("--format", "unknown format '" + format + "'");
  emit_output(out_path, doc);
  return exit_ok;
}

int run_import_b2mml(const std::string& doc_path, const std::string& out_path) {
  hpm::Model m = hpm::b2mml::from_b2mml_material(read_file(doc_path));
  emit_output(out_path, hpm::emit_hpm(m));
  return exit_ok;
}

int run_genealogy(const std::string& model_path, const std::string& holon,
                  const std::string& out_path) {
  hpm::Model m = hpm::parse_hpm(read_file(model_path));
  hpm::GenealogyGraph g = hpm::genealogy(m, hpm::HolonId(holon));

  std::map<hpm::HolonId, std::vector<hpm::GenealogyEdge>> incoming;
  for (const hpm::GenealogyEdge& e : g.edges) incoming[e.child].push_back(e);

  std::ostringstream out;
  out << g.nodes.size() << " nodes, " << g.edges.size() << " edges\n";
  std::map<hpm::HolonId, std::size_t> depths = hpm::node_depths(g);
  for (const hpm::HolonId& node : hpm::topological_order(g)) {
    out << std::string(2 * depths.at(node), ' ') << node.value;
    if (auto it = incoming.find(node); it != incoming.end()) {
      out << "  (from";
      for (const hpm::GenealogyEdge& e : it->second) {
        out << " " << e.parent.value;
        if (e.via) out << " via " << e.via->value;
        if (&e != &it->second.back()) out << ",";
      }
      out << ")";
    }
    out << "\n";
  }
  if (!out_path.empty()) {
    std::ostringstream graph;
    for (const hpm::GenealogyEdge& e : g.edges) {
      graph << e.parent.value << " -> " << e.child.value;
      if (e.via) graph << " [via=" << e.via->value << "]";
      graph << "\n";
    }
    write_file_atomic(out_path, graph.str());
  }
  std::cout << out.str();
  return exit_ok;
}

int run_replay(const std::string& model_path, const std::string& log_path,
               const std::string& out_path, const std::string& policy_name,
               const std::string& tolerances_path) {
  auto policy = hpm::sync::parse_policy(policy_name);
  if (!policy) throw CLI::ValidationError("--policy", "unknown policy '" + policy_name + "'");

  std::string tol_path = tolerances_path;
  if (tol_path.empty())
    if (const char* env = std::getenv("HPM_TOLERANCES")) tol_path = env;
  hpm::sync::ToleranceMap tolerances = load_tolerances(tol_path);

  hpm::Model m = hpm::parse_hpm(read_file(model_path));
  hpm::sync::ReplaySummary summary =
      hpm::sync::replay_log(m, read_file(log_path), *policy, tolerances);

  if (!out_path.empty()) write_file_atomic(out_path, hpm::emit_hpm(m));
  std::cout << "applied " << summary.applied << ", rejected " << summary.rejected
            << ", divergences " << summary.divergences << ", reconciled " << summary.reconciled
            << "\n";
  for (const std::string& msg : summary.rejected_messages) std::cout << "rejected: " << msg << "\n";
  return summary.rejected == 0 ? exit_ok : exit_domain;
}

hpm::mapping::MappingRuleSet load_rules_file(const std::string& path, hpm::mapping::MetaModel src,
                                             hpm::mapping::MetaModel tgt) {
  try {
    return hpm::mapping::load_rules(read_file(path), src, tgt);
  } catch (const hpm::Error& e) {
    if (e.code() == hpm::Errc::rules_syntax)
      throw EnvironmentError("rules file '" + path + "': " + e.what());
    throw;
  }
}

int run_check_interop(const std::string& rules_fwd_path, const std::string& rules_bwd_path,
                      const std::string& concepts_a_path, const std::string& concepts_b_path) {
  using namespace hpm::mapping;

  MappingRuleSet fwd{MetaModel::holonic, MetaModel::iec62264, {}};
  MappingRuleSet bwd{MetaModel::iec62264, MetaModel::holonic, {}};
  std::set<std::string> concepts_a, concepts_b;
  if (rules_fwd_path.empty() && rules_bwd_path.empty()) {
    fwd = builtin_ruleset(MetaModel::holonic, MetaModel::iec62264);
    bwd = builtin_ruleset(MetaModel::iec62264, MetaModel::holonic);
    concepts_a = sources(fwd);
    concepts_b = sources(bwd);
  } else {
    // A missing side stays empty, so its universe goes uncovered and the
    // verdict is honest about one-way rule sets.
    if (!rules_fwd_path.empty())
      fwd = load_rules_file(rules_fwd_path, MetaModel::holonic, MetaModel::iec62264);
    if (!rules_bwd_path.empty())
      bwd = load_rules_file(rules_bwd_path, MetaModel::iec62264, MetaModel::holonic);
    concepts_a = sources(fwd);
    for (const std::string& c : targets(bwd)) concepts_a.insert(c);
    concepts_b = sources(bwd);
    for (const std::string& c : targets(fwd)) concepts_b.insert(c);
  }
  if (!concepts_a_path.empty()) concepts_a = load_concepts(concepts_a_path);
  if (!concepts_b_path.empty()) concepts_b = load_concepts(concepts_b_path);

  InteropReport report = check_interoperability(fwd, bwd, concepts_a, concepts_b);
  std::cout << meta_model_name(fwd.source) << " (" << mda_level_name(MdaLevel::m2) << ") <-> "
            << meta_model_name(fwd.target) << " (" << mda_level_name(MdaLevel::m2) << "): "
            << (report.interoperable ? "interoperable" : "not interoperable") << "\n";
  for (const std::string& c : report.uncovered_a)
    std::cout << "uncovered " << meta_model_name(fwd.source) << " concept: " << c << "\n";
  for (const std::string& c : report.uncovered_b)
    std::cout << "uncovered " << meta_model_name(fwd.target) << " concept: " << c << "\n";
  return report.interoperable ? exit_ok : exit_domain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holonic product model toolkit"};
  app.require_subcommand(1);

  std::string model_path, holon, out_path, format, doc_path, log_path;
  std::string policy_name = "manual";
  std::string tolerances_path, rules_fwd, rules_bwd, concepts_a, concepts_b;
  bool properties_only = false;

  CLI::App* validate = app.add_subcommand("validate", "Check an HPM-XML document");
  validate->add_option("model", model_path, "HPM-XML file")->required();

  CLI::App* exp = app.add_subcommand("export", "Convert a model to a partner format");
  exp->add_option("model", model_path, "HPM-XML file")->required();
  exp->add_option("--format", format, "ueml | b2mml-material | b2mml-proddef")->required();
  exp->add_option("--out", out_path, "Output file (stdout when omitted)");
  exp->add_flag("--properties-only", properties_only,
                "b2mml-material: skip per-state attribute snapshots");

  CLI::App* imp = app.add_subcommand("import-b2mml", "Rebuild a model from a material document");
  imp->add_option("document", doc_path, "B2MML material file")->required();
  imp->add_option("--out", out_path, "Output file (stdout when omitted)");

  CLI::App* gen = app.add_subcommand("genealogy", "Print a holon's ancestor graph");
  gen->add_option("model", model_path, "HPM-XML file")->required();
  gen->add_option("holon", holon, "Holon id")->required();
  gen->add_option("--out", out_path, "Also write the edge list to a file");

  CLI::App* replay = app.add_subcommand("replay", "Apply a JSONL event log to a model");
  replay->add_option("model", model_path, "HPM-XML file")->required();
  replay->add_option("log", log_path, "JSONL event log")->required();
  replay->add_option("--out", out_path, "Write the replayed model");
  replay->add_option("--policy", policy_name,
                     "physical-wins | informational-wins | manual (default manual)");
  replay->add_option("--tolerances", tolerances_path,
                     "JSON tolerances file (default: $HPM_TOLERANCES)");

  CLI::App* interop = app.add_subcommand("check-interop", "Check a meta-model mapping pair");
  interop->add_option("--rules-fwd", rules_fwd, "Forward rules file (default: bundled tables)");
  interop->add_option("--rules-bwd", rules_bwd, "Backward rules file (default: bundled tables)");
  interop->add_option("--concepts-a", concepts_a, "Concept universe of side A, one per line");
  interop->add_option("--concepts-b", concepts_b, "Concept universe of side B, one per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_env;
  }

  try {
    if (validate->parsed()) return run_validate(model_path);
    if (exp->parsed()) return run_export(model_path, format, out_path, properties_only);
    if (imp->parsed()) return run_import_b2mml(doc_path, out_path);
    if (gen->parsed()) return run_genealogy(model_path, holon, out_path);
    if (replay->parsed())
      return run_replay(model_path, log_path, out_path, policy_name, tolerances_path);
    if (interop->parsed()) return run_check_interop(rules_fwd, rules_bwd, concepts_a, concepts_b);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_env;
  } catch (const EnvironmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_env;
  } catch (const hpm::Error& e) {
    std::cerr << "error: " << hpm::errc_name(e.code()) << " [" << e.entity() << "] " << e.what()
              << "\n";
    return exit_domain;
  }
  return exit_env;
}
