#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hpm/model.hpp"

namespace hpm {

// parent was consumed (directly or via one of its states) by the process
// instance that produced child. Imported edges carry no instance.
struct GenealogyEdge {
  HolonId parent;
  HolonId child;
  std::optional<ProcessInstanceId> via;

  friend auto operator<=>(const GenealogyEdge&, const GenealogyEdge&) = default;
};

struct GenealogyGraph {
  std::set<HolonId> nodes;
  std::set<GenealogyEdge> edges;

  friend bool operator==(const GenealogyGraph&, const GenealogyGraph&) = default;
};

// Every genealogy edge in the model: process-instance derived plus imported
// assembly edges. Dangling references are skipped; validate_model reports them.
inline std::vector<GenealogyEdge> all_genealogy_edges(const Model& m) {
  std::set<GenealogyEdge> out;
  for (const auto& [id, pi] : m.process_instances) {
    for (const StateId& sid : pi.input_states) {
      auto st = m.states.find(sid);
      if (st == m.states.end()) continue;
      for (const HolonId& child : pi.output_holons)
        out.insert({st->second.holon, child, id});
    }
  }
  for (const AssemblyEdge& e : m.assembly_edges) out.insert({e.parent, e.child, std::nullopt});
  return {out.begin(), out.end()};
}

// The ancestor sub-DAG of a holon: all holons it was made from, transitively,
// with edges labeled by the producing process instance.
inline GenealogyGraph genealogy(const Model& m, const HolonId& holon_id) {
  require_holon(m, holon_id);
  std::multimap<HolonId, GenealogyEdge> incoming;  // child -> edges into it
  for (GenealogyEdge& e : all_genealogy_edges(m)) incoming.emplace(e.child, e);

  GenealogyGraph g;
  std::deque<HolonId> queue{holon_id};
  g.nodes.insert(holon_id);
  while (!queue.empty()) {
    HolonId current = queue.front();
    queue.pop_front();
    auto [lo, hi] = incoming.equal_range(current);
    for (auto it = lo; it != hi; ++it) {
      g.edges.insert(it->second);
      if (g.nodes.insert(it->second.parent).second) queue.push_back(it->second.parent);
    }
  }
  return g;
}

// Kahn topological order, ties broken by holon id. Nodes on a cycle are
// left out, which only happens on models validate_model already rejects.
inline std::vector<HolonId> topological_order(const GenealogyGraph& g) {
  std::map<HolonId, std::size_t> pending;
  std::multimap<HolonId, HolonId> downstream;
  for (const HolonId& n : g.nodes) pending[n] = 0;
  std::set<std::pair<HolonId, HolonId>> seen;
  for (const GenealogyEdge& e : g.edges) {
    if (!seen.insert({e.parent, e.child}).second) continue;  // parallel edges count once
    ++pending[e.child];
    downstream.emplace(e.parent, e.child);
  }
  std::set<HolonId> ready;
  for (const auto& [node, count] : pending)
    if (count == 0) ready.insert(node);
  std::vector<HolonId> order;
  while (!ready.empty()) {
    HolonId node = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(node);
    auto [lo, hi] = downstream.equal_range(node);
    for (auto it = lo; it != hi; ++it)
      if (--pending[it->second] == 0) ready.insert(it->second);
  }
  return order;
}

// Depth of each node measured as the longest path from a source; used for
// indentation in the CLI rendering.
inline std::map<HolonId, std::size_t> node_depths(const GenealogyGraph& g) {
  std::map<HolonId, std::size_t> depth;
  for (const HolonId& n : topological_order(g)) {
    std::size_t d = 0;
    for (const GenealogyEdge& e : g.edges)
      if (e.child == n && depth.count(e.parent)) d = std::max(d, depth[e.parent] + 1);
    depth[n] = d;
  }
  return depth;
}

}  // namespace hpm
