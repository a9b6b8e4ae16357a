#include "cablerouting/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cablerouting {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kJunction:
      return "junction";
    case NodeKind::kHvSubstation:
      return "hv_substation";
    case NodeKind::kMvSubstation:
      return "mv_substation";
  }
  return "junction";
}

NodeKind node_kind_from_string(const std::string& text) {
  if (text == "junction") return NodeKind::kJunction;
  if (text == "hv_substation") return NodeKind::kHvSubstation;
  if (text == "mv_substation") return NodeKind::kMvSubstation;
  throw GraphError("unknown node kind '" + text + "'");
}

int RoadGraph::add_node(double x, double y, NodeKind kind) {
  const int id = node_count();
  nodes_.push_back(RoadNode{id, x, y, kind});
  adjacency_.emplace_back();
  return id;
}

int RoadGraph::add_edge(int u, int v, double length, const EdgeCosts& costs) {
  if (u < 0 || v < 0 || u >= node_count() || v >= node_count()) {
    throw GraphError("edge endpoint out of range");
  }
  if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
  if (find_edge(u, v)) {
    throw GraphError("duplicate edge " + std::to_string(u) + "-" +
                     std::to_string(v));
  }
  if (!(length > 0.0)) throw GraphError("edge length must be positive");
  if (costs.max_cables < 1) throw GraphError("max_cables must be >= 1");
  const int id = edge_count();
  edges_.push_back(RoadEdge{id, u, v, length, costs.trench_per_km,
                            costs.cable_per_km, costs.max_cables});
  adjacency_[u].push_back(Incidence{id, v});
  adjacency_[v].push_back(Incidence{id, u});
  return id;
}

int RoadGraph::split_edge(int edge_id, double x, double y, NodeKind kind) {
  const RoadEdge old = edges_.at(edge_id);
  const int p = add_node(x, y, kind);
  const RoadNode& a = nodes_[old.u];
  const RoadNode& b = nodes_[old.v];
  const double len_a = std::hypot(x - a.x, y - a.y);
  const double len_b = std::hypot(b.x - x, b.y - y);
  if (!(len_a > 0.0) || !(len_b > 0.0)) {
    throw GraphError("split point coincides with an endpoint");
  }

  RoadEdge& kept = edges_[edge_id];
  kept.v = p;
  kept.length = len_a;
  for (Incidence& inc : adjacency_[old.u]) {
    if (inc.edge == edge_id) inc.node = p;
  }
  auto& vadj = adjacency_[old.v];
  vadj.erase(std::remove_if(vadj.begin(), vadj.end(),
                            [&](const Incidence& i) { return i.edge == edge_id; }),
             vadj.end());
  adjacency_[p].push_back(Incidence{edge_id, old.u});

  const int rest = edge_count();
  edges_.push_back(RoadEdge{rest, p, old.v, len_b, old.trench_cost,
                            old.cable_cost, old.max_cables});
  adjacency_[p].push_back(Incidence{rest, old.v});
  adjacency_[old.v].push_back(Incidence{rest, p});
  return p;
}

std::optional<int> RoadGraph::find_edge(int u, int v) const {
  if (u < 0 || u >= node_count()) return std::nullopt;
  for (const Incidence& inc : adjacency_[u]) {
    if (inc.node == v) return inc.edge;
  }
  return std::nullopt;
}

double RoadGraph::total_length() const {
  double sum = 0.0;
  for (const RoadEdge& e : edges_) sum += e.length;
  return sum;
}

bool RoadGraph::is_connected() const {
  if (nodes_.empty()) return true;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    for (const Incidence& inc : adjacency_[n]) {
      if (!seen[inc.node]) {
        seen[inc.node] = 1;
        ++reached;
        stack.push_back(inc.node);
      }
    }
  }
  return reached == nodes_.size();
}

double RoadGraph::min_cable_cost() const {
  double best = std::numeric_limits<double>::infinity();
  for (const RoadEdge& e : edges_) best = std::min(best, e.cable_cost);
  return edges_.empty() ? 0.0 : best;
}

EdgeCosts RoadGraph::nominal_costs() const {
  if (edges_.empty()) return EdgeCosts{};
  bool uniform = true;
  for (const RoadEdge& e : edges_) {
    if (e.trench_cost != edges_[0].trench_cost ||
        e.cable_cost != edges_[0].cable_cost) {
      uniform = false;
      break;
    }
  }
  EdgeCosts c;
  c.max_cables = edges_[0].max_cables;
  if (uniform) {
    c.trench_per_km = edges_[0].trench_cost;
    c.cable_per_km = edges_[0].cable_cost;
    return c;
  }
  double len = 0.0, tr = 0.0, ca = 0.0;
  for (const RoadEdge& e : edges_) {
    len += e.length;
    tr += e.trench_cost * e.length;
    ca += e.cable_cost * e.length;
  }
  c.trench_per_km = tr / len;
  c.cable_per_km = ca / len;
  return c;
}

}  // namespace cablerouting
