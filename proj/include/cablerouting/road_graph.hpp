#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cablerouting {

enum class NodeKind { kJunction, kHvSubstation, kMvSubstation };

const char* to_string(NodeKind kind);
NodeKind node_kind_from_string(const std::string& text);

struct RoadNode {
  int id = 0;
  double x = 0.0;  // km
  double y = 0.0;  // km
  NodeKind kind = NodeKind::kJunction;

  bool operator==(const RoadNode&) const = default;
};

// Unit costs in million CNY per km; max_cables caps parallel cables per edge.
struct EdgeCosts {
  double trench_per_km = 1.5;
  double cable_per_km = 0.5;
  int max_cables = 6;

  bool operator==(const EdgeCosts&) const = default;
};

struct RoadEdge {
  int id = 0;
  int u = 0;
  int v = 0;
  double length = 0.0;  // km
  double trench_cost = 0.0;
  double cable_cost = 0.0;
  int max_cables = 1;

  int other(int node) const { return node == u ? v : u; }
  bool operator==(const RoadEdge&) const = default;
};

struct Incidence {
  int edge = 0;
  int node = 0;  // the far endpoint

  bool operator==(const Incidence&) const = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Undirected street graph. Node and edge ids are dense and equal to their
// position in nodes()/edges(); at most one edge joins any node pair.
class RoadGraph {
 public:
  int add_node(double x, double y, NodeKind kind = NodeKind::kJunction);
  int add_edge(int u, int v, double length, const EdgeCosts& costs);

  // Inserts a node at (x, y) on edge `edge_id`. The edge keeps its id and now
  // ends at the new node; a new edge covers the remainder. Lengths are taken
  // from coordinates, so an axis-aligned split preserves total length.
  int split_edge(int edge_id, double x, double y, NodeKind kind);

  void set_kind(int node, NodeKind kind) { nodes_.at(node).kind = kind; }

  const std::vector<RoadNode>& nodes() const { return nodes_; }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  const RoadNode& node(int id) const { return nodes_[id]; }
  const RoadEdge& edge(int id) const { return edges_[id]; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  std::span<const Incidence> neighbors(int node) const {
    return adjacency_[node];
  }
  std::optional<int> find_edge(int u, int v) const;

  double total_length() const;
  bool is_connected() const;
  // Smallest per-km cable cost over all edges; scales the A* heuristic.
  double min_cable_cost() const;
  // Length-weighted mean unit costs; exact for uniform-cost graphs.
  EdgeCosts nominal_costs() const;

  bool operator==(const RoadGraph&) const = default;

 private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadEdge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

}  // namespace cablerouting
