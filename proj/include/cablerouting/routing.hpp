#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cablerouting/road_graph.hpp"

namespace cablerouting {

// Parallel cable count k_e per edge, indexed by edge id.
class UsageMap {
 public:
  UsageMap() = default;
  explicit UsageMap(int edge_count) : counts_(edge_count, 0) {}

  int at(int edge) const { return counts_[edge]; }
  int& operator[](int edge) { return counts_[edge]; }
  int size() const { return static_cast<int>(counts_.size()); }
  std::span<const int> counts() const { return counts_; }
  int max_count() const;

  bool operator==(const UsageMap&) const = default;

 private:
  std::vector<int> counts_;
};

struct RoutedPath {
  std::vector<int> nodes;
  std::vector<int> edges;
  double length = 0.0;                  // km
  std::optional<double> marginal_cost;  // million CNY, set by the cost planners

  int source() const { return nodes.front(); }
  int target() const { return nodes.back(); }
  RoutedPath reversed() const;

  bool operator==(const RoutedPath&) const = default;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the marginal-cost planners when every corridor between the
// endpoints is full. `frontier_cut` lists the saturated edges that separate
// the explored region from the rest of the graph.
class SaturationError : public NoPathError {
 public:
  SaturationError(const std::string& what, std::vector<int> cut)
      : NoPathError(what), frontier_cut(std::move(cut)) {}
  std::vector<int> frontier_cut;
};

// Symmetric matrix of shortest-path lengths between terminals.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * n_ + j]; }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

// Shortest path by length. Among equal-length paths the lexicographically
// smallest node-id sequence is returned.
RoutedPath shortest_path_geometric(const RoadGraph& graph, int a, int b);
// Same walk restricted to edges with usage below max_cables. Throws
// SaturationError when no such corridor exists.
RoutedPath shortest_path_geometric(const RoadGraph& graph, int a, int b, const UsageMap& usage);

DistanceMatrix all_pairs_distance(const RoadGraph& graph, std::span<const int> terminals);

// Cost of laying one more cable on `edge` when it already carries `count`:
// cable cost always, trench cost only on an undug edge.
inline double marginal_edge_cost(const RoadEdge& edge, int count) {
  const double cable = edge.cable_cost * edge.length;
  return count == 0 ? cable + edge.trench_cost * edge.length : cable;
}

// Minimum marginal-cost path, treating edges at their cable cap as removed.
// Heuristic: Manhattan distance to b times the smallest per-km cable cost,
// which never overestimates. Open-list ties go to the larger g, then to the
// lower node id.
RoutedPath marginal_cost_astar(const RoadGraph& graph, const UsageMap& usage, int a, int b);

// Same cost contract as marginal_cost_astar without a heuristic; serves as
// its reference.
RoutedPath dijkstra_marginal(const RoadGraph& graph, const UsageMap& usage, int a, int b);

}  // namespace cablerouting
