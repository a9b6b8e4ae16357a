#include "cablerouting/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace cablerouting {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerance for "lies on a shortest path" in the lexicographic walk; only
// matters for non-dyadic geometry.
constexpr double kOnPathTolerance = 1e-9;

void check_node(const RoadGraph& g, int n) {
  if (n < 0 || n >= g.node_count()) {
    throw std::out_of_range("node " + std::to_string(n) + " not in graph");
  }
}

// Dijkstra over edge lengths from `source`; fills dist for every node.
// Edges with usage at capacity are skipped when `usage` is given.
std::vector<double> length_distances(const RoadGraph& g, int source,
                                     const UsageMap* usage = nullptr) {
  std::vector<double> dist(g.node_count(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[source] = 0.0;
  open.emplace(0.0, source);
  while (!open.empty()) {
    const auto [d, n] = open.top();
    open.pop();
    if (d > dist[n]) continue;
    for (const Incidence& inc : g.neighbors(n)) {
      if (usage && usage->at(inc.edge) >= g.edge(inc.edge).max_cables) continue;
      const double nd = d + g.edge(inc.edge).length;
      if (nd < dist[inc.node]) {
        dist[inc.node] = nd;
        open.emplace(nd, inc.node);
      }
    }
  }
  return dist;
}

RoutedPath build_path(const RoadGraph& g, int a, int b, const std::vector<int>& parent_edge) {
  RoutedPath path;
  int n = b;
  path.nodes.push_back(b);
  while (n != a) {
    const int e = parent_edge[n];
    path.edges.push_back(e);
    n = g.edge(e).other(n);
    path.nodes.push_back(n);
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  std::reverse(path.edges.begin(), path.edges.end());
  for (int e : path.edges) path.length += g.edge(e).length;
  return path;
}

[[noreturn]] void throw_saturated(const RoadGraph& g, const UsageMap& usage,
                                  const std::vector<char>& reached, int a, int b) {
  std::vector<int> cut;
  for (const RoadEdge& e : g.edges()) {
    if (reached[e.u] != reached[e.v] && usage.at(e.id) >= e.max_cables) cut.push_back(e.id);
  }
  throw SaturationError("no unsaturated corridor from node " + std::to_string(a) +
                            " to node " + std::to_string(b),
                        std::move(cut));
}

}  // namespace

int UsageMap::max_count() const {
  int best = 0;
  for (int c : counts_) best = std::max(best, c);
  return best;
}

RoutedPath RoutedPath::reversed() const {
  RoutedPath r = *this;
  std::reverse(r.nodes.begin(), r.nodes.end());
  std::reverse(r.edges.begin(), r.edges.end());
  return r;
}

namespace {

RoutedPath geometric_walk(const RoadGraph& g, int a, int b, const UsageMap* usage) {
  check_node(g, a);
  check_node(g, b);
  RoutedPath path;
  path.nodes.push_back(a);
  if (a == b) return path;

  // Distances to b, then a greedy walk from a that always steps to the
  // smallest-id neighbour still on a shortest path. Every step strictly
  // lowers the remaining distance, so the walk is simple and terminates.
  const std::vector<double> to_b = length_distances(g, b, usage);
  if (to_b[a] == kInf) {
    if (usage) {
      std::vector<char> reached(g.node_count());
      for (int n = 0; n < g.node_count(); ++n) reached[n] = to_b[n] != kInf;
      throw_saturated(g, *usage, reached, a, b);
    }
    throw NoPathError("node " + std::to_string(b) + " unreachable from " + std::to_string(a));
  }
  int n = a;
  while (n != b) {
    int next = -1;
    int via = -1;
    for (const Incidence& inc : g.neighbors(n)) {
      if (usage && usage->at(inc.edge) >= g.edge(inc.edge).max_cables) continue;
      const double len = g.edge(inc.edge).length;
      const double slack = len + to_b[inc.node] - to_b[n];
      if (std::abs(slack) <= kOnPathTolerance * std::max(1.0, to_b[n]) &&
          to_b[inc.node] < to_b[n] && (next < 0 || inc.node < next)) {
        next = inc.node;
        via = inc.edge;
      }
    }
    if (next < 0) throw NoPathError("shortest-path walk stalled");
    path.nodes.push_back(next);
    path.edges.push_back(via);
    path.length += g.edge(via).length;
    n = next;
  }
  return path;
}

}  // namespace

RoutedPath shortest_path_geometric(const RoadGraph& g, int a, int b) {
  return geometric_walk(g, a, b, nullptr);
}

RoutedPath shortest_path_geometric(const RoadGraph& g, int a, int b, const UsageMap& usage) {
  return geometric_walk(g, a, b, &usage);
}

DistanceMatrix all_pairs_distance(const RoadGraph& g, std::span<const int> terminals) {
  const int k = static_cast<int>(terminals.size());
  DistanceMatrix d(k);
  for (int i = 0; i < k; ++i) {
    check_node(g, terminals[i]);
    const std::vector<double> dist = length_distances(g, terminals[i]);
    for (int j = 0; j < k; ++j) {
      if (dist[terminals[j]] == kInf) {
        throw NoPathError("terminals " + std::to_string(terminals[i]) + " and " +
                          std::to_string(terminals[j]) + " are disconnected");
      }
      d(i, j) = dist[terminals[j]];
    }
  }
  // Force exact symmetry; both directions are the same optimum anyway.
  for (int i = 0; i < k; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < k; ++j) {
      const double v = std::min(d(i, j), d(j, i));
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

RoutedPath marginal_cost_astar(const RoadGraph& g, const UsageMap& usage, int a, int b) {
  check_node(g, a);
  check_node(g, b);
  const double h_scale = g.min_cable_cost();
  const RoadNode& goal = g.node(b);
  auto heuristic = [&](int n) {
    const RoadNode& p = g.node(n);
    return (std::abs(p.x - goal.x) + std::abs(p.y - goal.y)) * h_scale;
  };

  const int n_nodes = g.node_count();
  std::vector<double> best_g(n_nodes, kInf);
  std::vector<int> parent_edge(n_nodes, -1);
  std::vector<char> closed(n_nodes, 0);

  // (f, -g, node): smallest f first, then deeper nodes, then lower id.
  using Item = std::tuple<double, double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  best_g[a] = 0.0;
  open.emplace(heuristic(a), -0.0, a);
  while (!open.empty()) {
    const auto [f, neg_g, n] = open.top();
    open.pop();
    if (closed[n]) continue;
    const double gn = -neg_g;
    if (gn > best_g[n]) continue;
    closed[n] = 1;
    if (n == b) {
      RoutedPath path = build_path(g, a, b, parent_edge);
      path.marginal_cost = gn;
      return path;
    }
    for (const Incidence& inc : g.neighbors(n)) {
      const RoadEdge& e = g.edge(inc.edge);
      const int k = usage.at(e.id);
      if (k >= e.max_cables || closed[inc.node]) continue;
      const double ng = gn + marginal_edge_cost(e, k);
      if (ng < best_g[inc.node]) {
        best_g[inc.node] = ng;
        parent_edge[inc.node] = e.id;
        open.emplace(ng + heuristic(inc.node), -ng, inc.node);
      }
    }
  }
  throw_saturated(g, usage, closed, a, b);
}

RoutedPath dijkstra_marginal(const RoadGraph& g, const UsageMap& usage, int a, int b) {
  check_node(g, a);
  check_node(g, b);
  const int n_nodes = g.node_count();
  std::vector<double> dist(n_nodes, kInf);
  std::vector<int> parent_edge(n_nodes, -1);
  std::vector<char> done(n_nodes, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[a] = 0.0;
  open.emplace(0.0, a);
  while (!open.empty()) {
    const auto [d, n] = open.top();
    open.pop();
    if (done[n]) continue;
    done[n] = 1;
    if (n == b) {
      RoutedPath path = build_path(g, a, b, parent_edge);
      path.marginal_cost = d;
      return path;
    }
    for (const Incidence& inc : g.neighbors(n)) {
      const RoadEdge& e = g.edge(inc.edge);
      const int k = usage.at(e.id);
      if (k >= e.max_cables || done[inc.node]) continue;
      const double nd = d + marginal_edge_cost(e, k);
      if (nd < dist[inc.node]) {
        dist[inc.node] = nd;
        parent_edge[inc.node] = e.id;
        open.emplace(nd, inc.node);
      }
    }
  }
  throw_saturated(g, usage, done, a, b);
}

}  // namespace cablerouting
