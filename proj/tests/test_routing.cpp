#include <doctest.h>

#include <set>

#include "cablerouting/instance.hpp"
#include "cablerouting/rng.hpp"
#include "cablerouting/routing.hpp"
#include "oracles.hpp"

using namespace cablerouting;

namespace {

// Endpoints, adjacency, simplicity and the stored length.
void check_well_formed(const RoadGraph& g, const RoutedPath& p, int a, int b) {
  REQUIRE(!p.nodes.empty());
  CHECK(p.source() == a);
  CHECK(p.target() == b);
  REQUIRE(p.edges.size() + 1 == p.nodes.size());
  double length = 0.0;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const RoadEdge& e = g.edge(p.edges[i]);
    const bool joins = (e.u == p.nodes[i] && e.v == p.nodes[i + 1]) ||
                       (e.v == p.nodes[i] && e.u == p.nodes[i + 1]);
    CHECK(joins);
    length += e.length;
  }
  CHECK(std::set<int>(p.nodes.begin(), p.nodes.end()).size() == p.nodes.size());
  CHECK(p.length == doctest::Approx(length).epsilon(1e-12));
}

double independent_marginal(const RoadGraph& g, const UsageMap& usage, const RoutedPath& p) {
  double c = 0.0;
  for (int e : p.edges) {
    const RoadEdge& edge = g.edge(e);
    c += edge.length * edge.cable_cost + (usage.at(e) == 0 ? edge.length * edge.trench_cost : 0.0);
  }
  return c;
}

// A 6x6 lattice with random deletions that keep it connected.
RoadGraph pruned_lattice(std::uint64_t seed, int deletions) {
  const RoadGraph full = generate_lattice(6, 1.0);
  Rng rng(seed);
  std::vector<bool> removed(full.edge_count(), false);
  int done = 0;
  for (int tries = 0; done < deletions && tries < 10000; ++tries) {
    const int e = static_cast<int>(rng.below(full.edge_count()));
    if (removed[e]) continue;
    removed[e] = true;
    RoadGraph g;
    for (const RoadNode& n : full.nodes()) g.add_node(n.x, n.y);
    for (const RoadEdge& x : full.edges()) {
      if (!removed[x.id]) g.add_edge(x.u, x.v, x.length, EdgeCosts{});
    }
    if (g.is_connected()) {
      ++done;
    } else {
      removed[e] = false;
    }
  }
  RoadGraph g;
  for (const RoadNode& n : full.nodes()) g.add_node(n.x, n.y);
  for (const RoadEdge& x : full.edges()) {
    if (!removed[x.id]) g.add_edge(x.u, x.v, x.length, EdgeCosts{});
  }
  return g;
}

UsageMap random_usage(const RoadGraph& g, Rng& rng, double density) {
  UsageMap u(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    if (rng.uniform01() < density) u[e] = 1 + static_cast<int>(rng.below(g.edge(e).max_cables));
  }
  return u;
}

}  // namespace

TEST_CASE("geometric shortest path on a small lattice") {
  const RoadGraph g = generate_lattice(2, 1.0);
  const RoutedPath p = shortest_path_geometric(g, 0, 8);
  check_well_formed(g, p, 0, 8);
  CHECK(p.length == 4.0);
  CHECK_FALSE(p.marginal_cost.has_value());
  // Six equal-length paths; the lexicographically smallest node sequence wins.
  CHECK(p.nodes == std::vector<int>{0, 1, 2, 5, 8});
  CHECK(shortest_path_geometric(g, 8, 0).nodes == std::vector<int>{8, 5, 2, 1, 0});
}

TEST_CASE("path to itself") {
  const RoadGraph g = generate_lattice(2, 1.0);
  const RoutedPath p = shortest_path_geometric(g, 4, 4);
  CHECK(p.nodes == std::vector<int>{4});
  CHECK(p.edges.empty());
  CHECK(p.length == 0.0);
}

TEST_CASE("geometric lengths match an independent Dijkstra on pruned lattices") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RoadGraph g = pruned_lattice(seed, 50);
    REQUIRE(g.is_connected());
    Rng rng(seed * 17);
    for (int q = 0; q < 20; ++q) {
      const int a = static_cast<int>(rng.below(g.node_count()));
      const int b = static_cast<int>(rng.below(g.node_count()));
      const RoutedPath p = shortest_path_geometric(g, a, b);
      check_well_formed(g, p, a, b);
      CHECK(p.length == oracle::geometric_distance(g, a, b));
    }
  }
}

TEST_CASE("capacity-aware geometric path avoids full edges") {
  const RoadGraph g = generate_lattice(3, 1.0);
  Rng rng(5);
  for (int q = 0; q < 40; ++q) {
    UsageMap usage(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
      if (rng.bernoulli(0.3)) usage[e] = g.edge(e).max_cables;
    }
    const int a = static_cast<int>(rng.below(g.node_count()));
    const int b = static_cast<int>(rng.below(g.node_count()));
    const std::vector<double> dist = oracle::distances(g, a, [&](const RoadEdge& e) {
      return usage.at(e.id) >= e.max_cables ? -1.0 : e.length;
    });
    if (dist[b] == oracle::kInf) {
      CHECK_THROWS_AS(shortest_path_geometric(g, a, b, usage), SaturationError);
      continue;
    }
    const RoutedPath p = shortest_path_geometric(g, a, b, usage);
    check_well_formed(g, p, a, b);
    CHECK(p.length == dist[b]);
    for (int e : p.edges) CHECK(usage.at(e) < g.edge(e).max_cables);
  }
  // Empty usage gives the unrestricted walk.
  const UsageMap none(g.edge_count());
  CHECK(shortest_path_geometric(g, 0, 15, none) == shortest_path_geometric(g, 0, 15));
}

TEST_CASE("unreachable endpoints raise a no-path error") {
  RoadGraph g;
  g.add_node(0, 0);
  g.add_node(1, 0);
  g.add_node(5, 5);
  g.add_edge(0, 1, 1.0, EdgeCosts{});
  CHECK_THROWS_AS(shortest_path_geometric(g, 0, 2), NoPathError);
  CHECK_THROWS_AS(dijkstra_marginal(g, UsageMap(1), 0, 2), NoPathError);
  CHECK_THROWS_AS(marginal_cost_astar(g, UsageMap(1), 0, 2), NoPathError);
}

TEST_CASE("all-pairs distances") {
  const Instance inst = builtin_case(1);
  const std::vector<int> terminals = inst.station_nodes();
  const DistanceMatrix d = all_pairs_distance(inst.graph, terminals);
  REQUIRE(d.size() == static_cast<int>(terminals.size()));
  for (int i = 0; i < d.size(); ++i) {
    CHECK(d(i, i) == 0.0);
    for (int j = 0; j < d.size(); ++j) {
      CHECK(d(i, j) == d(j, i));
      for (int k = 0; k < d.size(); k += 7) CHECK(d(i, j) <= d(i, k) + d(k, j) + 1e-12);
    }
  }
  Rng rng(3);
  for (int q = 0; q < 20; ++q) {
    const int i = static_cast<int>(rng.below(terminals.size()));
    const int j = static_cast<int>(rng.below(terminals.size()));
    CHECK(d(i, j) == shortest_path_geometric(inst.graph, terminals[i], terminals[j]).length);
    CHECK(d(i, j) == oracle::geometric_distance(inst.graph, terminals[i], terminals[j]));
  }
  const std::vector<int> one{terminals[0]};
  const DistanceMatrix single = all_pairs_distance(inst.graph, one);
  CHECK(single.size() == 1);
  CHECK(single(0, 0) == 0.0);
}

TEST_CASE("marginal cost reuses dug trenches") {
  const RoadGraph g = generate_lattice(4, 1.0);
  const int a = 0;            // (0, 0)
  const int b = 3 * 5;        // (0, 3)
  UsageMap empty(g.edge_count());
  for (auto plan : {marginal_cost_astar, dijkstra_marginal}) {
    const RoutedPath p = plan(g, empty, a, b);
    check_well_formed(g, p, a, b);
    REQUIRE(p.marginal_cost.has_value());
    CHECK(*p.marginal_cost == 6.0);
  }
  UsageMap dug(g.edge_count());
  for (int e : marginal_cost_astar(g, empty, a, b).edges) dug[e] = 1;
  for (auto plan : {marginal_cost_astar, dijkstra_marginal}) {
    const RoutedPath p = plan(g, dug, a, b);
    CHECK(*p.marginal_cost == 1.5);
  }
}

TEST_CASE("empty usage reduces to scaled geometric distance") {
  const Instance inst = builtin_case(0);
  const UsageMap empty(inst.graph.edge_count());
  Rng rng(11);
  for (int q = 0; q < 20; ++q) {
    const int a = static_cast<int>(rng.below(inst.graph.node_count()));
    const int b = static_cast<int>(rng.below(inst.graph.node_count()));
    if (a == b) continue;
    const double geo = shortest_path_geometric(inst.graph, a, b).length;
    CHECK(*dijkstra_marginal(inst.graph, empty, a, b).marginal_cost == 2.0 * geo);
    CHECK(*marginal_cost_astar(inst.graph, empty, a, b).marginal_cost == 2.0 * geo);
  }
}

TEST_CASE("A* equals Dijkstra and the independent oracle under random usage") {
  for (int id : {0, 1}) {
    const Instance inst = builtin_case(id);
    const RoadGraph& g = inst.graph;
    Rng rng(100 + id);
    for (int q = 0; q < 40; ++q) {
      const UsageMap usage = random_usage(g, rng, 0.3);
      const int a = static_cast<int>(rng.below(g.node_count()));
      int b = static_cast<int>(rng.below(g.node_count()));
      if (a == b) b = (b + 1) % g.node_count();
      const double expected = oracle::marginal_cost(g, usage, a, b);
      if (expected == oracle::kInf) {
        CHECK_THROWS_AS(marginal_cost_astar(g, usage, a, b), SaturationError);
        continue;
      }
      const RoutedPath astar = marginal_cost_astar(g, usage, a, b);
      const RoutedPath dijkstra = dijkstra_marginal(g, usage, a, b);
      check_well_formed(g, astar, a, b);
      check_well_formed(g, dijkstra, a, b);
      CHECK(*astar.marginal_cost == *dijkstra.marginal_cost);
      CHECK(*astar.marginal_cost == expected);
      CHECK(independent_marginal(g, usage, astar) == *astar.marginal_cost);
      for (int e : astar.edges) CHECK(usage.at(e) < g.edge(e).max_cables);
    }
  }
}

TEST_CASE("heuristic never exceeds the remaining cost") {
  const Instance inst = builtin_case(1);
  const RoadGraph& g = inst.graph;
  Rng rng(5);
  for (int q = 0; q < 10; ++q) {
    const UsageMap usage = random_usage(g, rng, 0.5);
    const int b = static_cast<int>(rng.below(g.node_count()));
    // Remaining cost from every node to b, via the oracle run from b.
    const std::vector<double> to_b = oracle::distances(g, b, [&](const RoadEdge& e) {
      if (usage.at(e.id) >= e.max_cables) return -1.0;
      return e.length * e.cable_cost + (usage.at(e.id) == 0 ? e.length * e.trench_cost : 0.0);
    });
    const RoadNode& t = g.node(b);
    for (const RoadNode& n : g.nodes()) {
      const double h = (std::abs(n.x - t.x) + std::abs(n.y - t.y)) * g.min_cable_cost();
      CHECK(h <= to_b[n.id] + 1e-12);
    }
  }
}

TEST_CASE("more usage never raises the marginal cost") {
  const Instance inst = builtin_case(1);
  const RoadGraph& g = inst.graph;
  Rng rng(9);
  for (int q = 0; q < 30; ++q) {
    UsageMap base(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
      if (rng.uniform01() < 0.2) base[e] = 1 + static_cast<int>(rng.below(3));
    }
    UsageMap more = base;
    for (int e = 0; e < g.edge_count(); ++e) {
      if (rng.uniform01() < 0.2) more[e] = std::min(more.at(e) + 1, 4);
    }
    const int a = static_cast<int>(rng.below(g.node_count()));
    int b = static_cast<int>(rng.below(g.node_count()));
    if (a == b) b = (b + 1) % g.node_count();
    CHECK(*marginal_cost_astar(g, more, a, b).marginal_cost <=
          *marginal_cost_astar(g, base, a, b).marginal_cost);
  }
}

TEST_CASE("saturated corridors raise a saturation error with the cut") {
  const RoadGraph g = generate_lattice(3, 1.0);
  SUBCASE("everything full") {
    UsageMap full(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) full[e] = g.edge(e).max_cables;
    CHECK_THROWS_AS(marginal_cost_astar(g, full, 0, 15), SaturationError);
    CHECK_THROWS_AS(dijkstra_marginal(g, full, 0, 15), SaturationError);
  }
  SUBCASE("target walled off") {
    UsageMap usage(g.edge_count());
    std::set<int> wall;
    for (const Incidence& inc : g.neighbors(15)) {
      usage[inc.edge] = g.edge(inc.edge).max_cables;
      wall.insert(inc.edge);
    }
    try {
      marginal_cost_astar(g, usage, 0, 15);
      FAIL("expected saturation");
    } catch (const SaturationError& e) {
      CHECK(std::set<int>(e.frontier_cut.begin(), e.frontier_cut.end()) == wall);
    }
  }
}

TEST_CASE("planning is repeatable") {
  const Instance inst = builtin_case(0);
  Rng rng(2);
  const UsageMap usage = random_usage(inst.graph, rng, 0.3);
  const RoutedPath p1 = marginal_cost_astar(inst.graph, usage, 3, 400);
  const RoutedPath p2 = marginal_cost_astar(inst.graph, usage, 3, 400);
  CHECK(p1 == p2);
  CHECK(p1.reversed().reversed() == p1);
}
