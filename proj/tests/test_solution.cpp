#include <doctest.h>

#include "cablerouting/initialization.hpp"
#include "cablerouting/solution.hpp"
#include "toys.hpp"

using namespace cablerouting;
using toys::path;

namespace {

// 3x3-block lattice (node id = 4 y + x). HV at (0,0); MVs at (3,0) and (3,1).
struct Corridor {
  Instance inst = toys::lattice_instance(3, {3, 7}, {0}, 3.0);
  int a = 0;   // station index of the MV at node 3
  int b = 1;   // MV at node 7
  int h = 2;   // HV at node 0

  Solution two_feeders() const {
    const RoadGraph& g = inst.graph;
    Solution s;
    s.feeders.push_back(toys::feeder(inst, {h, a, h},
                                     {path(g, {0, 1, 2, 3}), path(g, {3, 7, 6, 5, 4, 0})}));
    s.feeders.push_back(toys::feeder(
        inst, {h, b, h}, {path(g, {0, 1, 2, 3, 7}), path(g, {7, 11, 10, 9, 8, 4, 0})}));
    return s;
  }
};

}  // namespace

TEST_CASE("usage counts every route over each edge") {
  const Corridor c;
  const RoadGraph& g = c.inst.graph;
  const UsageMap u = usage_map(c.two_feeders(), g);
  CHECK(u.at(*g.find_edge(0, 1)) == 2);
  CHECK(u.at(*g.find_edge(1, 2)) == 2);
  CHECK(u.at(*g.find_edge(2, 3)) == 2);
  CHECK(u.at(*g.find_edge(3, 7)) == 2);
  CHECK(u.at(*g.find_edge(0, 4)) == 2);
  CHECK(u.at(*g.find_edge(6, 7)) == 1);
  CHECK(u.at(*g.find_edge(12, 13)) == 0);
  CHECK(u.max_count() == 2);
}

TEST_CASE("cost of shared and separate cables") {
  const Corridor c;
  const RoadGraph& g = c.inst.graph;
  Solution one;
  one.feeders.push_back(toys::feeder(c.inst, {c.h, c.a, c.h}, {path(g, {0, 1}), path(g, {1, 0})}));
  // Two cables in one trench: 1.5 + 2 * 0.5.
  CHECK(evaluate_f2(one, g).total == 2.5);
  CHECK(evaluate_f2(one, g).trench_cost == 1.5);
  CHECK(evaluate_f2(one, g).cable_cost == 1.0);
  CHECK(evaluate_f2(one, g).total_cable_length == 2.0);

  UsageMap single(g.edge_count());
  single[0] = 1;
  CHECK(evaluate_usage(single, g).total == 2.0);
  UsageMap apart(g.edge_count());
  apart[0] = 1;
  apart[5] = 1;
  CHECK(evaluate_usage(apart, g).total == 4.0);

  CHECK(evaluate_f2(Solution{}, g).total == 0.0);
}

TEST_CASE("cost breakdown of the corridor toy") {
  const Corridor c;
  const CostBreakdown cost = evaluate_f2(c.two_feeders(), c.inst.graph);
  // Distinct edges: corridor 0-1,1-2,2-3 (2 cables), 3-7 (2), 7-6,6-5,5-4 (1), 4-0 (2),
  // 7-11,11-10,10-9,9-8,8-4 (1).
  const double trench = 13 * 1.5;
  const double cable = (3 * 2 + 2 + 3 + 2 + 5) * 0.5;
  CHECK(cost.trench_cost == trench);
  CHECK(cost.cable_cost == cable);
  CHECK(cost.total == trench + cable);
  CHECK(cost.total_cable_length == 18.0);
}

TEST_CASE("cost is additive over edge-disjoint parts") {
  const Corridor c;
  const RoadGraph& g = c.inst.graph;
  Solution a;
  a.feeders.push_back(
      toys::feeder(c.inst, {c.h, c.a, c.h}, {path(g, {0, 1, 2, 3}), path(g, {3, 2, 1, 0})}));
  Solution b;
  b.feeders.push_back(toys::feeder(
      c.inst, {c.h, c.b, c.h}, {path(g, {0, 4, 8, 9, 10, 11, 7}), path(g, {7, 6, 5, 4, 0})}));
  Solution both = a;
  both.feeders.push_back(b.feeders[0]);
  CHECK(evaluate_f2(both, g).total == evaluate_f2(a, g).total + evaluate_f2(b, g).total);
}

TEST_CASE("cost identity: cable per km plus trench per distinct edge") {
  const Instance inst = builtin_case(1);
  const DistanceMatrix d = station_distances(inst);
  const Solution s = realize_routes(mcws_baseline(inst, d), inst);
  const UsageMap u = usage_map(s, inst.graph);
  double distinct = 0.0;
  for (const RoadEdge& e : inst.graph.edges()) distinct += u.at(e.id) > 0 ? e.length : 0.0;
  const CostBreakdown cost = evaluate_f2(s, inst.graph);
  CHECK(cost.total == doctest::Approx(0.5 * cost.total_cable_length + 1.5 * distinct).epsilon(1e-12));
  CHECK(u.max_count() <= 6);
}

TEST_CASE("missing routes are structural errors") {
  const Corridor c;
  Solution s = c.two_feeders();
  s.feeders[0].routes[1].reset();
  CHECK_THROWS_AS(usage_map(s, c.inst.graph), StructuralError);
  const auto v = check_feasible(s, c.inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "route");
}

TEST_CASE("link-length objective") {
  DistanceMatrix d(3);
  d(0, 1) = d(1, 0) = 4.0;
  d(1, 2) = d(2, 1) = 2.5;
  d(0, 2) = d(2, 0) = 3.0;
  CHECK(evaluate_f1(Connectivity{{{0, 1}}}, d) == 4.0);
  CHECK(evaluate_f1(Connectivity{{{2, 0, 1, 2}}}, d) == 3.0 + 4.0 + 2.5);
  CHECK(evaluate_f1(Connectivity{}, d) == 0.0);
}

TEST_CASE("feasibility of a valid toy") {
  const Corridor c;
  CHECK(check_feasible(c.two_feeders(), c.inst).empty());
}

TEST_CASE("capacity violation carries its magnitude") {
  Instance inst = toys::lattice_instance(3, {3, 7, 11}, {0}, 0.0);
  inst.substations[0].demand = 4.0;
  inst.substations[1].demand = 3.4;
  inst.substations[2].demand = 3.0;
  const RoadGraph& g = inst.graph;
  Solution s;
  s.feeders.push_back(toys::feeder(inst, {3, 0, 1, 2, 3},
                                   {path(g, {0, 1, 2, 3}), path(g, {3, 7}), path(g, {7, 11}),
                                    path(g, {11, 10, 9, 8, 4, 0})}));
  const auto v = check_feasible(s, inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "capacity");
  CHECK(v[0].feeder == 0);
  CHECK(v[0].magnitude == doctest::Approx(0.4));
  CHECK(describe(v[0]).find("capacity") != std::string::npos);
}

TEST_CASE("an MV served twice is one assignment violation") {
  const Corridor c;
  const RoadGraph& g = c.inst.graph;
  Solution s = c.two_feeders();
  s.feeders.push_back(toys::feeder(c.inst, {c.h, c.a, c.h}, {path(g, {0, 1, 2, 3}), path(g, {3, 2, 1, 0})}));
  const auto v = check_feasible(s, c.inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "assignment");
  CHECK(v[0].magnitude == 1.0);
}

TEST_CASE("unserved MV and malformed feeders") {
  const Corridor c;
  const RoadGraph& g = c.inst.graph;
  Solution s = c.two_feeders();
  s.feeders.pop_back();
  auto v = check_feasible(s, c.inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "assignment");

  Solution t = c.two_feeders();
  t.feeders[0].stations = {c.a, c.h, c.a};
  t.feeders[0].routes = {path(g, {3, 2, 1, 0}), path(g, {0, 1, 2, 3})};
  v = check_feasible(t, c.inst);
  bool topology = false;
  for (const auto& x : v) topology = topology || x.constraint == "topology";
  CHECK(topology);
}

TEST_CASE("route consistency violations") {
  const Corridor c;
  const RoadGraph& g = c.inst.graph;
  Solution s = c.two_feeders();
  s.feeders[0].routes[0] = path(g, {0, 1, 2});  // stops short of the MV
  auto v = check_feasible(s, c.inst);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].constraint == "route");

  Solution t = c.two_feeders();
  t.feeders[0].routes[0]->edges[1] = t.feeders[0].routes[0]->edges[0];  // not adjacent
  v = check_feasible(t, c.inst);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].constraint == "route");
}

TEST_CASE("cable cap violation names the edge") {
  Instance inst = toys::lattice_instance(3, {1, 2, 3}, {0}, 1.0);
  const RoadGraph& g = inst.graph;
  // Four cables cross edge 0-1; with its cap lowered to 3 that is one too many.
  RoadGraph capped;
  for (const RoadNode& n : g.nodes()) capped.add_node(n.x, n.y, n.kind);
  for (const RoadEdge& e : g.edges()) {
    capped.add_edge(e.u, e.v, e.length, EdgeCosts{1.5, 0.5, e.u == 0 && e.v == 1 ? 3 : 6});
  }
  inst.graph = capped;
  Solution s;
  s.feeders.push_back(toys::feeder(inst, {3, 0, 3}, {path(capped, {0, 1}), path(capped, {1, 0})}));
  s.feeders.push_back(toys::feeder(inst, {3, 1, 3}, {path(capped, {0, 1, 2}), path(capped, {2, 6, 5, 4, 0})}));
  s.feeders.push_back(toys::feeder(inst, {3, 2, 3}, {path(capped, {0, 1, 2, 3}), path(capped, {3, 7, 6, 5, 4, 0})}));
  const auto v = check_feasible(s, inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "edge_capacity");
  CHECK(v[0].edge == *capped.find_edge(0, 1));
  CHECK(v[0].magnitude == 1.0);
}

TEST_CASE("solution files round-trip") {
  const Corridor c;
  const Solution s = c.two_feeders();
  const std::string text = serialize_solution(s, c.inst);
  CHECK(text.find(kSolutionSchema) != std::string::npos);
  CHECK(text.find("cost_breakdown") != std::string::npos);
  const Solution back = deserialize_solution(text, c.inst);
  CHECK(back == s);
  CHECK(serialize_solution(back, c.inst) == text);
}
