#include "cablerouting/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cablerouting/rng.hpp"

namespace cablerouting {

std::vector<int> Instance::hv_stations() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(substations.size()); ++i) {
    if (substations[i].level == Level::kHv) out.push_back(i);
  }
  return out;
}

std::vector<int> Instance::mv_stations() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(substations.size()); ++i) {
    if (substations[i].level == Level::kMv) out.push_back(i);
  }
  return out;
}

std::vector<int> Instance::station_nodes() const {
  std::vector<int> out;
  out.reserve(substations.size());
  for (const Substation& s : substations) out.push_back(s.node_id);
  return out;
}

RoadGraph generate_lattice(int n_grid, double block_km, const EdgeCosts& costs) {
  if (n_grid < 2) throw InstanceError("lattice needs n_grid >= 2");
  if (!(block_km > 0.0)) throw InstanceError("block_km must be positive");
  RoadGraph g;
  const int side = n_grid + 1;
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) g.add_node(i * block_km, j * block_km);
  }
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      const int id = j * side + i;
      if (i + 1 < side) g.add_edge(id, id + 1, block_km, costs);
      if (j + 1 < side) g.add_edge(id, id + side, block_km, costs);
    }
  }
  return g;
}

namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double sq_dist(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

int nearest_centroid(const Point& p, const std::vector<Point>& centroids) {
  int best = 0;
  double best_d = sq_dist(p, centroids[0]);
  for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
    const double d = sq_dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// k-means++ seeding followed by Lloyd iterations (at most 100, stop when no
// centroid moves more than 1e-6). An emptied cluster is re-seeded at the
// point farthest from its own centroid, lowest index on ties.
std::vector<Point> kmeans(const std::vector<Point>& points, int k, Rng& rng) {
  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-6;
  const int n = static_cast<int>(points.size());

  std::vector<Point> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centroids.size()) < k) {
    for (int i = 0; i < n; ++i) {
      d2[i] = sq_dist(points[i], centroids[nearest_centroid(points[i], centroids)]);
    }
    std::size_t pick = weighted_index(d2, rng);
    if (pick >= d2.size()) pick = rng.below(n);
    centroids.push_back(points[pick]);
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (int i = 0; i < n; ++i) assign[i] = nearest_centroid(points[i], centroids);

    std::vector<Point> sums(k);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[assign[i]].x += points[i].x;
      sums[assign[i]].y += points[i].y;
      ++counts[assign[i]];
    }
    std::vector<Point> next(k);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        next[c] = Point{sums[c].x / counts[c], sums[c].y / counts[c]};
        continue;
      }
      int far = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const double d = sq_dist(points[i], centroids[assign[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      next[c] = points[far];
      assign[far] = c;
    }
    double moved = 0.0;
    for (int c = 0; c < k; ++c) {
      moved = std::max(moved, std::sqrt(sq_dist(next[c], centroids[c])));
    }
    centroids = std::move(next);
    if (moved <= kTolerance) break;
  }
  return centroids;
}

bool is_substation(NodeKind kind) { return kind != NodeKind::kJunction; }

// Rounds the position along an edge to a dyadic grid (block / 2^20). On a
// dyadic lattice this keeps every edge length, path length and cost sum exact
// in double precision.
double snap(double value, double quantum) {
  return std::round(value / quantum) * quantum;
}

int place_site(RoadGraph& g, const Point& site, NodeKind kind, double quantum) {
  int best_edge = -1;
  double best_d = std::numeric_limits<double>::infinity();
  Point best_p;
  for (const RoadEdge& e : g.edges()) {
    const RoadNode& a = g.node(e.u);
    const RoadNode& b = g.node(e.v);
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = ((site.x - a.x) * dx + (site.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const Point p{a.x + t * dx, a.y + t * dy};
    const double d = sq_dist(site, p);
    if (d < best_d) {
      best_d = d;
      best_edge = e.id;
      best_p = p;
    }
  }

  const RoadEdge& host = g.edge(best_edge);
  const RoadNode& a = g.node(host.u);
  const RoadNode& b = g.node(host.v);
  Point p{snap(best_p.x, quantum), snap(best_p.y, quantum)};
  p.x = std::clamp(p.x, std::min(a.x, b.x), std::max(a.x, b.x));
  p.y = std::clamp(p.y, std::min(a.y, b.y), std::max(a.y, b.y));

  int node = -1;
  if (p.x == a.x && p.y == a.y) {
    node = a.id;
  } else if (p.x == b.x && p.y == b.y) {
    node = b.id;
  }

  if (node < 0) return g.split_edge(best_edge, p.x, p.y, kind);
  if (!is_substation(g.node(node).kind)) {
    g.set_kind(node, kind);
    return node;
  }

  // The point is already a substation: use the midpoint of its shortest
  // incident edge (lowest edge id on ties) so the new site is a distinct node.
  int via = -1;
  for (const Incidence& inc : g.neighbors(node)) {
    if (via < 0 || g.edge(inc.edge).length < g.edge(via).length ||
        (g.edge(inc.edge).length == g.edge(via).length && inc.edge < via)) {
      via = inc.edge;
    }
  }
  const RoadEdge& e = g.edge(via);
  const double mx = 0.5 * (g.node(e.u).x + g.node(e.v).x);
  const double my = 0.5 * (g.node(e.u).y + g.node(e.v).y);
  return g.split_edge(via, mx, my, kind);
}

}  // namespace

Instance place_substations(RoadGraph graph, int n_mv, int n_hv,
                           std::uint64_t seed) {
  std::vector<Point> junctions;
  double max_coord = 0.0;
  for (const RoadNode& n : graph.nodes()) {
    if (n.kind == NodeKind::kJunction) junctions.push_back(Point{n.x, n.y});
    max_coord = std::max({max_coord, n.x, n.y});
  }
  if (n_hv < 1 || n_mv < 1) throw InstanceError("need at least one HV and one MV");
  if (n_hv > n_mv) throw InstanceError("n_hv must not exceed n_mv");
  if (n_mv > static_cast<int>(junctions.size())) {
    throw InstanceError("n_mv exceeds the number of lattice nodes");
  }
  if (graph.edge_count() == 0) throw InstanceError("graph has no edges");

  const double block = graph.edge(0).length;
  const double quantum = block * 0x1.0p-20;

  Rng rng(seed);
  const std::vector<Point> mv_sites = kmeans(junctions, n_mv, rng);
  const std::vector<Point> hv_sites = kmeans(mv_sites, n_hv, rng);

  Instance inst;
  inst.seed = seed;
  inst.block_km = block;
  inst.grid_n = static_cast<int>(std::lround(max_coord / block));
  inst.feeder_capacity = kDefaultCapacity;

  for (const Point& s : mv_sites) {
    const int node = place_site(graph, s, NodeKind::kMvSubstation, quantum);
    inst.substations.push_back(Substation{node, Level::kMv, 0.0});
  }
  for (const Point& s : hv_sites) {
    const int node = place_site(graph, s, NodeKind::kHvSubstation, quantum);
    inst.substations.push_back(Substation{node, Level::kHv, 0.0});
  }
  for (Substation& s : inst.substations) {
    if (s.level == Level::kMv) s.demand = rng.uniform(kDemandLow, kDemandHigh);
  }
  inst.graph = std::move(graph);

  std::ostringstream name;
  name << "lattice" << inst.grid_n << "-mv" << n_mv << "-hv" << n_hv << "-s" << seed;
  inst.name = name.str();
  return inst;
}

CaseParams builtin_case_params(int id) {
  switch (id) {
    case 0:
      return {0, 20, 20, 4};
    case 1:
      return {1, 20, 30, 5};
    case 2:
      return {2, 30, 50, 6};
    case 3:
      return {3, 30, 80, 7};
    case 4:
      return {4, 30, 100, 8};
    default:
      throw InstanceError("unknown builtin case " + std::to_string(id) +
                          " (expected 0..4)");
  }
}

Instance builtin_case(int id) {
  const CaseParams p = builtin_case_params(id);
  Instance inst = place_substations(generate_lattice(p.grid_n, 1.0), p.n_mv,
                                    p.n_hv, kBuiltinSeed);
  inst.name = "case-" + std::to_string(id);
  return inst;
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> warnings;
  const RoadGraph& g = inst.graph;
  for (int i = 0; i < g.node_count(); ++i) {
    if (g.node(i).id != i) throw InstanceError("node ids are not dense");
  }
  for (int i = 0; i < g.edge_count(); ++i) {
    const RoadEdge& e = g.edge(i);
    if (e.id != i) throw InstanceError("edge ids are not dense");
    if (e.u == e.v) throw InstanceError("edge " + std::to_string(i) + " is a self-loop");
    if (!(e.length > 0.0)) throw InstanceError("edge " + std::to_string(i) + " has non-positive length");
    if (e.trench_cost < 0.0 || e.cable_cost < 0.0) {
      throw InstanceError("edge " + std::to_string(i) + " has a negative cost");
    }
    if (e.max_cables < 1) throw InstanceError("edge " + std::to_string(i) + " has max_cables < 1");
  }
  if (!g.is_connected()) throw InstanceError("road graph is not connected");
  if (!(inst.feeder_capacity > 0.0)) throw InstanceError("feeder capacity must be positive");

  std::vector<int> records(g.node_count(), 0);
  int hv = 0;
  int mv = 0;
  for (std::size_t s = 0; s < inst.substations.size(); ++s) {
    const Substation& sub = inst.substations[s];
    const std::string tag = "substation " + std::to_string(s);
    if (sub.node_id < 0 || sub.node_id >= g.node_count()) {
      throw InstanceError(tag + " references a missing node");
    }
    const NodeKind want =
        sub.level == Level::kHv ? NodeKind::kHvSubstation : NodeKind::kMvSubstation;
    if (g.node(sub.node_id).kind != want) {
      throw InstanceError(tag + " does not match the kind of node " +
                          std::to_string(sub.node_id));
    }
    ++records[sub.node_id];
    if (sub.level == Level::kHv) {
      ++hv;
      if (sub.demand != 0.0) throw InstanceError(tag + ": HV demand must be 0");
    } else {
      ++mv;
      if (!(sub.demand >= 0.0) || !std::isfinite(sub.demand)) {
        throw InstanceError(tag + ": demand must be finite and non-negative");
      }
      if (sub.demand < kDemandLow || sub.demand > kDemandHigh) {
        warnings.push_back(tag + ": demand " + std::to_string(sub.demand) +
                           " outside the benchmark range [2, 5]");
      }
      if (sub.demand > inst.feeder_capacity) {
        warnings.push_back(tag + ": demand exceeds feeder capacity");
      }
    }
  }
  for (int n = 0; n < g.node_count(); ++n) {
    const bool sub_kind = g.node(n).kind != NodeKind::kJunction;
    if (sub_kind && records[n] != 1) {
      throw InstanceError("node " + std::to_string(n) +
                          " must carry exactly one substation record");
    }
    if (!sub_kind && records[n] != 0) {
      throw InstanceError("junction " + std::to_string(n) + " has a substation record");
    }
  }
  if (hv == 0) throw InstanceError("instance has no HV substation");
  if (mv == 0) throw InstanceError("instance has no MV substation");
  return warnings;
}

}  // namespace cablerouting
