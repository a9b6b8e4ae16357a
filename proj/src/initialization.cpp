#include "cablerouting/initialization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "depot_limits.hpp"

namespace cablerouting {

InitBudget InitBudget::parse(const std::string& text) {
  InitBudget b;
  std::string body = text;
  bool seconds = false;
  if (body.size() > 2 && body.substr(body.size() - 2) == "it") {
    body.resize(body.size() - 2);
  } else if (!body.empty() && body.back() == 's') {
    body.pop_back();
    seconds = true;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(body, &used);
    if (used != body.size() || !(v > 0.0)) throw std::invalid_argument("budget");
    if (seconds) {
      b.seconds = v;
      b.iterations = 0;
    } else {
      if (v != std::floor(v)) throw std::invalid_argument("budget");
      b.iterations = static_cast<long>(v);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid init budget '" + text +
                                "' (use e.g. 200s or 2000it)");
  }
  return b;
}

std::string InitBudget::to_string() const {
  std::ostringstream out;
  if (wall_clock()) {
    out << seconds << "s";
  } else {
    out << iterations << "it";
  }
  return out.str();
}

DistanceMatrix station_distances(const Instance& inst) {
  const std::vector<int> nodes = inst.station_nodes();
  return all_pairs_distance(inst.graph, nodes);
}

std::vector<int> ring_limits(const Instance& inst) {
  std::vector<int> limit(inst.substations.size(), 0);
  for (int h : inst.hv_stations()) {
    int slots = 0;
    for (const Incidence& inc : inst.graph.neighbors(inst.node_of(h))) {
      slots += inst.graph.edge(inc.edge).max_cables;
    }
    limit[h] = slots / 2;
  }
  return limit;
}

Connectivity mcws_baseline(const Instance& inst, const DistanceMatrix& d) {
  const std::vector<int> hvs = inst.hv_stations();
  const std::vector<int> mvs = inst.mv_stations();
  for (int c : mvs) {
    if (inst.substations[c].demand > inst.feeder_capacity) {
      throw InfeasibleError("MV station " + std::to_string(c) + " exceeds feeder capacity");
    }
  }
  if (hvs.empty()) throw InfeasibleError("no HV substation");

  // Sweep order of the HVs: polar angle around their centroid.
  double cx = 0.0, cy = 0.0;
  for (int h : hvs) {
    cx += inst.graph.node(inst.node_of(h)).x;
    cy += inst.graph.node(inst.node_of(h)).y;
  }
  cx /= hvs.size();
  cy /= hvs.size();
  std::map<int, double> angle;
  for (int h : hvs) {
    const RoadNode& n = inst.graph.node(inst.node_of(h));
    double a = std::atan2(n.y - cy, n.x - cx);
    if (a < 0) a += 2.0 * std::numbers::pi;
    angle[h] = a;
  }

  std::map<int, std::vector<int>> cluster;
  for (int m : mvs) {
    int best = hvs.front();
    for (int h : hvs) {
      if (d(m, h) < d(m, best) || (d(m, h) == d(m, best) && angle[h] < angle[best])) best = h;
    }
    cluster[best].push_back(m);
  }

  std::vector<std::vector<int>> rings;
  std::vector<int> depot;
  const double cap = inst.feeder_capacity;
  for (int h : hvs) {
    const std::vector<int>& members = cluster[h];
    if (members.empty()) continue;
    std::map<int, std::vector<int>> routes;  // keyed by route id
    std::map<int, int> route_of;
    std::map<int, double> load;
    for (int m : members) {
      routes[m] = {m};
      route_of[m] = m;
      load[m] = inst.substations[m].demand;
    }
    struct Saving {
      double value;
      int i;
      int j;
    };
    std::vector<Saving> savings;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const int i = members[a];
        const int j = members[b];
        savings.push_back({d(i, h) + d(j, h) - d(i, j), i, j});
      }
    }
    std::stable_sort(savings.begin(), savings.end(),
                     [](const Saving& x, const Saving& y) { return x.value > y.value; });
    for (const Saving& s : savings) {
      if (!(s.value > 0.0)) break;
      const int ri = route_of[s.i];
      const int rj = route_of[s.j];
      if (ri == rj || load[ri] + load[rj] > cap + 1e-9) continue;
      std::vector<int> left = routes[ri];
      std::vector<int> right = routes[rj];
      // i must end `left` and j must start `right`; flip where allowed.
      if (left.back() != s.i) {
        if (left.front() != s.i) continue;
        std::reverse(left.begin(), left.end());
      }
      if (right.front() != s.j) {
        if (right.back() != s.j) continue;
        std::reverse(right.begin(), right.end());
      }
      left.insert(left.end(), right.begin(), right.end());
      for (int m : right) route_of[m] = ri;
      routes[ri] = std::move(left);
      load[ri] += load[rj];
      routes.erase(rj);
    }
    for (auto& [id, seq] : routes) {
      rings.push_back(std::move(seq));
      depot.push_back(h);
    }
  }

  std::vector<const std::vector<int>*> seqs;
  for (const auto& seq : rings) seqs.push_back(&seq);
  if (detail::enforce_ring_limits(seqs, depot, hvs, ring_limits(inst), d) > 0) {
    throw InfeasibleError("HV substations cannot anchor " + std::to_string(rings.size()) +
                          " ring feeders");
  }
  Connectivity out;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    std::vector<int> f{depot[r]};
    f.insert(f.end(), rings[r].begin(), rings[r].end());
    f.push_back(depot[r]);
    out.feeders.push_back(std::move(f));
  }
  return out;
}

Solution realize_routes(const Connectivity& c, const Instance& inst) {
  Solution s;
  UsageMap usage(inst.graph.edge_count());
  for (const auto& stations : c.feeders) {
    Feeder f;
    f.stations = stations;
    f.load = feeder_load(stations, inst);
    for (std::size_t i = 0; i + 1 < stations.size(); ++i) {
      try {
        f.routes.push_back(shortest_path_geometric(inst.graph, inst.node_of(stations[i]),
                                                   inst.node_of(stations[i + 1]), usage));
      } catch (const SaturationError& e) {
        throw InfeasibleError(std::string("cannot realize link: ") + e.what());
      }
      for (int e : f.routes.back()->edges) ++usage[e];
    }
    s.feeders.push_back(std::move(f));
  }
  return s;
}

double relation_only_cost(const Connectivity& c, const DistanceMatrix& d, const EdgeCosts& unit) {
  double sum = 0.0;
  for (const StationLink& l : links_of(c)) {
    sum += d(l.from, l.to) * (unit.trench_per_km + unit.cable_per_km);
  }
  return sum;
}

}  // namespace cablerouting
