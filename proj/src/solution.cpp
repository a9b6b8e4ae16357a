#include "cablerouting/solution.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

namespace cablerouting {

bool Feeder::fully_routed() const {
  for (const auto& r : routes) {
    if (!r) return false;
  }
  return true;
}

int Solution::link_count() const {
  int n = 0;
  for (const Feeder& f : feeders) n += f.link_count();
  return n;
}

std::vector<StationLink> links_of(const Connectivity& c) {
  std::vector<StationLink> links;
  for (int f = 0; f < static_cast<int>(c.feeders.size()); ++f) {
    const auto& s = c.feeders[f];
    for (std::size_t i = 0; i + 1 < s.size(); ++i) links.push_back({s[i], s[i + 1], f});
  }
  return links;
}

Connectivity connectivity_of(const Solution& s) {
  Connectivity c;
  for (const Feeder& f : s.feeders) c.feeders.push_back(f.stations);
  return c;
}

double feeder_load(const std::vector<int>& stations, const Instance& inst) {
  double load = 0.0;
  for (std::size_t i = 1; i + 1 < stations.size(); ++i) {
    load += inst.substations[stations[i]].demand;
  }
  return load;
}

UsageMap usage_map(const Solution& s, const RoadGraph& g) {
  UsageMap usage(g.edge_count());
  for (std::size_t f = 0; f < s.feeders.size(); ++f) {
    const Feeder& feeder = s.feeders[f];
    for (std::size_t i = 0; i < feeder.routes.size(); ++i) {
      if (!feeder.routes[i]) {
        throw StructuralError("feeder " + std::to_string(f) + " link " + std::to_string(i) +
                              " has no route");
      }
      for (int e : feeder.routes[i]->edges) ++usage[e];
    }
  }
  return usage;
}

CostBreakdown evaluate_usage(const UsageMap& usage, const RoadGraph& g) {
  CostBreakdown c;
  for (const RoadEdge& e : g.edges()) {
    const int k = usage.at(e.id);
    if (k == 0) continue;
    c.trench_cost += e.trench_cost * e.length;
    c.cable_cost += e.cable_cost * e.length * k;
    c.total_cable_length += e.length * k;
  }
  c.total = c.trench_cost + c.cable_cost;
  return c;
}

CostBreakdown evaluate_f2(const Solution& s, const RoadGraph& g) {
  return evaluate_usage(usage_map(s, g), g);
}

double evaluate_f1(const Connectivity& c, const DistanceMatrix& d) {
  double sum = 0.0;
  for (const StationLink& l : links_of(c)) sum += d(l.from, l.to);
  return sum;
}

std::vector<Violation> check_feasible(const Solution& s, const Instance& inst) {
  std::vector<Violation> out;
  const RoadGraph& g = inst.graph;
  const int n_stations = static_cast<int>(inst.substations.size());
  std::vector<int> seen(n_stations, 0);
  UsageMap usage(g.edge_count());

  for (int f = 0; f < static_cast<int>(s.feeders.size()); ++f) {
    const Feeder& feeder = s.feeders[f];
    const auto& st = feeder.stations;
    if (st.size() < 3) {
      out.push_back({"topology", f, -1, 1.0, "feeder serves no MV substation"});
    }
    bool ids_ok = true;
    for (int x : st) {
      if (x < 0 || x >= n_stations) ids_ok = false;
    }
    if (!ids_ok || st.empty()) {
      out.push_back({"topology", f, -1, 1.0, "station index out of range"});
      continue;
    }
    if (!inst.is_hv(st.front()) || !inst.is_hv(st.back())) {
      out.push_back({"topology", f, -1, 1.0, "feeder must start and end at HV substations"});
    }
    for (std::size_t i = 1; i + 1 < st.size(); ++i) {
      if (inst.is_hv(st[i])) {
        out.push_back({"topology", f, -1, 1.0,
                       "interior station " + std::to_string(st[i]) + " is not MV"});
      } else {
        ++seen[st[i]];
      }
    }
    const double load = feeder_load(st, inst);
    if (load > inst.feeder_capacity + 1e-9) {
      out.push_back({"capacity", f, -1, load - inst.feeder_capacity,
                     "load " + std::to_string(load) + " exceeds Q"});
    }

    if (feeder.routes.size() != st.size() - 1) {
      out.push_back({"route", f, -1, 1.0, "route count does not match link count"});
      continue;
    }
    for (std::size_t i = 0; i < feeder.routes.size(); ++i) {
      const auto& r = feeder.routes[i];
      const std::string where = "link " + std::to_string(i);
      if (!r) {
        out.push_back({"route", f, -1, 1.0, where + " has no route"});
        continue;
      }
      const int from = inst.node_of(st[i]);
      const int to = inst.node_of(st[i + 1]);
      if (r->nodes.empty() || r->nodes.front() != from || r->nodes.back() != to) {
        out.push_back({"route", f, -1, 1.0, where + " endpoints do not match its stations"});
        continue;
      }
      if (r->edges.size() + 1 != r->nodes.size()) {
        out.push_back({"route", f, -1, 1.0, where + " node/edge counts disagree"});
        continue;
      }
      std::unordered_set<int> visited;
      bool ok = true;
      for (std::size_t k = 0; k < r->edges.size(); ++k) {
        const int e = r->edges[k];
        if (e < 0 || e >= g.edge_count()) {
          ok = false;
          break;
        }
        const RoadEdge& edge = g.edge(e);
        const int a = r->nodes[k];
        const int b = r->nodes[k + 1];
        if (!((edge.u == a && edge.v == b) || (edge.u == b && edge.v == a))) ok = false;
      }
      for (int n : r->nodes) {
        if (!visited.insert(n).second) ok = false;
      }
      if (!ok) {
        out.push_back({"route", f, -1, 1.0, where + " is not a simple adjacent path"});
        continue;
      }
      for (int e : r->edges) ++usage[e];
    }
  }

  for (int st = 0; st < n_stations; ++st) {
    if (inst.is_hv(st)) continue;
    if (seen[st] != 1) {
      out.push_back({"assignment", -1, -1, static_cast<double>(std::abs(seen[st] - 1)),
                     "MV station " + std::to_string(st) + " served " +
                         std::to_string(seen[st]) + " times"});
    }
  }
  for (const RoadEdge& e : g.edges()) {
    if (usage.at(e.id) > e.max_cables) {
      out.push_back({"edge_capacity", -1, e.id,
                     static_cast<double>(usage.at(e.id) - e.max_cables),
                     "edge carries more cables than allowed"});
    }
  }
  return out;
}

std::string describe(const Violation& v) {
  std::ostringstream out;
  out << v.constraint;
  if (v.feeder >= 0) out << " feeder=" << v.feeder;
  if (v.edge >= 0) out << " edge=" << v.edge;
  out << " magnitude=" << v.magnitude << ": " << v.detail;
  return out.str();
}

}  // namespace cablerouting
