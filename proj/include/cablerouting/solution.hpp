#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cablerouting/instance.hpp"
#include "cablerouting/routing.hpp"

namespace cablerouting {

// Station-level topology of one feeder: [hv, mv..., hv]. The two ends may be
// the same HV substation (ring) or different ones (interconnected).
struct Feeder {
  std::vector<int> stations;                 // station indices
  std::vector<std::optional<RoutedPath>> routes;  // one per consecutive pair
  double load = 0.0;                         // MVA

  int link_count() const { return static_cast<int>(stations.size()) - 1; }
  bool is_ring() const { return stations.front() == stations.back(); }
  bool fully_routed() const;

  bool operator==(const Feeder&) const = default;
};

struct Solution {
  std::vector<Feeder> feeders;

  int link_count() const;
  bool operator==(const Solution&) const = default;
};

// Stage-I view: station sequences only.
struct Connectivity {
  std::vector<std::vector<int>> feeders;

  bool operator==(const Connectivity&) const = default;
};

struct StationLink {
  int from = 0;
  int to = 0;
  int feeder = 0;
};

std::vector<StationLink> links_of(const Connectivity& connectivity);
Connectivity connectivity_of(const Solution& solution);
double feeder_load(const std::vector<int>& stations, const Instance& instance);

struct CostBreakdown {
  double trench_cost = 0.0;
  double cable_cost = 0.0;
  double total = 0.0;               // F2
  double total_cable_length = 0.0;  // km, F1 proxy
};

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cable counts induced by the routes. Throws StructuralError if any link is
// missing its route.
UsageMap usage_map(const Solution& solution, const RoadGraph& graph);

CostBreakdown evaluate_usage(const UsageMap& usage, const RoadGraph& graph);
CostBreakdown evaluate_f2(const Solution& solution, const RoadGraph& graph);

double evaluate_f1(const Connectivity& connectivity, const DistanceMatrix& d);

struct Violation {
  std::string constraint;  // "topology", "capacity", "assignment", "route", "edge_capacity"
  int feeder = -1;
  int edge = -1;
  double magnitude = 0.0;
  std::string detail;
};

// All violated constraints; empty means feasible. Loads are recomputed from
// the instance demands rather than trusted.
std::vector<Violation> check_feasible(const Solution& solution, const Instance& instance);

std::string describe(const Violation& v);

// Structured text with {instance_name, feeders:[{stations, routes}],
// cost_breakdown}; stations are written as road node ids.
inline constexpr const char* kSolutionSchema = "cablerouting.solution/1";
std::string serialize_solution(const Solution& solution, const Instance& instance);
Solution deserialize_solution(const std::string& text, const Instance& instance);

}  // namespace cablerouting
