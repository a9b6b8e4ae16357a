#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cablerouting/instance.hpp"
#include "cablerouting/routing.hpp"
#include "cablerouting/solution.hpp"

namespace cablerouting {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Budget for the connectivity search. Iteration budgets (offspring count)
// are reproducible; wall-clock budgets are not.
struct InitBudget {
  long iterations = 2000;
  double seconds = 0.0;  // > 0 selects wall-clock mode

  bool wall_clock() const { return seconds > 0.0; }
  // "200s" -> 200 seconds; "5000", "5000it" -> 5000 offspring.
  static InitBudget parse(const std::string& text);
  std::string to_string() const;
};

struct HgsConfig {
  int population_size = 25;  // mu
  int generation_size = 40;  // lambda
  double elite_fraction = 0.4;
  int n_closest = 5;          // neighbours averaged in the diversity measure
  int granular_neighbors = 20;
  InitBudget budget;
  std::uint64_t seed = 0;
};

// Distances between all substations, indexed by station index.
DistanceMatrix station_distances(const Instance& instance);

// Rings an HV can anchor: each ring takes two cable slots on the edges at the
// HV node, so floor(sum of their max_cables / 2). Indexed by station; 0 for MVs.
std::vector<int> ring_limits(const Instance& instance);

// Multi-depot CVRP over the substations (HV depots, MV customers, Q as
// vehicle capacity, unbounded fleet) minimising total link length, with at
// most ring_limits() rings per HV. Emits ring feeders. Throws InfeasibleError
// when a single demand exceeds Q or the rings cannot be anchored.
Connectivity solve_connectivity_hgs(const Instance& instance, const DistanceMatrix& d,
                                    const HgsConfig& config);

// Clarke-Wright savings per HV after assigning every MV to its nearest HV.
// Rings over an HV's limit are then re-anchored at the cheapest HV with room.
// Deterministic.
Connectivity mcws_baseline(const Instance& instance, const DistanceMatrix& d);

// Routes every link along its geometric shortest path, in feeder order, over
// edges that still have a free cable slot. Throws InfeasibleError when a link
// finds every corridor full.
Solution realize_routes(const Connectivity& connectivity, const Instance& instance);

// Cost when each link is trenched on its own: sum of d_ij (c_tr + c_ca).
double relation_only_cost(const Connectivity& connectivity, const DistanceMatrix& d,
                          const EdgeCosts& unit = EdgeCosts{});

}  // namespace cablerouting
