#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "cablerouting/instance.hpp"
#include "cablerouting/rng.hpp"
#include "cablerouting/solution.hpp"

namespace cablerouting {

// A solution with its cable counts and cost, kept in step as routes are
// removed and added. Candidates are private copies of the incumbent state.
struct SearchState {
  Solution solution;
  UsageMap usage;
  CostBreakdown cost;

  // Requires a fully routed solution.
  static SearchState from_solution(Solution solution, const RoadGraph& graph);

  void remove_route(const RoutedPath& path, const RoadGraph& graph);
  void add_route(const RoutedPath& path, const RoadGraph& graph);
  int missing_routes() const;
};

// Identifies link `position` (between stations position and position+1) of
// feeder `feeder`.
struct LinkRef {
  int feeder = 0;
  int position = 0;

  auto operator<=>(const LinkRef&) const = default;
};

enum class OperatorId : int { kRouteRemoval = 1, kIntraTwoOpt = 2, kInterTwoOpt = 3 };

// D1: the removed links. D2: two links i < j - 1 of one feeder. D3: one link
// on each of two distinct feeders, lower feeder index first.
struct DestructionLoci {
  int op = 1;
  std::vector<LinkRef> links;

  bool operator==(const DestructionLoci&) const = default;
};

// Links in storage order (feeder, position).
std::vector<LinkRef> enumerate_links(const Solution& solution);

// Number of valid D2 loci: pairs i, j of one feeder with j >= i + 2.
long count_d2_loci(const Solution& solution);

// Uniform over the operator's loci. nullopt when the operator does not apply
// (D2 needs a feeder with three or more links, D3 needs two feeders).
std::optional<DestructionLoci> sample_locs_uniform(const Solution& solution, int op, int kappa,
                                                   Rng& rng);

// Removes the routes of the listed links; topology is untouched.
SearchState destroy_d1(SearchState state, const DestructionLoci& loci, const RoadGraph& graph);

// Reverses the stations strictly between link i and link j of one feeder.
// Links i and j lose their routes; interior routes are kept, reversed.
SearchState destroy_d2(SearchState state, const DestructionLoci& loci, const RoadGraph& graph);

// Swaps the tails after the chosen links of two feeders (2-opt*). The cut
// links lose their routes and loads are recomputed. A feeder left without MV
// substations is dropped. Capacity is not checked here.
SearchState destroy_d3(SearchState state, const DestructionLoci& loci, const Instance& instance);

SearchState destroy(SearchState state, const DestructionLoci& loci, const Instance& instance);

// Plans every missing route with the marginal-cost A* in a shuffled order,
// each against the cables already present. Retries with a fresh order on
// saturation; nullopt (with a reason) after the last attempt fails.
inline constexpr int kRepairAttempts = 3;
std::optional<SearchState> repair(SearchState partial, const Instance& instance, Rng& rng,
                                  std::string* reason = nullptr);

}  // namespace cablerouting
