#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cablerouting/road_graph.hpp"

namespace cablerouting {

enum class Level { kHv, kMv };

struct Substation {
  int node_id = 0;
  Level level = Level::kMv;
  double demand = 0.0;  // MVA, zero for HV

  bool operator==(const Substation&) const = default;
};

// A benchmark problem. Substations are addressed by their index in
// `substations` ("station index"); distance matrices and feeders use that
// indexing.
struct Instance {
  std::string name;
  RoadGraph graph;
  std::vector<Substation> substations;
  double feeder_capacity = 10.0;  // Q, MVA
  std::uint64_t seed = 0;
  int grid_n = 0;
  double block_km = 1.0;

  std::vector<int> hv_stations() const;
  std::vector<int> mv_stations() const;
  std::vector<int> station_nodes() const;
  bool is_hv(int station) const {
    return substations[station].level == Level::kHv;
  }
  int node_of(int station) const { return substations[station].node_id; }
  double extent_km() const { return grid_n * block_km; }

  bool operator==(const Instance&) const = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Benchmark conventions.
inline constexpr double kDefaultCapacity = 10.0;
inline constexpr double kDemandLow = 2.0;
inline constexpr double kDemandHigh = 5.0;
inline constexpr std::uint64_t kBuiltinSeed = 42;

// Square lattice of n_grid x n_grid blocks: (n_grid+1)^2 junctions and
// 2 n_grid (n_grid+1) axis-aligned edges of length block_km.
RoadGraph generate_lattice(int n_grid, double block_km,
                           const EdgeCosts& costs = EdgeCosts{});

// Two-level K-means placement. MV sites are the centroids of the lattice
// junctions, HV sites the centroids of the MV centroids; each site is
// projected onto the nearest edge and inserted as a node. The random stream
// is consumed in a fixed order: MV k-means++ seeding, HV k-means++ seeding,
// then one demand draw per MV. Requires n_hv <= n_mv <= junction count.
Instance place_substations(RoadGraph graph, int n_mv, int n_hv,
                           std::uint64_t seed);

struct CaseParams {
  int id;
  int grid_n;
  int n_mv;
  int n_hv;
};
CaseParams builtin_case_params(int id);
Instance builtin_case(int id);

// Structural validation. Hard violations throw InstanceError; soft ones
// (benchmark conventions such as the demand range) are returned as text.
std::vector<std::string> validate_instance(const Instance& instance);

// Versioned JSON-compatible text with one array element per line.
inline constexpr const char* kInstanceSchema = "cablerouting.instance/1";
std::string serialize_instance(const Instance& instance);
Instance deserialize_instance(std::string_view text,
                              std::vector<std::string>* warnings = nullptr);

Instance load_instance_file(const std::string& path,
                            std::vector<std::string>* warnings = nullptr);
void save_instance_file(const Instance& instance, const std::string& path);

}  // namespace cablerouting
