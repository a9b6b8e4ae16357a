#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cablerouting/instance.hpp"
#include "cablerouting/operators.hpp"
#include "cablerouting/rng.hpp"
#include "cablerouting/solution.hpp"

namespace cablerouting {

// E x M x 2 tensor of route node coordinates, one row per link. Feeders are
// taken in canonical order (by the node id of their first MV substation) so
// the encoding does not depend on storage order. Coordinates are divided by
// the lattice extent; unused entries stay zero.
struct StateTensor {
  int links = 0;      // E
  int max_nodes = 0;  // M
  std::vector<double> values;   // row-major, size E * M * 2
  std::vector<LinkRef> rows;    // row -> (storage feeder index, position)

  double at(int row, int node, int dim) const {
    return values[(static_cast<std::size_t>(row) * max_nodes + node) * 2 + dim];
  }
  // Row of a link, or -1.
  int row_of(const LinkRef& link) const;
};

StateTensor encode_state(const Solution& solution, const Instance& instance);

// Reward for a candidate of cost c_next when the incumbent costs c_best:
// relative improvement, zero when there is none.
double reward(double c_next, double c_best);

struct ProposedLoci {
  std::optional<DestructionLoci> loci;
  bool fallback = false;  // the probabilities could not be used; loci are uniform
};

// True when every entry equals the first one.
bool is_flat(std::span<const double> probs);

inline constexpr int kProposalRetries = 20;

// Loci drawn with per-row probabilities (rows as in `state`).
//   D1: kappa links without replacement, proportional to probs. Once the
//       remaining mass is zero the rest are drawn uniformly (flagged).
//   D2: a feeder with at least three links, proportional to its summed
//       probability; then two links of it by the renormalised probs,
//       redrawn while they are adjacent.
//   D3: two sequential weighted draws, the second redrawn while it lands on
//       the first one's feeder.
// D2/D3 fall back to uniform loci after kProposalRetries failed redraws or
// when the mass is degenerate. Flat probabilities take the uniform sampler's
// path so that a uniform agent reproduces the plain search exactly.
ProposedLoci propose_loci(std::span<const double> probs, const StateTensor& state,
                          const Solution& solution, int op, int kappa, Rng& rng);

}  // namespace cablerouting
