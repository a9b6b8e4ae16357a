#pragma once

#include <span>
#include <vector>

#include "cablerouting/routing.hpp"

namespace cablerouting::detail {

// Moves whole rings off HVs anchoring more rings than `limit` allows, one at
// a time, always taking the move with the smallest length increase. `seqs`
// holds the MV sequences, `depot` the anchoring HV of each. Returns the
// number of rings still over a limit (0 when the assignment fits).
inline int enforce_ring_limits(const std::vector<const std::vector<int>*>& seqs,
                               std::vector<int>& depot, std::span<const int> hvs,
                               const std::vector<int>& limit, const DistanceMatrix& d) {
  auto closing = [&](std::size_t r, int h) {
    return d(h, seqs[r]->front()) + d(seqs[r]->back(), h);
  };
  std::vector<int> count(limit.size(), 0);
  for (int h : depot) ++count[h];
  for (;;) {
    double best_delta = 0.0;
    std::size_t best_r = seqs.size();
    int best_h = -1;
    for (std::size_t r = 0; r < seqs.size(); ++r) {
      if (count[depot[r]] <= limit[depot[r]]) continue;
      const double here = closing(r, depot[r]);
      for (int h : hvs) {
        if (count[h] >= limit[h]) continue;
        const double delta = closing(r, h) - here;
        if (best_r == seqs.size() || delta < best_delta) {
          best_delta = delta;
          best_r = r;
          best_h = h;
        }
      }
    }
    if (best_r == seqs.size()) break;
    --count[depot[best_r]];
    ++count[best_h];
    depot[best_r] = best_h;
  }
  int excess = 0;
  for (int h : hvs) excess += std::max(0, count[h] - limit[h]);
  return excess;
}

}  // namespace cablerouting::detail
