#include "cablerouting/bridge.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cablerouting {

int StateTensor::row_of(const LinkRef& link) const {
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    if (rows[r] == link) return r;
  }
  return -1;
}

namespace {

// Node id of the first MV substation on the feeder; feeders without one sort
// last.
int canonical_key(const Feeder& f, const Instance& inst) {
  for (int s : f.stations) {
    if (!inst.is_hv(s)) return inst.node_of(s);
  }
  return inst.graph.node_count();
}

}  // namespace

StateTensor encode_state(const Solution& solution, const Instance& inst) {
  std::vector<int> order(solution.feeders.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> key(order.size());
  for (int f : order) key[f] = canonical_key(solution.feeders[f], inst);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });

  StateTensor t;
  for (int f : order) {
    const Feeder& feeder = solution.feeders[f];
    for (int p = 0; p < feeder.link_count(); ++p) {
      if (!feeder.routes[p]) throw std::invalid_argument("encode_state needs a routed solution");
      t.rows.push_back({f, p});
      t.max_nodes = std::max<int>(t.max_nodes, feeder.routes[p]->nodes.size());
    }
  }
  t.links = static_cast<int>(t.rows.size());
  t.values.assign(static_cast<std::size_t>(t.links) * t.max_nodes * 2, 0.0);
  const double extent = inst.extent_km() > 0.0 ? inst.extent_km() : 1.0;
  for (int r = 0; r < t.links; ++r) {
    const RoutedPath& path = *solution.feeders[t.rows[r].feeder].routes[t.rows[r].position];
    for (std::size_t k = 0; k < path.nodes.size(); ++k) {
      const RoadNode& n = inst.graph.node(path.nodes[k]);
      const std::size_t base = (static_cast<std::size_t>(r) * t.max_nodes + k) * 2;
      t.values[base] = n.x / extent;
      t.values[base + 1] = n.y / extent;
    }
  }
  return t;
}

double reward(double c_next, double c_best) {
  return c_next < c_best ? (c_best - c_next) / c_best : 0.0;
}

bool is_flat(std::span<const double> probs) {
  return std::all_of(probs.begin(), probs.end(), [&](double p) { return p == probs.front(); });
}

namespace {

std::optional<int> draw_row(std::span<const double> w, Rng& rng) {
  const std::size_t i = weighted_index(w, rng);
  if (i >= w.size()) return std::nullopt;
  return static_cast<int>(i);
}

ProposedLoci fallback(const Solution& solution, int op, int kappa, Rng& rng) {
  return {sample_locs_uniform(solution, op, kappa, rng), true};
}

ProposedLoci propose_d1(std::span<const double> probs, const StateTensor& st, int kappa,
                        Rng& rng) {
  ProposedLoci out;
  DestructionLoci loci;
  loci.op = 1;
  const int take = std::min(kappa, st.links);
  if (take < 1) return out;
  std::vector<double> w(probs.begin(), probs.end());
  std::vector<int> chosen;
  while (static_cast<int>(chosen.size()) < take) {
    std::optional<int> r = draw_row(w, rng);
    if (!r) break;
    chosen.push_back(*r);
    w[*r] = 0.0;
  }
  if (static_cast<int>(chosen.size()) < take) {
    out.fallback = true;
    std::vector<int> rest;
    for (int r = 0; r < st.links; ++r) {
      if (std::find(chosen.begin(), chosen.end(), r) == chosen.end()) rest.push_back(r);
    }
    rng.shuffle(std::span<int>(rest));
    chosen.insert(chosen.end(), rest.begin(), rest.begin() + (take - chosen.size()));
  }
  for (int r : chosen) loci.links.push_back(st.rows[r]);
  std::sort(loci.links.begin(), loci.links.end());
  out.loci = std::move(loci);
  return out;
}

ProposedLoci propose_d2(std::span<const double> probs, const StateTensor& st,
                        const Solution& solution, int kappa, Rng& rng) {
  const int nf = static_cast<int>(solution.feeders.size());
  std::vector<double> feeder_mass(nf, 0.0);
  for (int r = 0; r < st.links; ++r) {
    const int f = st.rows[r].feeder;
    if (solution.feeders[f].link_count() >= 3) feeder_mass[f] += probs[r];
  }
  std::optional<int> f = draw_row(feeder_mass, rng);
  if (!f) return fallback(solution, 2, kappa, rng);

  // Link probabilities within the chosen feeder, by position.
  std::vector<double> w(solution.feeders[*f].link_count(), 0.0);
  for (int r = 0; r < st.links; ++r) {
    if (st.rows[r].feeder == *f) w[st.rows[r].position] = probs[r];
  }
  for (int attempt = 0; attempt < kProposalRetries; ++attempt) {
    std::optional<int> i = draw_row(w, rng);
    if (!i) break;
    std::vector<double> rest = w;
    rest[*i] = 0.0;
    std::optional<int> j = draw_row(rest, rng);
    if (!j) break;
    int a = std::min(*i, *j);
    int b = std::max(*i, *j);
    if (b - a < 2) continue;
    DestructionLoci loci;
    loci.op = 2;
    loci.links = {{*f, a}, {*f, b}};
    return {std::move(loci), false};
  }
  return fallback(solution, 2, kappa, rng);
}

ProposedLoci propose_d3(std::span<const double> probs, const StateTensor& st,
                        const Solution& solution, int kappa, Rng& rng) {
  if (solution.feeders.size() < 2) return {};
  std::optional<int> a = draw_row(probs, rng);
  if (!a) return fallback(solution, 3, kappa, rng);
  for (int attempt = 0; attempt < kProposalRetries; ++attempt) {
    std::optional<int> b = draw_row(probs, rng);
    if (!b) break;
    LinkRef la = st.rows[*a];
    LinkRef lb = st.rows[*b];
    if (la.feeder == lb.feeder) continue;
    if (lb.feeder < la.feeder) std::swap(la, lb);
    DestructionLoci loci;
    loci.op = 3;
    loci.links = {la, lb};
    return {std::move(loci), false};
  }
  return fallback(solution, 3, kappa, rng);
}

}  // namespace

ProposedLoci propose_loci(std::span<const double> probs, const StateTensor& st,
                          const Solution& solution, int op, int kappa, Rng& rng) {
  if (static_cast<int>(probs.size()) != st.links) {
    throw std::invalid_argument("proposal length does not match the state");
  }
  if (probs.empty()) return {};
  if (is_flat(probs)) return {sample_locs_uniform(solution, op, kappa, rng), false};
  switch (op) {
    case 1:
      return propose_d1(probs, st, kappa, rng);
    case 2:
      if (count_d2_loci(solution) == 0) return {};
      return propose_d2(probs, st, solution, kappa, rng);
    case 3:
      return propose_d3(probs, st, solution, kappa, rng);
    default:
      throw std::invalid_argument("unknown destruction operator");
  }
}

}  // namespace cablerouting
