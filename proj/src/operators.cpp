#include "cablerouting/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace cablerouting {

SearchState SearchState::from_solution(Solution solution, const RoadGraph& graph) {
  SearchState s;
  s.usage = usage_map(solution, graph);
  s.cost = evaluate_usage(s.usage, graph);
  s.solution = std::move(solution);
  return s;
}

void SearchState::remove_route(const RoutedPath& path, const RoadGraph& g) {
  for (int e : path.edges) {
    const RoadEdge& edge = g.edge(e);
    const int k = --usage[e];
    cost.cable_cost -= edge.cable_cost * edge.length;
    cost.total_cable_length -= edge.length;
    if (k == 0) cost.trench_cost -= edge.trench_cost * edge.length;
  }
  cost.total = cost.trench_cost + cost.cable_cost;
}

void SearchState::add_route(const RoutedPath& path, const RoadGraph& g) {
  for (int e : path.edges) {
    const RoadEdge& edge = g.edge(e);
    const int k = usage[e]++;
    cost.cable_cost += edge.cable_cost * edge.length;
    cost.total_cable_length += edge.length;
    if (k == 0) cost.trench_cost += edge.trench_cost * edge.length;
  }
  cost.total = cost.trench_cost + cost.cable_cost;
}

int SearchState::missing_routes() const {
  int n = 0;
  for (const Feeder& f : solution.feeders) {
    for (const auto& r : f.routes) n += r ? 0 : 1;
  }
  return n;
}

std::vector<LinkRef> enumerate_links(const Solution& s) {
  std::vector<LinkRef> links;
  for (int f = 0; f < static_cast<int>(s.feeders.size()); ++f) {
    for (int i = 0; i < s.feeders[f].link_count(); ++i) links.push_back({f, i});
  }
  return links;
}

namespace {

long d2_pairs(int links) { return links >= 3 ? static_cast<long>(links - 1) * (links - 2) / 2 : 0; }

}  // namespace

long count_d2_loci(const Solution& s) {
  long total = 0;
  for (const Feeder& f : s.feeders) total += d2_pairs(f.link_count());
  return total;
}

std::optional<DestructionLoci> sample_locs_uniform(const Solution& s, int op, int kappa, Rng& rng) {
  DestructionLoci loci;
  loci.op = op;
  if (op == 1) {
    std::vector<LinkRef> links = enumerate_links(s);
    if (links.empty() || kappa < 1) return std::nullopt;
    const std::size_t take = std::min<std::size_t>(kappa, links.size());
    // Partial Fisher-Yates from the front.
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(links.size() - i));
      std::swap(links[i], links[j]);
    }
    loci.links.assign(links.begin(), links.begin() + take);
    std::sort(loci.links.begin(), loci.links.end());
    return loci;
  }
  if (op == 2) {
    const long total = count_d2_loci(s);
    if (total == 0) return std::nullopt;
    long r = static_cast<long>(rng.below(static_cast<std::uint64_t>(total)));
    for (int f = 0; f < static_cast<int>(s.feeders.size()); ++f) {
      const int n = s.feeders[f].link_count();
      const long here = d2_pairs(n);
      if (r >= here) {
        r -= here;
        continue;
      }
      for (int i = 0; i + 2 < n; ++i) {
        const long row = n - 2 - i;  // j ranges over i+2 .. n-1
        if (r < row) {
          loci.links = {{f, i}, {f, i + 2 + static_cast<int>(r)}};
          return loci;
        }
        r -= row;
      }
    }
    return std::nullopt;
  }
  if (op == 3) {
    if (s.feeders.size() < 2) return std::nullopt;
    const std::vector<LinkRef> links = enumerate_links(s);
    for (;;) {
      LinkRef a = links[rng.below(links.size())];
      LinkRef b = links[rng.below(links.size())];
      if (a.feeder == b.feeder) continue;
      if (b.feeder < a.feeder) std::swap(a, b);
      loci.links = {a, b};
      return loci;
    }
  }
  return std::nullopt;
}

SearchState destroy_d1(SearchState state, const DestructionLoci& loci, const RoadGraph& g) {
  for (const LinkRef& l : loci.links) {
    auto& route = state.solution.feeders[l.feeder].routes[l.position];
    if (!route) continue;
    state.remove_route(*route, g);
    route.reset();
  }
  return state;
}

SearchState destroy_d2(SearchState state, const DestructionLoci& loci, const RoadGraph& g) {
  const int f = loci.links[0].feeder;
  const int i = loci.links[0].position;
  const int j = loci.links[1].position;
  Feeder& feeder = state.solution.feeders[f];
  for (int p : {i, j}) {
    if (feeder.routes[p]) {
      state.remove_route(*feeder.routes[p], g);
      feeder.routes[p].reset();
    }
  }
  std::reverse(feeder.stations.begin() + i + 1, feeder.stations.begin() + j + 1);
  std::reverse(feeder.routes.begin() + i + 1, feeder.routes.begin() + j);
  for (int p = i + 1; p < j; ++p) {
    if (feeder.routes[p]) feeder.routes[p] = feeder.routes[p]->reversed();
  }
  return state;
}

SearchState destroy_d3(SearchState state, const DestructionLoci& loci, const Instance& inst) {
  const LinkRef a = loci.links[0];
  const LinkRef b = loci.links[1];
  auto& feeders = state.solution.feeders;
  for (const LinkRef& l : {a, b}) {
    auto& route = feeders[l.feeder].routes[l.position];
    if (route) {
      state.remove_route(*route, inst.graph);
      route.reset();
    }
  }
  Feeder& fa = feeders[a.feeder];
  Feeder& fb = feeders[b.feeder];

  std::vector<int> sa(fa.stations.begin(), fa.stations.begin() + a.position + 1);
  sa.insert(sa.end(), fb.stations.begin() + b.position + 1, fb.stations.end());
  std::vector<int> sb(fb.stations.begin(), fb.stations.begin() + b.position + 1);
  sb.insert(sb.end(), fa.stations.begin() + a.position + 1, fa.stations.end());

  // Routes: head links keep theirs, the cut link is empty, tail links move.
  using Routes = std::vector<std::optional<RoutedPath>>;
  Routes ra(fa.routes.begin(), fa.routes.begin() + a.position + 1);
  ra.insert(ra.end(), fb.routes.begin() + b.position + 1, fb.routes.end());
  Routes rb(fb.routes.begin(), fb.routes.begin() + b.position + 1);
  rb.insert(rb.end(), fa.routes.begin() + a.position + 1, fa.routes.end());

  fa.stations = std::move(sa);
  fa.routes = std::move(ra);
  fb.stations = std::move(sb);
  fb.routes = std::move(rb);
  fa.load = feeder_load(fa.stations, inst);
  fb.load = feeder_load(fb.stations, inst);

  for (int idx : {b.feeder, a.feeder}) {  // higher index first
    Feeder& f = feeders[idx];
    if (f.stations.size() < 3) {
      for (const auto& r : f.routes) {
        if (r) state.remove_route(*r, inst.graph);
      }
      feeders.erase(feeders.begin() + idx);
    }
  }
  return state;
}

SearchState destroy(SearchState state, const DestructionLoci& loci, const Instance& inst) {
  switch (loci.op) {
    case 1:
      return destroy_d1(std::move(state), loci, inst.graph);
    case 2:
      return destroy_d2(std::move(state), loci, inst.graph);
    case 3:
      return destroy_d3(std::move(state), loci, inst);
    default:
      throw std::invalid_argument("unknown destruction operator " + std::to_string(loci.op));
  }
}

std::optional<SearchState> repair(SearchState partial, const Instance& inst, Rng& rng,
                                  std::string* reason) {
  std::vector<LinkRef> missing;
  for (int f = 0; f < static_cast<int>(partial.solution.feeders.size()); ++f) {
    const Feeder& feeder = partial.solution.feeders[f];
    for (int i = 0; i < feeder.link_count(); ++i) {
      if (!feeder.routes[i]) missing.push_back({f, i});
    }
  }
  if (missing.empty()) return partial;
  std::string last;
  for (int attempt = 0; attempt < kRepairAttempts; ++attempt) {
    rng.shuffle(std::span<LinkRef>(missing));
    SearchState work = partial;
    try {
      for (const LinkRef& l : missing) {
        Feeder& feeder = work.solution.feeders[l.feeder];
        const int a = inst.node_of(feeder.stations[l.position]);
        const int b = inst.node_of(feeder.stations[l.position + 1]);
        RoutedPath path = marginal_cost_astar(inst.graph, work.usage, a, b);
        work.add_route(path, inst.graph);
        feeder.routes[l.position] = std::move(path);
      }
      return work;
    } catch (const SaturationError& e) {
      last = e.what();
    }
  }
  if (reason) *reason = last.empty() ? "saturated" : last;
  return std::nullopt;
}

}  // namespace cablerouting
