// Hybrid genetic search for the multi-depot CVRP that builds the initial
// feeder topology: giant-tour chromosomes, an exact split into depot-anchored
// routes, local-search education and a population ranked by biased fitness
// (cost rank plus diversity rank).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "cablerouting/initialization.hpp"
#include "cablerouting/rng.hpp"
#include "depot_limits.hpp"

namespace cablerouting {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;
constexpr double kExcessPenalty = 1e6;

struct Route {
  std::vector<int> seq;
  int depot = -1;
  double cost = 0.0;
  double load = 0.0;
};

class Problem {
 public:
  Problem(const Instance& inst, const DistanceMatrix& d, int granular)
      : d_(d), capacity_(inst.feeder_capacity), limit_(ring_limits(inst)) {
    depots_ = inst.hv_stations();
    customers_ = inst.mv_stations();
    demand_.resize(inst.substations.size(), 0.0);
    for (int c : customers_) demand_[c] = inst.substations[c].demand;
    neighbors_.resize(inst.substations.size());
    for (int c : customers_) {
      std::vector<int> others;
      for (int o : customers_) {
        if (o != c) others.push_back(o);
      }
      std::stable_sort(others.begin(), others.end(),
                       [&](int a, int b) { return d_(c, a) < d_(c, b); });
      if (static_cast<int>(others.size()) > granular) others.resize(granular);
      neighbors_[c] = std::move(others);
    }
  }

  const std::vector<int>& customers() const { return customers_; }
  const std::vector<int>& neighbors(int c) const { return neighbors_[c]; }
  double capacity() const { return capacity_; }
  double demand(int c) const { return demand_[c]; }
  double dist(int a, int b) const { return d_(a, b); }
  int station_count() const { return static_cast<int>(demand_.size()); }

  // Re-anchors rings off full HVs and refreshes their costs. Returns the
  // number of rings that still do not fit.
  int fit_ring_limits(std::vector<Route>& routes) const {
    std::vector<const std::vector<int>*> seqs;
    std::vector<int> depot;
    for (const Route& r : routes) {
      seqs.push_back(&r.seq);
      depot.push_back(r.depot);
    }
    const int excess = detail::enforce_ring_limits(seqs, depot, depots_, limit_, d_);
    for (std::size_t k = 0; k < routes.size(); ++k) {
      Route& r = routes[k];
      if (r.depot == depot[k]) continue;
      r.cost += d_(depot[k], r.seq.front()) + d_(r.seq.back(), depot[k]) -
                d_(r.depot, r.seq.front()) - d_(r.seq.back(), r.depot);
      r.depot = depot[k];
    }
    return excess;
  }

  double load(const std::vector<int>& seq) const {
    double l = 0.0;
    for (int c : seq) l += demand_[c];
    return l;
  }

  // Ring cost with the cheapest closing depot (lowest index on ties).
  std::pair<double, int> ring_cost(const std::vector<int>& seq) const {
    if (seq.empty()) return {0.0, -1};
    double internal = 0.0;
    for (std::size_t k = 1; k < seq.size(); ++k) internal += d_(seq[k - 1], seq[k]);
    double best = kInf;
    int depot = -1;
    for (int h : depots_) {
      const double c = d_(h, seq.front()) + d_(seq.back(), h);
      if (c < best) {
        best = c;
        depot = h;
      }
    }
    return {internal + best, depot};
  }

  Route make_route(std::vector<int> seq) const {
    Route r;
    const auto [cost, depot] = ring_cost(seq);
    r.cost = cost;
    r.depot = depot;
    r.load = load(seq);
    r.seq = std::move(seq);
    return r;
  }

  // Cheapest partition of the giant tour into capacity-feasible segments.
  std::vector<Route> split(const std::vector<int>& tour) const {
    const int n = static_cast<int>(tour.size());
    std::vector<double> best(n + 1, kInf);
    std::vector<int> from(n + 1, -1);
    best[0] = 0.0;
    for (int i = 0; i < n; ++i) {
      if (best[i] == kInf) continue;
      double load = 0.0;
      double internal = 0.0;
      for (int j = i; j < n; ++j) {
        load += demand_[tour[j]];
        if (load > capacity_ + kEps) break;
        if (j > i) internal += d_(tour[j - 1], tour[j]);
        double close = kInf;
        for (int h : depots_) close = std::min(close, d_(h, tour[i]) + d_(tour[j], h));
        const double c = best[i] + internal + close;
        if (c < best[j + 1]) {
          best[j + 1] = c;
          from[j + 1] = i;
        }
      }
    }
    std::vector<Route> routes;
    for (int j = n; j > 0; j = from[j]) {
      routes.push_back(make_route(std::vector<int>(tour.begin() + from[j], tour.begin() + j)));
    }
    std::reverse(routes.begin(), routes.end());
    return routes;
  }

 private:
  const DistanceMatrix& d_;
  double capacity_;
  std::vector<int> limit_;
  std::vector<int> depots_;
  std::vector<int> customers_;
  std::vector<double> demand_;
  std::vector<std::vector<int>> neighbors_;
};

struct Individual {
  std::vector<int> tour;
  std::vector<Route> routes;
  double cost = 0.0;
  std::vector<int> succ;  // -1 marks a depot
  std::vector<int> pred;
  int excess = 0;  // rings over an HV limit; penalised in cost

  void finalize(const Problem& p) {
    routes.erase(std::remove_if(routes.begin(), routes.end(),
                                [](const Route& r) { return r.seq.empty(); }),
                 routes.end());
    excess = p.fit_ring_limits(routes);
    cost = kExcessPenalty * excess;
    tour.clear();
    succ.assign(p.station_count(), -1);
    pred.assign(p.station_count(), -1);
    for (const Route& r : routes) {
      cost += r.cost;
      for (std::size_t k = 0; k < r.seq.size(); ++k) {
        tour.push_back(r.seq[k]);
        if (k > 0) pred[r.seq[k]] = r.seq[k - 1];
        if (k + 1 < r.seq.size()) succ[r.seq[k]] = r.seq[k + 1];
      }
    }
  }
};

// Broken-pairs distance normalised by the customer count.
double broken_pairs(const Individual& a, const Individual& b, const Problem& p) {
  int diff = 0;
  for (int c : p.customers()) {
    if (a.succ[c] != b.succ[c] && a.succ[c] != b.pred[c]) ++diff;
    if (a.pred[c] == -1 && b.pred[c] != -1 && b.succ[c] != -1) ++diff;
  }
  return p.customers().empty() ? 0.0 : static_cast<double>(diff) / p.customers().size();
}

class LocalSearch {
 public:
  LocalSearch(const Problem& p, Rng& rng) : p_(p), rng_(rng) {}

  void educate(Individual& ind) {
    routes_ = std::move(ind.routes);
    reindex();
    std::vector<int> order = p_.customers();
    bool improved = true;
    while (improved) {
      improved = false;
      rng_.shuffle(std::span<int>(order));
      for (int u : order) {
        for (int v : p_.neighbors(u)) {
          if (try_moves(u, v)) improved = true;
        }
        if (try_new_route(u)) improved = true;
      }
    }
    ind.routes = std::move(routes_);
    ind.finalize(p_);
  }

 private:
  void reindex() {
    routes_.erase(std::remove_if(routes_.begin(), routes_.end(),
                                 [](const Route& r) { return r.seq.empty(); }),
                  routes_.end());
    route_of_.assign(p_.station_count(), -1);
    pos_of_.assign(p_.station_count(), -1);
    for (int r = 0; r < static_cast<int>(routes_.size()); ++r) {
      for (int k = 0; k < static_cast<int>(routes_[r].seq.size()); ++k) {
        route_of_[routes_[r].seq[k]] = r;
        pos_of_[routes_[r].seq[k]] = k;
      }
    }
  }

  bool commit_single(int r, std::vector<int> seq) {
    const auto [cost, depot] = p_.ring_cost(seq);
    if (cost >= routes_[r].cost - kEps) return false;
    routes_[r] = p_.make_route(std::move(seq));
    reindex();
    return true;
  }

  // r2 < 0 opens a new route for s2.
  bool commit_pair(int r1, std::vector<int> s1, int r2, std::vector<int> s2) {
    if (p_.load(s1) > p_.capacity() + kEps || p_.load(s2) > p_.capacity() + kEps) return false;
    const double before = routes_[r1].cost + (r2 >= 0 ? routes_[r2].cost : 0.0);
    const double after = p_.ring_cost(s1).first + p_.ring_cost(s2).first;
    if (after >= before - kEps) return false;
    routes_[r1] = p_.make_route(std::move(s1));
    if (r2 >= 0) {
      routes_[r2] = p_.make_route(std::move(s2));
    } else {
      routes_.push_back(p_.make_route(std::move(s2)));
    }
    reindex();
    return true;
  }

  bool try_new_route(int u) {
    const int ru = route_of_[u];
    if (routes_[ru].seq.size() < 2) return false;
    std::vector<int> a = routes_[ru].seq;
    a.erase(a.begin() + pos_of_[u]);
    return commit_pair(ru, std::move(a), -1, {u});
  }

  bool try_moves(int u, int v) {
    const int ru = route_of_[u];
    const int rv = route_of_[v];
    const int pu = pos_of_[u];
    const int pv = pos_of_[v];
    const std::vector<int> a = routes_[ru].seq;

    if (ru == rv) {
      for (int after = 0; after < 2; ++after) {
        std::vector<int> s = a;
        s.erase(s.begin() + pu);
        const auto it = std::find(s.begin(), s.end(), v);
        s.insert(it + after, u);
        if (commit_single(ru, std::move(s))) return true;
      }
      {
        std::vector<int> s = a;
        std::swap(s[pu], s[pv]);
        if (commit_single(ru, std::move(s))) return true;
      }
      {
        std::vector<int> s = a;
        const int i = std::min(pu, pv);
        const int j = std::max(pu, pv);
        std::reverse(s.begin() + i, s.begin() + j + 1);
        if (commit_single(ru, std::move(s))) return true;
      }
      return false;
    }

    const std::vector<int> b = routes_[rv].seq;
    for (int after = 0; after < 2; ++after) {
      std::vector<int> sa = a;
      sa.erase(sa.begin() + pu);
      std::vector<int> sb = b;
      sb.insert(sb.begin() + pv + after, u);
      if (commit_pair(ru, std::move(sa), rv, std::move(sb))) return true;
    }
    {
      std::vector<int> sa = a;
      std::vector<int> sb = b;
      std::swap(sa[pu], sb[pv]);
      if (commit_pair(ru, std::move(sa), rv, std::move(sb))) return true;
    }
    {
      // 2-opt*: exchange the tails after u and after v.
      std::vector<int> sa(a.begin(), a.begin() + pu + 1);
      sa.insert(sa.end(), b.begin() + pv + 1, b.end());
      std::vector<int> sb(b.begin(), b.begin() + pv + 1);
      sb.insert(sb.end(), a.begin() + pu + 1, a.end());
      if (commit_pair(ru, std::move(sa), rv, std::move(sb))) return true;
    }
    {
      // 2-opt* variant joining head to head and tail to tail.
      std::vector<int> sa(a.begin(), a.begin() + pu + 1);
      sa.insert(sa.end(), b.rend() - pv - 1, b.rend());
      std::vector<int> sb(a.rbegin(), a.rend() - pu - 1);
      sb.insert(sb.end(), b.begin() + pv + 1, b.end());
      if (commit_pair(ru, std::move(sa), rv, std::move(sb))) return true;
    }
    return false;
  }

  const Problem& p_;
  Rng& rng_;
  std::vector<Route> routes_;
  std::vector<int> route_of_;
  std::vector<int> pos_of_;
};

class Population {
 public:
  Population(const Problem& p, const HgsConfig& cfg) : p_(p), cfg_(cfg) {}

  void add(Individual ind) {
    std::vector<double> row;
    row.reserve(members_.size() + 1);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const double dd = broken_pairs(ind, members_[i], p_);
      row.push_back(dd);
      dist_[i].push_back(dd);
    }
    row.push_back(0.0);
    dist_.push_back(std::move(row));
    members_.push_back(std::move(ind));
    if (static_cast<int>(members_.size()) >= cfg_.population_size + cfg_.generation_size) {
      select_survivors();
    }
    update_fitness();
  }

  const Individual& tournament(Rng& rng) const {
    const std::size_t a = rng.below(members_.size());
    const std::size_t b = rng.below(members_.size());
    return fitness_[a] <= fitness_[b] ? members_[a] : members_[b];
  }

  std::size_t size() const { return members_.size(); }

 private:
  void remove(std::size_t idx) {
    members_.erase(members_.begin() + idx);
    dist_.erase(dist_.begin() + idx);
    for (auto& row : dist_) row.erase(row.begin() + idx);
  }

  void select_survivors() {
    while (static_cast<int>(members_.size()) > cfg_.population_size) {
      update_fitness();
      // Clones go first, then the worst biased fitness.
      std::size_t victim = members_.size();
      for (std::size_t i = 0; i < members_.size(); ++i) {
        bool clone = false;
        for (std::size_t j = 0; j < members_.size(); ++j) {
          if (i != j && dist_[i][j] < kEps) clone = true;
        }
        if (clone && (victim == members_.size() || fitness_[i] > fitness_[victim])) victim = i;
      }
      if (victim == members_.size()) {
        victim = static_cast<std::size_t>(
            std::max_element(fitness_.begin(), fitness_.end()) - fitness_.begin());
      }
      remove(victim);
    }
  }

  void update_fitness() {
    const std::size_t n = members_.size();
    fitness_.assign(n, 0.0);
    if (n <= 1) return;
    std::vector<double> diversity(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) row.push_back(dist_[i][j]);
      }
      const std::size_t k = std::min<std::size_t>(cfg_.n_closest, row.size());
      std::partial_sort(row.begin(), row.begin() + k, row.end());
      diversity[i] = std::accumulate(row.begin(), row.begin() + k, 0.0) / k;
    }
    std::vector<std::size_t> by_cost(n), by_div(n);
    std::iota(by_cost.begin(), by_cost.end(), 0);
    std::iota(by_div.begin(), by_div.end(), 0);
    std::stable_sort(by_cost.begin(), by_cost.end(),
                     [&](std::size_t a, std::size_t b) { return members_[a].cost < members_[b].cost; });
    std::stable_sort(by_div.begin(), by_div.end(),
                     [&](std::size_t a, std::size_t b) { return diversity[a] > diversity[b]; });
    const double elite = std::round(cfg_.elite_fraction * cfg_.population_size);
    const double weight = std::max(0.0, 1.0 - elite / n);
    for (std::size_t r = 0; r < n; ++r) {
      fitness_[by_cost[r]] += static_cast<double>(r) / (n - 1);
      fitness_[by_div[r]] += weight * static_cast<double>(r) / (n - 1);
    }
  }

  const Problem& p_;
  const HgsConfig& cfg_;
  std::vector<Individual> members_;
  std::vector<std::vector<double>> dist_;
  std::vector<double> fitness_;
};

// Ordered crossover on giant tours.
std::vector<int> order_crossover(const std::vector<int>& p1, const std::vector<int>& p2,
                                 int n_stations, Rng& rng) {
  const int n = static_cast<int>(p1.size());
  const int start = static_cast<int>(rng.below(n));
  int end = static_cast<int>(rng.below(n));
  while (n > 1 && end == start) end = static_cast<int>(rng.below(n));
  std::vector<int> child(n, -1);
  std::vector<char> taken(n_stations, 0);
  int k = start;
  for (;;) {
    child[k] = p1[k];
    taken[p1[k]] = 1;
    if (k == end) break;
    k = (k + 1) % n;
  }
  int write = (end + 1) % n;
  for (int i = 1; i <= n; ++i) {
    const int c = p2[(end + i) % n];
    if (taken[c]) continue;
    child[write] = c;
    write = (write + 1) % n;
  }
  return child;
}

}  // namespace

Connectivity solve_connectivity_hgs(const Instance& inst, const DistanceMatrix& d,
                                    const HgsConfig& cfg) {
  for (int c : inst.mv_stations()) {
    if (inst.substations[c].demand > inst.feeder_capacity) {
      throw InfeasibleError("MV station " + std::to_string(c) + " demand " +
                            std::to_string(inst.substations[c].demand) +
                            " exceeds feeder capacity");
    }
  }
  if (inst.hv_stations().empty()) throw InfeasibleError("no HV substation to anchor feeders");
  const Problem p(inst, d, cfg.granular_neighbors);
  if (p.customers().empty()) return Connectivity{};

  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  auto out_of_time = [&]() {
    return cfg.budget.wall_clock() &&
           std::chrono::duration<double>(Clock::now() - started).count() >= cfg.budget.seconds;
  };

  Rng rng(cfg.seed);
  LocalSearch ls(p, rng);
  Population pop(p, cfg);
  Individual best;
  best.cost = kInf;

  auto consider = [&](Individual ind) {
    if (ind.cost < best.cost - kEps) best = ind;
    pop.add(std::move(ind));
  };

  const int initial = 4 * cfg.population_size;
  for (int i = 0; i < initial && !(i > 0 && out_of_time()); ++i) {
    Individual ind;
    ind.tour = p.customers();
    rng.shuffle(std::span<int>(ind.tour));
    ind.routes = p.split(ind.tour);
    ls.educate(ind);
    consider(std::move(ind));
  }

  for (long it = 0;; ++it) {
    if (cfg.budget.wall_clock()) {
      if (out_of_time()) break;
    } else if (it >= cfg.budget.iterations) {
      break;
    }
    const Individual& a = pop.tournament(rng);
    const Individual& b = pop.tournament(rng);
    Individual child;
    child.tour = order_crossover(a.tour, b.tour, p.station_count(), rng);
    child.routes = p.split(child.tour);
    ls.educate(child);
    consider(std::move(child));
  }

  if (best.excess > 0) {
    throw InfeasibleError(std::to_string(best.excess) +
                          " ring feeders exceed the slots at their HV substations");
  }
  std::vector<Route> routes = best.routes;
  std::sort(routes.begin(), routes.end(), [](const Route& x, const Route& y) {
    return *std::min_element(x.seq.begin(), x.seq.end()) <
           *std::min_element(y.seq.begin(), y.seq.end());
  });
  Connectivity out;
  for (const Route& r : routes) {
    std::vector<int> f{r.depot};
    f.insert(f.end(), r.seq.begin(), r.seq.end());
    f.push_back(r.depot);
    out.feeders.push_back(std::move(f));
  }
  return out;
}

}  // namespace cablerouting
