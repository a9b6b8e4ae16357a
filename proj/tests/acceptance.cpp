// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are pinned below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "cablerouting/experiment.hpp"
#include "cablerouting/initialization.hpp"
#include "cablerouting/mvns.hpp"
#include "cablerouting/routing.hpp"
#include "oracles.hpp"
#include "toys.hpp"

using namespace cablerouting;

namespace {

// 1: toy optimality
constexpr double kToyTolerance = 0.02;
constexpr int kToySeeds = 10;
constexpr int kToyRequired = 9;
constexpr int kToyIterations = 200;
constexpr double kToySeconds = 60.0;
// 2: A* against Dijkstra
constexpr int kRoutingScenarios = 100;
constexpr double kRoutingSeconds = 30.0;
// 4: sharing against no sharing
constexpr int kSharingSeeds = 10;
constexpr double kSharingMargin = 0.15;
constexpr double kRunSeconds = 15 * 60.0;
// 5: method ordering
constexpr int kOrderingSeeds = 5;
constexpr double kOrderingSlack = 1.02;
// 6: bookkeeping
constexpr double kAuditTolerance = 1e-9;
// 8: gap arithmetic
constexpr double kGapTolerance = 0.01;

constexpr int kIterations = 600;
constexpr int kNeighbors = 10;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ExperimentConfig benchmark_config() {
  ExperimentConfig c;
  c.search.iterations = kIterations;
  c.search.neighbors = kNeighbors;
  c.search.audit = true;
  return c;
}

// Audit results of every path-aware run, for criterion 6.
struct AuditLog {
  int runs = 0;
  int failures = 0;
  double max_rel_error = 0.0;
  std::string first_problem;

  void note(const RunOutput& out, const Instance& inst) {
    ++runs;
    const SearchTrace& t = *out.trace;
    max_rel_error = std::max(max_rel_error, t.audit_max_rel_error);
    std::string problem;
    if (t.audits != t.accepted_count() + 1) problem = "audit count mismatch";
    if (t.audit_max_rel_error > kAuditTolerance) problem = "cost drift";
    if (!check_feasible(*out.solution, inst).empty()) problem = "final solution infeasible";
    if (!problem.empty()) {
      ++failures;
      if (first_problem.empty()) first_problem = problem;
    }
  }
  void error(const std::string& what) {
    ++runs;
    ++failures;
    if (first_problem.empty()) first_problem = what;
  }
};

Verdict toy_optimality() {
  const auto t0 = std::chrono::steady_clock::now();
  // 3x3 blocks, HV in the interior, three MVs of 3 MVA, Q = 10.
  Instance inst = toys::lattice_instance(3, {3, 10, 12}, {5}, 3.0);
  inst.feeder_capacity = 10.0;
  const double best = oracle::optimal_f2_single_hv(inst);
  const DistanceMatrix d = station_distances(inst);
  int within = 0;
  double worst = 0.0;
  for (int seed = 1; seed <= kToySeeds; ++seed) {
    HgsConfig hgs;
    hgs.seed = seed;
    hgs.budget.iterations = 200;
    const Solution init = realize_routes(solve_connectivity_hgs(inst, d, hgs), inst);
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.iterations = kToyIterations;
    cfg.neighbors = kNeighbors;
    const double cost = mvns_search(inst, init, cfg).cost.total;
    const double rel = (cost - best) / best;
    worst = std::max(worst, rel);
    if (rel <= kToyTolerance) ++within;
  }
  const double took = seconds_since(t0);
  return {within >= kToyRequired && took < kToySeconds,
          format("%d/%d seeds within %.0f%% of the exhaustive optimum %.4f (worst %+.2f%%), %.1f s",
                 within, kToySeeds, kToyTolerance * 100, best, worst * 100, took)};
}

Verdict astar_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  int agree = 0;
  int total = 0;
  int saturated = 0;
  for (int id = 0; id <= 4; ++id) {
    const Instance inst = builtin_case(id);
    const RoadGraph& g = inst.graph;
    Rng rng(mix_seed({0xA57A5ull, static_cast<std::uint64_t>(id)}));
    for (int s = 0; s < kRoutingScenarios; ++s) {
      UsageMap usage(g.edge_count());
      const double density = rng.uniform01();
      for (int e = 0; e < g.edge_count(); ++e) {
        if (rng.bernoulli(density)) usage[e] = static_cast<int>(rng.below(g.edge(e).max_cables + 1));
      }
      const int a = static_cast<int>(rng.below(g.node_count()));
      const int b = static_cast<int>(rng.below(g.node_count()));
      ++total;
      std::optional<double> x;
      std::optional<double> y;
      try {
        x = marginal_cost_astar(g, usage, a, b).marginal_cost;
      } catch (const SaturationError&) {
      }
      try {
        y = dijkstra_marginal(g, usage, a, b).marginal_cost;
      } catch (const SaturationError&) {
      }
      if (!x && !y) ++saturated;
      if (x == y) ++agree;
    }
  }
  const double took = seconds_since(t0);
  return {agree == total && took < kRoutingSeconds,
          format("%d/%d scenarios identical (%d saturated in both), %.1f s", agree, total,
                 saturated, took)};
}

Verdict kappa_schedule() {
  const std::vector<std::pair<long, int>> expected = {{0, 2},  {19, 2}, {20, 4}, {29, 4},
                                                      {30, 6}, {39, 6}, {40, 8}, {1000000, 8}};
  int ok = 0;
  for (const auto& [st, k] : expected) ok += set_kappa(st) == k ? 1 : 0;
  return {ok == static_cast<int>(expected.size()),
          format("%d/%zu stagnation counts map to the expected size", ok, expected.size())};
}

struct Case1Runs {
  std::vector<RunOutput> mvns;  // seeds 1..kSharingSeeds
  std::vector<double> relation_only;
  double slowest = 0.0;
};

Verdict sharing(const Instance& inst, Case1Runs& runs, AuditLog& audit) {
  const DistanceMatrix d = station_distances(inst);
  const ExperimentConfig cfg = benchmark_config();
  for (int seed = 1; seed <= kSharingSeeds; ++seed) {
    try {
      RunOutput out = run_method(inst, 1, Method::kMvns, seed, cfg);
      audit.note(out, inst);
      runs.relation_only.push_back(relation_only_cost(*out.connectivity, d));
      runs.slowest = std::max(runs.slowest, out.record.runtime_s);
      runs.mvns.push_back(std::move(out));
    } catch (const std::exception& e) {
      audit.error(e.what());
      return {false, format("seed %d failed: %s", seed, e.what())};
    }
  }
  std::vector<double> costs;
  for (const RunOutput& r : runs.mvns) costs.push_back(r.record.cost);
  const double f2 = mean(costs);
  const double rel = mean(runs.relation_only);
  const double below = (rel - f2) / rel;
  return {below >= kSharingMargin && runs.slowest <= kRunSeconds,
          format("mean MVNS %.2f vs relation-only HGS %.2f: %.1f%% below (need %.0f%%), "
                 "slowest run %.1f s",
                 f2, rel, below * 100, kSharingMargin * 100, runs.slowest)};
}

Verdict ordering(const Instance& case1, const Case1Runs& runs, AuditLog& audit) {
  const ExperimentConfig cfg = benchmark_config();
  std::vector<double> mvns;
  for (int i = 0; i < kOrderingSeeds; ++i) mvns.push_back(runs.mvns[i].record.cost);
  double best_sns = 0.0;
  int best_which = 0;
  std::string sns_means;
  for (Method m : {Method::kSns1, Method::kSns2, Method::kSns3}) {
    std::vector<double> costs;
    for (int seed = 1; seed <= kOrderingSeeds; ++seed) {
      try {
        const RunOutput out = run_method(case1, 1, m, seed, cfg);
        audit.note(out, case1);
        costs.push_back(out.record.cost);
      } catch (const std::exception& e) {
        audit.error(e.what());
        return {false, format("%s seed %d failed: %s", to_string(m).c_str(), seed, e.what())};
      }
    }
    const double mu = mean(costs);
    sns_means += format(" %s %.2f", to_string(m).c_str(), mu);
    if (best_which == 0 || mu < best_sns) {
      best_sns = mu;
      best_which = static_cast<int>(m);
    }
  }
  const bool search_ok = mean(mvns) <= kOrderingSlack * best_sns;

  bool baseline_ok = true;
  std::string baselines;
  for (int id : {1, 2}) {
    const Instance inst = id == 1 ? case1 : builtin_case(id);
    const DistanceMatrix d = station_distances(inst);
    const double mcws = relation_only_cost(mcws_baseline(inst, d), d);
    std::vector<double> hgs;
    for (int seed = 1; seed <= kOrderingSeeds; ++seed) {
      if (id == 1) {
        hgs.push_back(runs.relation_only[seed - 1]);
      } else {
        hgs.push_back(run_method(inst, id, Method::kHgs, seed, cfg).record.cost);
      }
    }
    baseline_ok = baseline_ok && mcws >= mean(hgs);
    baselines += format("; case %d MCWS %.2f HGS %.2f", id, mcws, mean(hgs));
  }
  return {search_ok && baseline_ok,
          format("MVNS %.2f vs best SNS %.2f (limit x%.2f;%s)%s", mean(mvns), best_sns,
                 kOrderingSlack, sns_means.c_str(), baselines.c_str())};
}

Verdict feasibility(const AuditLog& audit) {
  return {audit.failures == 0 && audit.runs > 0,
          format("%d audited runs, %d with problems%s%s, max relative cost drift %.2e", audit.runs,
                 audit.failures, audit.first_problem.empty() ? "" : ": ",
                 audit.first_problem.c_str(), audit.max_rel_error)};
}

Verdict determinism(const Instance& inst, const Case1Runs& runs) {
  const RunOutput& ref = runs.mvns.front();
  const std::string expected = trace_csv(*ref.trace);
  int identical = 0;
  std::string threads;
  for (int t : {1, 4}) {
    ExperimentConfig cfg = benchmark_config();
    cfg.search.threads = t;
    const RunOutput again = run_method(inst, 1, Method::kMvns, ref.record.seed, cfg);
    if (trace_csv(*again.trace) == expected && again.solution == ref.solution) ++identical;
    threads += format(" %d", t);
  }
  return {identical == 2,
          format("%d/2 reruns (threads%s) byte-identical to the first run's %zu-byte trace",
                 identical, threads.c_str(), expected.size())};
}

Verdict gap_arithmetic() {
  const std::vector<std::pair<Method, double>> table = {
      {Method::kMcws, 3787.80}, {Method::kHgs, 3244.40},  {Method::kSns1, 2559.75},
      {Method::kSns2, 2582.91}, {Method::kSns3, 2535.95}, {Method::kMvns, 2481.42},
      {Method::kLmvns, 2489.23}};
  const std::vector<double> gaps = {52.65, 30.75, 3.16, 4.09, 2.20, 0.00, 0.31};
  std::vector<RunRecord> records;
  for (const auto& [m, c] : table) {
    RunRecord r;
    r.method = m;
    r.cost = c;
    records.push_back(r);
  }
  const std::vector<StatSummary> s = summarize(records);
  double worst = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    worst = std::max(worst, std::abs(s[i].gap_percent - gaps[i]));
  }
  return {worst <= kGapTolerance, format("largest deviation from the published gaps %.4f", worst)};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  };

  const Instance case1 = builtin_case(1);
  Case1Runs runs;
  AuditLog audit;

  report(1, "toy optimality", toy_optimality);
  report(2, "A* matches Dijkstra", astar_correctness);
  report(3, "perturbation schedule", kappa_schedule);
  report(4, "sharing beats no sharing", [&] { return sharing(case1, runs, audit); });
  report(5, "method ordering", [&] {
    if (runs.mvns.size() < kOrderingSeeds) return Verdict{false, "needs the criterion 4 runs"};
    return ordering(case1, runs, audit);
  });
  report(6, "feasibility audit", [&] { return feasibility(audit); });
  report(7, "determinism", [&] {
    if (runs.mvns.empty()) return Verdict{false, "needs the criterion 4 runs"};
    return determinism(case1, runs);
  });
  report(8, "gap arithmetic", gap_arithmetic);

  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
