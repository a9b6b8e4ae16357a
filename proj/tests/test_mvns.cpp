#include <doctest.h>

#include <numeric>

#include "cablerouting/initialization.hpp"
#include "cablerouting/mvns.hpp"
#include "oracles.hpp"
#include "toys.hpp"

using namespace cablerouting;

namespace {

const Instance& case1() {
  static const Instance inst = builtin_case(1);
  return inst;
}

const Solution& case1_init() {
  static const Solution s = [] {
    HgsConfig cfg;
    cfg.seed = 3;
    cfg.budget.iterations = 200;
    return realize_routes(solve_connectivity_hgs(case1(), station_distances(case1()), cfg),
                          case1());
  }();
  return s;
}

SearchConfig short_run(std::uint64_t seed, int iterations, int neighbors) {
  SearchConfig c;
  c.seed = seed;
  c.iterations = iterations;
  c.neighbors = neighbors;
  return c;
}

void check_trace_shape(const SearchTrace& t, double final_cost) {
  double prev = t.initial_cost;
  for (const IterationRecord& r : t.iterations) {
    CHECK(r.best_cost <= prev);
    if (r.accepted_op == 0) {
      CHECK(r.best_cost == prev);
    } else {
      CHECK(r.best_cost < prev);
    }
    prev = r.best_cost;
  }
  if (!t.iterations.empty()) CHECK(t.iterations.back().best_cost == final_cost);
  CHECK(t.wins[0] + t.wins[1] + t.wins[2] == t.accepted_count());
}

// Records what the search hands to the sampler hooks.
class RecordingSampler : public LociSampler {
 public:
  void begin_iteration(const Solution&, int iteration, int kappa) override {
    begins.push_back({iteration, kappa});
  }
  SampledLoci sample(const Solution& s, int op, int kappa, Rng& loci_rng,
                     Rng& mix_rng) const override {
    return uniform_.sample(s, op, kappa, loci_rng, mix_rng);
  }
  void end_iteration(std::span<const CandidateOutcome> outcomes, double best_cost) override {
    outcome_counts.push_back(static_cast<int>(outcomes.size()));
    best_costs.push_back(best_cost);
  }

  std::vector<std::pair<int, int>> begins;
  std::vector<int> outcome_counts;
  std::vector<double> best_costs;

 private:
  UniformSampler uniform_;
};

}  // namespace

TEST_CASE("an optimal toy never changes and the perturbation grows to its cap") {
  // h at node 0, a at node 1, b at node 3 on a 3x3 junction lattice. The
  // ring h,a,b,h with the a-b link routed through h is optimal.
  const Instance inst = toys::lattice_instance(2, {1, 3}, {0}, 1.0);
  Solution s;
  s.feeders.push_back(toys::feeder(inst, {2, 0, 1, 2},
                                   {toys::path(inst.graph, {0, 1}), toys::path(inst.graph, {1, 0, 3}),
                                    toys::path(inst.graph, {3, 0})}));
  REQUIRE(check_feasible(s, inst).empty());
  const double optimum = oracle::optimal_f2_single_hv(inst);
  REQUIRE(evaluate_f2(s, inst.graph).total == doctest::Approx(optimum).epsilon(1e-12));

  const SearchResult r = mvns_search(inst, s, short_run(7, 45, 3));
  CHECK(r.cost.total == evaluate_f2(s, inst.graph).total);
  REQUIRE(r.trace.iterations.size() == 45);
  for (const IterationRecord& rec : r.trace.iterations) {
    CHECK(rec.accepted_op == 0);
    CHECK(rec.st == rec.iteration);
    CHECK(rec.kappa == set_kappa(rec.st));
  }
  CHECK(r.trace.iterations[19].kappa == 2);
  CHECK(r.trace.iterations[20].kappa == 4);
  CHECK(r.trace.iterations[30].kappa == 6);
  CHECK(r.trace.iterations[40].kappa == 8);
}

TEST_CASE("case 1 search improves, stays feasible and keeps its bookkeeping") {
  SearchConfig cfg = short_run(1, 40, 4);
  cfg.audit = true;
  const SearchResult r = mvns_search(case1(), case1_init(), cfg);
  CHECK(r.trace.initial_cost == doctest::Approx(evaluate_f2(case1_init(), case1().graph).total));
  CHECK(r.cost.total < r.trace.initial_cost);
  CHECK(check_feasible(r.best, case1()).empty());
  CHECK(r.cost.total == doctest::Approx(evaluate_f2(r.best, case1().graph).total).epsilon(1e-9));
  check_trace_shape(r.trace, r.cost.total);
  CHECK(r.trace.audits == r.trace.accepted_count() + 1);
  CHECK(r.trace.audit_max_rel_error <= 1e-9);
  CHECK(r.trace.candidates == 40L * 4 * 3);

  // st resets on acceptance and otherwise counts up.
  long st = 0;
  for (const IterationRecord& rec : r.trace.iterations) {
    CHECK(rec.st == st);
    st = rec.accepted_op != 0 ? 0 : st + 1;
  }
}

TEST_CASE("search is reproducible and independent of the thread count") {
  SearchConfig cfg = short_run(5, 15, 3);
  const SearchResult a = mvns_search(case1(), case1_init(), cfg);
  const SearchResult b = mvns_search(case1(), case1_init(), cfg);
  cfg.threads = 3;
  const SearchResult c = mvns_search(case1(), case1_init(), cfg);
  CHECK(trace_csv(a.trace) == trace_csv(b.trace));
  CHECK(trace_csv(a.trace) == trace_csv(c.trace));
  CHECK(a.best == c.best);
  CHECK(a.trace.wins == c.trace.wins);

  cfg.seed = 6;
  const SearchResult d = mvns_search(case1(), case1_init(), cfg);
  CHECK(trace_csv(a.trace) != trace_csv(d.trace));
}

TEST_CASE("single-operator search on a one-feeder instance") {
  const Instance inst = toys::lattice_instance(3, {1, 2, 3, 7}, {0}, 1.0);
  const Solution init = realize_routes(Connectivity{{{4, 0, 1, 2, 3, 4}}}, inst);
  REQUIRE(check_feasible(init, inst).empty());
  const SearchConfig cfg = short_run(2, 5, 2);

  const SearchResult two = sns_search(inst, init, cfg, 2);
  CHECK(two.trace.candidates == 5L * 6);
  CHECK(two.trace.skipped == 0);
  CHECK(check_feasible(two.best, inst).empty());
  CHECK(two.trace.wins[0] == 0);
  CHECK(two.trace.wins[2] == 0);

  const SearchResult three = sns_search(inst, init, cfg, 3);
  CHECK(three.trace.skipped == three.trace.candidates);
  CHECK(three.best == init);
  CHECK(three.trace.accepted_count() == 0);

  CHECK_THROWS_AS(sns_search(inst, init, cfg, 4), std::invalid_argument);
}

TEST_CASE("sampler hooks see every iteration and candidate") {
  RecordingSampler sampler;
  const SearchResult r = mvns_search(case1(), case1_init(), short_run(4, 6, 2), sampler);
  REQUIRE(sampler.begins.size() == 6);
  for (int t = 0; t < 6; ++t) {
    CHECK(sampler.begins[t].first == t);
    CHECK(sampler.begins[t].second == r.trace.iterations[t].kappa);
    CHECK(sampler.outcome_counts[t] == 6);
  }
  CHECK(sampler.best_costs[0] == r.trace.initial_cost);
  for (int t = 1; t < 6; ++t) CHECK(sampler.best_costs[t] == r.trace.iterations[t - 1].best_cost);
}

TEST_CASE("the custom sampler path equals the default uniform search") {
  UniformSampler sampler;
  const SearchConfig cfg = short_run(8, 8, 2);
  CHECK(trace_csv(mvns_search(case1(), case1_init(), cfg, sampler).trace) ==
        trace_csv(mvns_search(case1(), case1_init(), cfg).trace));
}

TEST_CASE("infeasible start and bad settings are refused") {
  Solution broken = case1_init();
  broken.feeders[0].routes[0].reset();
  CHECK_THROWS_AS(mvns_search(case1(), broken, short_run(1, 1, 1)), SearchError);
  CHECK_THROWS_AS(mvns_search(case1(), case1_init(), short_run(1, 1, 0)), std::invalid_argument);
}

TEST_CASE("zero iterations return the start") {
  const SearchResult r = mvns_search(case1(), case1_init(), short_run(1, 0, 3));
  CHECK(r.best == case1_init());
  CHECK(r.trace.iterations.empty());
}

TEST_CASE("trace CSV round-trips") {
  const SearchResult r = mvns_search(case1(), case1_init(), short_run(2, 10, 2));
  const std::string csv = trace_csv(r.trace);
  CHECK(csv.rfind("iteration,best_cost,kappa,st,accepted_op\n", 0) == 0);
  const SearchTrace back = parse_trace_csv(csv);
  REQUIRE(back.iterations.size() == r.trace.iterations.size());
  for (std::size_t i = 0; i < back.iterations.size(); ++i) {
    CHECK(back.iterations[i].best_cost == r.trace.iterations[i].best_cost);
    CHECK(back.iterations[i].kappa == r.trace.iterations[i].kappa);
    CHECK(back.iterations[i].st == r.trace.iterations[i].st);
    CHECK(back.iterations[i].accepted_op == r.trace.iterations[i].accepted_op);
  }
  CHECK(back.wins == r.trace.wins);
  CHECK(trace_csv(back) == csv);
  CHECK(sampler_mode_from_string(to_string(SamplerMode::kMixed)) == SamplerMode::kMixed);
}
