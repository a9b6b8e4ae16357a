#include "cablerouting/mvns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace cablerouting {

namespace {

// Improvements smaller than this are rounding noise, not progress.
constexpr double kImprovementEps = 1e-9;
constexpr double kAuditTolerance = 1e-9;
constexpr std::uint64_t kMixStreamTag = 0x6d6978;

}  // namespace

int KappaSchedule::operator()(long st) const {
  int kappa = steps.empty() ? 1 : steps.front().kappa;
  for (const Step& s : steps) {
    if (st >= s.from_st) kappa = s.kappa;
  }
  return kappa;
}

int set_kappa(long st) {
  if (st < 0) throw std::invalid_argument("stagnation count must be non-negative");
  static const KappaSchedule schedule;
  return schedule(st);
}

std::string to_string(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::kUniform:
      return "uniform";
    case SamplerMode::kLearned:
      return "learned";
    case SamplerMode::kMixed:
      return "mixed";
  }
  return "uniform";
}

SamplerMode sampler_mode_from_string(const std::string& text) {
  if (text == "uniform") return SamplerMode::kUniform;
  if (text == "learned") return SamplerMode::kLearned;
  if (text == "mixed") return SamplerMode::kMixed;
  throw std::invalid_argument("unknown sampler mode '" + text + "'");
}

SampledLoci UniformSampler::sample(const Solution& incumbent, int op, int kappa, Rng& loci_rng,
                                   Rng& /*mix_rng*/) const {
  return {sample_locs_uniform(incumbent, op, kappa, loci_rng), false};
}

int SearchTrace::accepted_count() const {
  int n = 0;
  for (const IterationRecord& r : iterations) n += r.accepted_op != 0 ? 1 : 0;
  return n;
}

std::string trace_csv(const SearchTrace& trace) {
  std::ostringstream out;
  out << "iteration,best_cost,kappa,st,accepted_op\n";
  char buf[64];
  for (const IterationRecord& r : trace.iterations) {
    std::snprintf(buf, sizeof buf, "%.17g", r.best_cost);
    out << r.iteration << ',' << buf << ',' << r.kappa << ',' << r.st << ',' << r.accepted_op
        << '\n';
  }
  return out.str();
}

SearchTrace parse_trace_csv(const std::string& text) {
  SearchTrace trace;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("iteration,best_cost,kappa,st,accepted_op", 0) != 0) {
    throw std::invalid_argument("not a trace file: missing header");
  }
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    IterationRecord r;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%d,%lf,%d,%ld,%d%c", &r.iteration, &r.best_cost, &r.kappa,
                    &r.st, &r.accepted_op, &tail) != 5 ||
        r.accepted_op < 0 || r.accepted_op > 3) {
      throw std::invalid_argument("bad trace row " + std::to_string(row));
    }
    if (r.accepted_op != 0) ++trace.wins[r.accepted_op - 1];
    trace.iterations.push_back(r);
  }
  return trace;
}

namespace {

struct Candidate {
  CandidateOutcome outcome;
  std::optional<SearchState> state;
};

Candidate build_candidate(const Instance& inst, const SearchState& incumbent, int op, int neighbor,
                          int iteration, int kappa, const SearchConfig& cfg,
                          const LociSampler& sampler) {
  Candidate c;
  c.outcome.op = op;
  c.outcome.neighbor = neighbor;
  const auto it = static_cast<std::uint64_t>(iteration);
  const auto o = static_cast<std::uint64_t>(op);
  const auto nb = static_cast<std::uint64_t>(neighbor);
  Rng rng(mix_seed({cfg.seed, it, o, nb}));
  Rng mix(mix_seed({cfg.seed, it, o, nb, kMixStreamTag}));

  SampledLoci sampled = sampler.sample(incumbent.solution, op, kappa, rng, mix);
  c.outcome.learned = sampled.learned;
  if (!sampled.loci) return c;
  c.outcome.loci = sampled.loci;

  SearchState partial = destroy(incumbent, *sampled.loci, inst);
  std::optional<SearchState> repaired = repair(std::move(partial), inst, rng);
  if (!repaired) return c;
  if (!check_feasible(repaired->solution, inst).empty()) return c;
  c.outcome.cost = repaired->cost.total;
  c.state = std::move(repaired);
  return c;
}

void audit_state(const SearchState& s, const Instance& inst, SearchTrace& trace) {
  if (const auto v = check_feasible(s.solution, inst); !v.empty()) {
    throw SearchError("audit: incumbent infeasible: " + describe(v.front()));
  }
  const UsageMap fresh = usage_map(s.solution, inst.graph);
  if (!(fresh == s.usage)) throw SearchError("audit: incremental usage map diverged");
  const CostBreakdown cost = evaluate_usage(fresh, inst.graph);
  const double rel = std::abs(cost.total - s.cost.total) / std::max(1.0, std::abs(cost.total));
  trace.audit_max_rel_error = std::max(trace.audit_max_rel_error, rel);
  ++trace.audits;
  if (rel > kAuditTolerance) throw SearchError("audit: incremental cost diverged");
}

}  // namespace

SearchResult mvns_search(const Instance& inst, const Solution& init, const SearchConfig& cfg,
                         LociSampler& sampler) {
  if (cfg.neighbors < 1) throw std::invalid_argument("neighborhood size must be at least 1");
  if (cfg.iterations < 0) throw std::invalid_argument("iteration count must be non-negative");
  if (const auto v = check_feasible(init, inst); !v.empty()) {
    throw SearchError("initial solution is infeasible: " + describe(v.front()));
  }

  SearchState best = SearchState::from_solution(init, inst.graph);
  SearchTrace trace;
  trace.initial_cost = best.cost.total;
  if (cfg.audit) audit_state(best, inst, trace);

  std::vector<int> ops;
  for (int op = 1; op <= 3; ++op) {
    if (cfg.operators[op - 1]) ops.push_back(op);
  }
  // Neighbor-major, operator-minor, as the candidates are enumerated.
  struct Task {
    int op;
    int neighbor;
  };
  std::vector<Task> tasks;
  for (int n = 0; n < cfg.neighbors; ++n) {
    for (int op : ops) tasks.push_back({op, n});
  }
  const int workers = std::max(1, std::min<int>(cfg.threads, static_cast<int>(tasks.size())));

  long st = 0;
  std::vector<Candidate> candidates(tasks.size());
  for (int t = 0; t < cfg.iterations; ++t) {
    const int kappa = cfg.kappa(st);
    sampler.begin_iteration(best.solution, t, kappa);

    auto run = [&](std::size_t i) {
      candidates[i] = build_candidate(inst, best, tasks[i].op, tasks[i].neighbor, t, kappa, cfg,
                                      sampler);
    };
    if (workers == 1) {
      for (std::size_t i = 0; i < tasks.size(); ++i) run(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < tasks.size(); i = next++) run(i);
        });
      }
    }

    // Reduction in (operator, neighbor) order; ties keep the earlier one.
    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(tasks[a].op, tasks[a].neighbor) < std::pair(tasks[b].op, tasks[b].neighbor);
    });
    std::optional<std::size_t> pick;
    for (std::size_t i : order) {
      const Candidate& c = candidates[i];
      ++trace.candidates;
      if (c.outcome.learned) ++trace.learned_candidates;
      if (!c.outcome.loci) {
        ++trace.skipped;
        continue;
      }
      if (!c.outcome.cost) {
        ++trace.discarded;
        continue;
      }
      if (!pick || *c.outcome.cost < *candidates[*pick].outcome.cost) pick = i;
    }

    std::vector<CandidateOutcome> outcomes;
    outcomes.reserve(candidates.size());
    for (const Candidate& c : candidates) outcomes.push_back(c.outcome);
    const double before = best.cost.total;
    sampler.end_iteration(outcomes, before);

    IterationRecord rec;
    rec.iteration = t;
    rec.kappa = kappa;
    rec.st = st;  // the count kappa was derived from
    if (pick && *candidates[*pick].outcome.cost < before - kImprovementEps) {
      rec.accepted_op = candidates[*pick].outcome.op;
      ++trace.wins[rec.accepted_op - 1];
      best = std::move(*candidates[*pick].state);
      st = 0;
      if (cfg.audit) audit_state(best, inst, trace);
    } else {
      ++st;
    }
    rec.best_cost = best.cost.total;
    trace.iterations.push_back(rec);
  }

  return {std::move(best.solution), best.cost, std::move(trace)};
}

SearchResult mvns_search(const Instance& inst, const Solution& init, const SearchConfig& cfg) {
  UniformSampler sampler;
  return mvns_search(inst, init, cfg, sampler);
}

SearchResult sns_search(const Instance& inst, const Solution& init, const SearchConfig& cfg,
                        int which, LociSampler& sampler) {
  if (which < 1 || which > 3) throw std::invalid_argument("operator must be 1, 2 or 3");
  SearchConfig single = cfg;
  single.operators = {which == 1, which == 2, which == 3};
  single.neighbors = cfg.neighbors * 3;
  return mvns_search(inst, init, single, sampler);
}

SearchResult sns_search(const Instance& inst, const Solution& init, const SearchConfig& cfg,
                        int which) {
  UniformSampler sampler;
  return sns_search(inst, init, cfg, which, sampler);
}

}  // namespace cablerouting
