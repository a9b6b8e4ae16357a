#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cablerouting/instance.hpp"
#include "cablerouting/operators.hpp"
#include "cablerouting/rng.hpp"
#include "cablerouting/solution.hpp"

namespace cablerouting {

// Perturbation size by stagnation count: links removed per D1 candidate.
struct KappaSchedule {
  struct Step {
    int from_st;
    int kappa;
  };
  std::vector<Step> steps{{0, 2}, {20, 4}, {30, 6}, {40, 8}};

  int operator()(long st) const;
};

int set_kappa(long st);

enum class SamplerMode { kUniform, kLearned, kMixed };
std::string to_string(SamplerMode mode);
SamplerMode sampler_mode_from_string(const std::string& text);

struct SearchConfig {
  int neighbors = 10;  // N per operator
  int iterations = 600;
  std::uint64_t seed = 0;
  std::array<bool, 3> operators{true, true, true};
  KappaSchedule kappa;
  SamplerMode sampler = SamplerMode::kUniform;
  double mix_probability = 0.7;  // share of learned proposals in mixed mode
  int threads = 1;
  // After each acceptance: re-check feasibility and recompute usage and cost
  // from scratch against the incremental bookkeeping. Throws SearchError on
  // any mismatch.
  bool audit = false;
};

struct SampledLoci {
  std::optional<DestructionLoci> loci;
  bool learned = false;
};

struct CandidateOutcome {
  int op = 0;
  int neighbor = 0;
  bool learned = false;
  std::optional<DestructionLoci> loci;
  std::optional<double> cost;  // empty: skipped or discarded
};

// Source of destruction loci. sample() is called concurrently from worker
// threads and must only touch the two streams it is handed; per-iteration
// state is prepared in begin_iteration on the search thread.
class LociSampler {
 public:
  virtual ~LociSampler() = default;

  virtual void begin_iteration(const Solution& /*incumbent*/, int /*iteration*/, int /*kappa*/) {}
  virtual SampledLoci sample(const Solution& incumbent, int op, int kappa, Rng& loci_rng,
                             Rng& mix_rng) const = 0;
  // `best_cost` is the incumbent cost the candidates were generated from.
  virtual void end_iteration(std::span<const CandidateOutcome> /*outcomes*/,
                             double /*best_cost*/) {}
};

class UniformSampler : public LociSampler {
 public:
  SampledLoci sample(const Solution& incumbent, int op, int kappa, Rng& loci_rng,
                     Rng& mix_rng) const override;
};

struct IterationRecord {
  int iteration = 0;
  double best_cost = 0.0;
  int accepted_op = 0;  // 0: no improvement
  int kappa = 0;
  long st = 0;
};

struct SearchTrace {
  double initial_cost = 0.0;
  std::vector<IterationRecord> iterations;
  std::array<int, 3> wins{0, 0, 0};
  long candidates = 0;
  long skipped = 0;
  long discarded = 0;  // repair failure or infeasible
  long learned_candidates = 0;
  int audits = 0;
  double audit_max_rel_error = 0.0;

  int accepted_count() const;
};

// One row per iteration: iteration,best_cost,kappa,st,accepted_op.
std::string trace_csv(const SearchTrace& trace);
// Reads the rows back; counters other than the wins are not stored.
SearchTrace parse_trace_csv(const std::string& text);

struct SearchResult {
  Solution best;
  CostBreakdown cost;
  SearchTrace trace;
};

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Destroy-and-repair search. Each iteration builds N candidates per enabled
// operator from the incumbent and accepts the cheapest only if it strictly
// improves the best cost. The init solution must be fully routed and
// feasible.
SearchResult mvns_search(const Instance& instance, const Solution& init, const SearchConfig& config,
                         LociSampler& sampler);
SearchResult mvns_search(const Instance& instance, const Solution& init,
                         const SearchConfig& config);

// Single-operator variant with 3N neighbors so the candidate count matches
// the multi-operator search.
SearchResult sns_search(const Instance& instance, const Solution& init, const SearchConfig& config,
                        int which, LociSampler& sampler);
SearchResult sns_search(const Instance& instance, const Solution& init, const SearchConfig& config,
                        int which);

}  // namespace cablerouting
