#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cablerouting/agent_process.hpp"
#include "cablerouting/bridge.hpp"
#include "cablerouting/mvns.hpp"

namespace cablerouting {

struct LearnedSamplerOptions {
  std::string command;
  // Probability that a candidate uses the agent's proposal; 1 gives the
  // pure learned sampler.
  double mix_probability = 0.7;
  std::chrono::milliseconds timeout = AgentProcess::kDefaultTimeout;
  std::array<bool, 3> operators{true, true, true};
  // Throw on agent failure instead of degrading to uniform sampling.
  bool strict = false;
};

struct LearnedSamplerStats {
  long proposals = 0;           // valid proposals received
  long rejected_proposals = 0;  // failed validation
  long timeouts = 0;
  long agent_errors = 0;
  long learned_draws = 0;       // candidates whose loci came from a proposal
  long fallback_draws = 0;      // proposal unusable for the candidate, uniform loci used
  long observe_frames = 0;
  bool degraded = false;        // some agent died; its operator samples uniformly
};

// Runs one agent process per enabled operator. Each iteration the incumbent
// is encoded once and every agent is asked for a proposal; candidates then
// pick learned or uniform loci with their own Bernoulli stream. Rewards are
// reported for learned candidates only.
class LearnedSampler : public LociSampler {
 public:
  LearnedSampler(const Instance& instance, const Solution& init, LearnedSamplerOptions options);
  ~LearnedSampler() override;

  void begin_iteration(const Solution& incumbent, int iteration, int kappa) override;
  SampledLoci sample(const Solution& incumbent, int op, int kappa, Rng& loci_rng,
                     Rng& mix_rng) const override;
  void end_iteration(std::span<const CandidateOutcome> outcomes, double best_cost) override;

  LearnedSamplerStats stats() const;
  // Stops the agents; returns false if any of them had to be killed.
  bool shutdown();

 private:
  void fail(int op, const std::exception& e, bool fatal);

  const Instance& instance_;
  LearnedSamplerOptions options_;
  std::array<std::unique_ptr<AgentProcess>, 3> agents_;
  StateTensor state_;
  int kappa_ = 0;
  std::array<std::optional<std::vector<double>>, 3> probs_;
  LearnedSamplerStats stats_;
  mutable std::atomic<long> learned_draws_{0};
  mutable std::atomic<long> fallback_draws_{0};
};

}  // namespace cablerouting
