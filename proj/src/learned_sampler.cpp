#include "cablerouting/learned_sampler.hpp"

#include <iostream>

namespace cablerouting {

namespace {

InstanceSummary summarize_instance(const Instance& inst) {
  InstanceSummary s;
  s.name = inst.name;
  s.nodes = inst.graph.node_count();
  s.hv = static_cast<int>(inst.hv_stations().size());
  s.mv = static_cast<int>(inst.mv_stations().size());
  s.capacity = inst.feeder_capacity;
  s.extent_km = inst.extent_km();
  return s;
}

}  // namespace

LearnedSampler::LearnedSampler(const Instance& instance, const Solution& init,
                               LearnedSamplerOptions options)
    : instance_(instance), options_(std::move(options)) {
  if (!(options_.mix_probability >= 0.0 && options_.mix_probability <= 1.0)) {
    throw std::invalid_argument("mixing probability must lie in [0, 1]");
  }
  if (options_.mix_probability == 0.0) return;  // never consulted
  state_ = encode_state(init, instance_);
  Frame hello;
  hello.type = FrameType::kInit;
  hello.instance = summarize_instance(instance_);
  hello.links = state_.links;
  hello.max_nodes = state_.max_nodes;
  for (int op = 1; op <= 3; ++op) {
    if (!options_.operators[op - 1]) continue;
    try {
      auto agent = std::make_unique<AgentProcess>(options_.command, options_.timeout);
      Frame reply = agent->request(hello);
      if (reply.type != FrameType::kReady) throw AgentError("agent did not answer init with ready");
      agents_[op - 1] = std::move(agent);
    } catch (const AgentError& e) {
      fail(op, e, true);
    }
  }
}

LearnedSampler::~LearnedSampler() { shutdown(); }

void LearnedSampler::fail(int op, const std::exception& e, bool fatal) {
  if (options_.strict) throw AgentError("agent for operator " + std::to_string(op) + ": " + e.what());
  auto& agent = agents_[op - 1];
  if (fatal || (agent && !agent->alive())) {
    if (!stats_.degraded) {
      std::cerr << "warning: agent for operator " << op << " unavailable (" << e.what()
                << "); sampling uniformly instead\n";
    }
    stats_.degraded = true;
    agent.reset();
  }
}

void LearnedSampler::begin_iteration(const Solution& incumbent, int /*iteration*/, int kappa) {
  probs_ = {};
  kappa_ = kappa;
  bool any = false;
  for (const auto& a : agents_) any = any || a;
  if (!any) return;
  state_ = encode_state(incumbent, instance_);
  for (int op = 1; op <= 3; ++op) {
    auto& agent = agents_[op - 1];
    if (!agent) continue;
    Frame req;
    req.type = FrameType::kPropose;
    req.op = op;
    req.kappa = kappa;
    req.links = state_.links;
    req.max_nodes = state_.max_nodes;
    req.state = state_.values;
    try {
      Frame reply = agent->request(std::move(req));
      if (reply.type != FrameType::kProposal) throw AgentError("expected a proposal frame");
      const std::string why = validate_proposal(reply.probs, state_.links);
      if (!why.empty()) {
        ++stats_.rejected_proposals;
        if (options_.strict) throw AgentError("invalid proposal: " + why);
        continue;
      }
      ++stats_.proposals;
      probs_[op - 1] = std::move(reply.probs);
    } catch (const AgentTimeout& e) {
      ++stats_.timeouts;
      fail(op, e, false);
    } catch (const AgentError& e) {
      ++stats_.agent_errors;
      fail(op, e, !agent->alive());
    }
  }
}

SampledLoci LearnedSampler::sample(const Solution& incumbent, int op, int kappa, Rng& loci_rng,
                                   Rng& mix_rng) const {
  const bool use_learned = mix_rng.bernoulli(options_.mix_probability);
  const auto& probs = probs_[op - 1];
  if (use_learned && probs) {
    ProposedLoci p = propose_loci(*probs, state_, incumbent, op, kappa, loci_rng);
    ++learned_draws_;
    if (p.fallback) ++fallback_draws_;
    return {std::move(p.loci), true};
  }
  if (use_learned) ++fallback_draws_;
  return {sample_locs_uniform(incumbent, op, kappa, loci_rng), false};
}

void LearnedSampler::end_iteration(std::span<const CandidateOutcome> outcomes, double best_cost) {
  for (const CandidateOutcome& c : outcomes) {
    if (!c.learned || !c.loci) continue;
    auto& agent = agents_[c.op - 1];
    if (!agent) continue;
    Frame obs;
    obs.type = FrameType::kObserve;
    obs.op = c.op;
    obs.links = state_.links;
    obs.max_nodes = state_.max_nodes;
    obs.state = state_.values;
    for (const LinkRef& l : c.loci->links) obs.loci.push_back(state_.row_of(l));
    obs.reward = c.cost ? reward(*c.cost, best_cost) : 0.0;
    try {
      agent->request(std::move(obs));
      ++stats_.observe_frames;
    } catch (const AgentTimeout& e) {
      ++stats_.timeouts;
      fail(c.op, e, false);
    } catch (const AgentError& e) {
      ++stats_.agent_errors;
      fail(c.op, e, !agent->alive());
    }
  }
}

LearnedSamplerStats LearnedSampler::stats() const {
  LearnedSamplerStats s = stats_;
  s.learned_draws = learned_draws_.load();
  s.fallback_draws = fallback_draws_.load();
  return s;
}

bool LearnedSampler::shutdown() {
  bool clean = true;
  for (auto& agent : agents_) {
    if (!agent) continue;
    if (agent->shutdown() != 0) clean = false;
    agent.reset();
  }
  return clean;
}

}  // namespace cablerouting
