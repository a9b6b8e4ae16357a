// Command-line front end: instance generation, single solves, multi-seed
// benchmarks, parameter sweeps and operator statistics.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cablerouting/experiment.hpp"
#include "cablerouting/initialization.hpp"
#include "cablerouting/instance.hpp"
#include "cablerouting/learned_sampler.hpp"
#include "cablerouting/mvns.hpp"

using namespace cablerouting;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitAgent = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceArgs {
  int case_id = -1;
  std::string path;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
  auto* c = cmd->add_option("--case", a.case_id, "Builtin case 0..4")->check(CLI::Range(0, 4));
  auto* i = cmd->add_option("--instance", a.path, "Instance file");
  c->excludes(i);
}

Instance load(const InstanceArgs& a) {
  if (!a.path.empty()) {
    std::vector<std::string> warnings;
    Instance inst = load_instance_file(a.path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return inst;
  }
  if (a.case_id < 0) throw UsageError("give --case or --instance");
  return builtin_case(a.case_id);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct SearchArgs {
  std::string init = "hgs";
  std::string init_budget = "2000";
  int iters = 600;
  int neighbors = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  bool audit = false;
  std::string agent_cmd;
  double mix_prob = 0.7;
  double agent_timeout = 10.0;
};

void add_search_options(CLI::App* cmd, SearchArgs& a) {
  cmd->add_option("--init", a.init, "Initial connectivity for the search modes")
      ->capture_default_str()
      ->check(CLI::IsMember({"hgs", "mcws"}));
  cmd->add_option("--init-budget", a.init_budget,
                  "Connectivity search budget: offspring count or seconds with an 's' suffix")
      ->capture_default_str();
  cmd->add_option("--iters", a.iters, "Search iterations")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  cmd->add_option("--neighbors", a.neighbors, "Candidates per operator per iteration")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", a.threads, "Worker threads for candidate evaluation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--audit", a.audit, "Recompute cost from scratch after every acceptance");
  cmd->add_option("--agent-cmd", a.agent_cmd, "Shell command starting an agent process");
  cmd->add_option("--mix-prob", a.mix_prob, "Share of candidates using agent proposals")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--agent-timeout", a.agent_timeout, "Seconds to wait for an agent reply")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

ExperimentConfig experiment_config(const SearchArgs& a) {
  ExperimentConfig cfg;
  cfg.hgs.budget = InitBudget::parse(a.init_budget);
  cfg.search.iterations = a.iters;
  cfg.search.neighbors = a.neighbors;
  cfg.search.threads = a.threads;
  cfg.search.audit = a.audit;
  cfg.agent_command = a.agent_cmd;
  cfg.mix_probability = a.mix_prob;
  cfg.agent_timeout = std::chrono::milliseconds(static_cast<long>(a.agent_timeout * 1000));
  return cfg;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::stringstream s(item);
    std::string part;
    while (std::getline(s, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

int run_gen(const InstanceArgs& ia, int grid, int mv, int hv, double block, std::uint64_t seed,
            const std::string& out) {
  Instance inst;
  if (ia.case_id >= 0) {
    inst = builtin_case(ia.case_id);
  } else {
    if (grid < 2 || mv < 1 || hv < 1) throw UsageError("give --case or --grid, --mv and --hv");
    inst = place_substations(generate_lattice(grid, block), mv, hv, seed);
  }
  write_text(out, serialize_instance(inst));
  return kExitOk;
}

int run_solve(const InstanceArgs& ia, const SearchArgs& sa, const std::string& mode,
              const std::string& sampler_name, const std::string& trace_path,
              const std::string& out_path) {
  const Instance inst = load(ia);
  ExperimentConfig cfg = experiment_config(sa);
  const DistanceMatrix d = station_distances(inst);

  std::cout << "instance " << inst.name << '\n' << "mode " << mode << '\n';
  if (mode == "mcws" || mode == "hgs") {
    Connectivity c;
    if (mode == "mcws") {
      c = mcws_baseline(inst, d);
    } else {
      cfg.hgs.seed = sa.seed;
      c = solve_connectivity_hgs(inst, d, cfg.hgs);
    }
    const Solution s = realize_routes(c, inst);
    std::cout << "feeders " << c.feeders.size() << '\n'
              << "link_length_km " << fmt(evaluate_f1(c, d)) << '\n'
              << "relation_only_cost " << fmt(relation_only_cost(c, d)) << '\n'
              << "routed_cost " << fmt(evaluate_f2(s, inst.graph).total) << '\n';
    if (!out_path.empty()) write_text(out_path, serialize_solution(s, inst));
    return kExitOk;
  }

  int which = 0;
  if (mode == "sns1") which = 1;
  if (mode == "sns2") which = 2;
  if (mode == "sns3") which = 3;

  cfg.hgs.seed = sa.seed;
  const Connectivity c =
      sa.init == "mcws" ? mcws_baseline(inst, d) : solve_connectivity_hgs(inst, d, cfg.hgs);
  const Solution init = realize_routes(c, inst);
  SearchConfig search = cfg.search;
  search.seed = sa.seed;
  search.sampler = sampler_mode_from_string(sampler_name);
  if (which != 0) search.operators = {which == 1, which == 2, which == 3};

  std::unique_ptr<LociSampler> sampler;
  LearnedSampler* learned = nullptr;
  if (search.sampler == SamplerMode::kUniform) {
    sampler = std::make_unique<UniformSampler>();
  } else {
    if (sa.agent_cmd.empty()) throw UsageError("--sampler " + sampler_name + " needs --agent-cmd");
    LearnedSamplerOptions opt;
    opt.command = sa.agent_cmd;
    opt.mix_probability = search.sampler == SamplerMode::kLearned ? 1.0 : sa.mix_prob;
    opt.timeout = cfg.agent_timeout;
    opt.operators = search.operators;
    auto ls = std::make_unique<LearnedSampler>(inst, init, opt);
    learned = ls.get();
    sampler = std::move(ls);
  }

  const SearchResult r = which == 0 ? mvns_search(inst, init, search, *sampler)
                                    : sns_search(inst, init, search, which, *sampler);
  const CostBreakdown& cost = r.cost;
  std::cout << "feeders " << r.best.feeders.size() << '\n'
            << "init_cost " << fmt(r.trace.initial_cost) << '\n'
            << "cost " << fmt(cost.total) << '\n'
            << "trench_cost " << fmt(cost.trench_cost) << '\n'
            << "cable_cost " << fmt(cost.cable_cost) << '\n'
            << "cable_length_km " << fmt(cost.total_cable_length) << '\n'
            << "accepted " << r.trace.accepted_count() << '\n'
            << "wins " << r.trace.wins[0] << ' ' << r.trace.wins[1] << ' ' << r.trace.wins[2]
            << '\n'
            << "candidates " << r.trace.candidates << " skipped " << r.trace.skipped
            << " discarded " << r.trace.discarded << '\n';
  if (sa.audit) {
    std::cout << "audits " << r.trace.audits << " max_rel_error " << r.trace.audit_max_rel_error
              << '\n';
  }
  if (learned) {
    const LearnedSamplerStats st = learned->stats();
    std::cout << "agent proposals " << st.proposals << " rejected " << st.rejected_proposals
              << " timeouts " << st.timeouts << " errors " << st.agent_errors << " learned "
              << st.learned_draws << " fallback " << st.fallback_draws << " degraded "
              << (st.degraded ? 1 : 0) << '\n';
    learned->shutdown();
  }
  if (!trace_path.empty()) write_text(trace_path, trace_csv(r.trace));
  if (!out_path.empty()) write_text(out_path, serialize_solution(r.best, inst));
  return kExitOk;
}

int run_bench(const std::vector<int>& cases, const std::vector<std::string>& methods, int runs,
              std::uint64_t base_seed, const SearchArgs& sa, const std::string& out_dir) {
  ExperimentConfig cfg = experiment_config(sa);
  std::vector<Method> ms;
  for (const std::string& m : split_list(methods)) ms.push_back(method_from_string(m));
  if (ms.empty()) throw UsageError("no methods given");
  if (!out_dir.empty()) cfg.artifact_dir = std::filesystem::path(out_dir) / "artifacts";

  std::vector<RunRecord> all;
  std::vector<OperatorStats> ops;
  std::string summaries;
  for (int case_id : cases) {
    const Instance inst = builtin_case(case_id);
    std::vector<RunRecord> records;
    for (Method m : ms) {
      for (int r = 0; r < runs; ++r) {
        RunOutput out = run_method(inst, case_id, m, base_seed + r, cfg);
        if (out.trace) {
          OperatorStats s = operator_stats(*out.trace);
          s.method = to_string(m);
          s.instance = inst.name;
          s.seed = out.record.seed;
          ops.push_back(s);
        }
        std::cerr << inst.name << ' ' << to_string(m) << " seed " << out.record.seed << " cost "
                  << fmt(out.record.cost) << '\n';
        records.push_back(out.record);
      }
    }
    const auto summary = summarize(records);
    std::cout << "case " << case_id << '\n' << summary_csv(summary);
    std::string csv = summary_csv(summary);
    const auto header_end = csv.find('\n') + 1;
    if (summaries.empty()) summaries = "case," + csv.substr(0, header_end);
    std::istringstream lines(csv.substr(header_end));
    for (std::string line; std::getline(lines, line);) {
      summaries += std::to_string(case_id) + "," + line + "\n";
    }
    all.insert(all.end(), records.begin(), records.end());
  }
  if (!out_dir.empty()) {
    const std::filesystem::path dir(out_dir);
    write_text((dir / "runs.csv").string(), runs_csv(all));
    write_text((dir / "summary.csv").string(), summaries);
    write_text((dir / "operator_stats.csv").string(), operator_stats_csv(ops));
  }
  return kExitOk;
}

int run_sweep(const InstanceArgs& ia, const std::string& param,
              const std::vector<std::string>& values, int runs, std::uint64_t base_seed,
              const SearchArgs& sa, const std::string& out) {
  const Instance inst = load(ia);
  const std::vector<std::string> vals = split_list(values);
  if (vals.empty()) throw UsageError("--values is empty");
  const SweepParameter p = sweep_parameter_from_string(param);
  const auto rows = sweep(inst, ia.case_id, p, vals, runs, base_seed, experiment_config(sa));
  write_text(out, sweep_csv(p, rows));
  return kExitOk;
}

int run_stats(const std::vector<std::string>& traces, const std::string& out) {
  std::vector<OperatorStats> all;
  for (const std::string& path : traces) {
    OperatorStats s = operator_stats(parse_trace_csv(read_text(path)));
    s.method = std::filesystem::path(path).filename().string();
    all.push_back(s);
  }
  write_text(out, operator_stats_csv(all));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cable routing with shared trenches: generation, solving and benchmarks"};
  app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
  app.require_subcommand(1);

  InstanceArgs gen_ia;
  int grid = 0;
  int mv = 0;
  int hv = 0;
  double block = 1.0;
  std::uint64_t gen_seed = kBuiltinSeed;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write an instance file");
  gen->add_option("--case", gen_ia.case_id, "Builtin case 0..4")->check(CLI::Range(0, 4));
  gen->add_option("--grid", grid, "Lattice blocks per side");
  gen->add_option("--mv", mv, "MV substations");
  gen->add_option("--hv", hv, "HV substations");
  gen->add_option("--block-km", block, "Block size in km")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generation seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  InstanceArgs solve_ia;
  SearchArgs solve_sa;
  std::string mode = "mvns";
  std::string sampler = "uniform";
  std::string trace_path;
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  add_instance_options(solve, solve_ia);
  add_search_options(solve, solve_sa);
  solve->add_option("--seed", solve_sa.seed, "Run seed")->capture_default_str();
  solve->add_option("--mode", mode, "Method")
      ->capture_default_str()
      ->check(CLI::IsMember({"mvns", "sns1", "sns2", "sns3", "hgs", "mcws"}));
  solve->add_option("--sampler", sampler, "Loci sampler")
      ->capture_default_str()
      ->check(CLI::IsMember({"uniform", "learned", "mixed"}));
  solve->add_option("--trace", trace_path, "Write the search trace CSV here");
  solve->add_option("--out", solve_out, "Write the solution file here");

  std::vector<int> bench_cases{1};
  std::vector<std::string> bench_methods{"mcws,hgs,sns1,sns2,sns3,mvns"};
  int bench_runs = 10;
  std::uint64_t bench_seed = 1;
  SearchArgs bench_sa;
  std::string bench_dir;
  auto* bench = app.add_subcommand("bench", "Multi-seed comparison of methods");
  bench->add_option("--cases", bench_cases, "Builtin cases")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::Range(0, 4));
  bench->add_option("--methods", bench_methods,
                    "mcws, hgs, sns1, sns2, sns3, mvns, lmvns (comma separated)")
      ->capture_default_str();
  bench->add_option("--runs", bench_runs, "Runs per method")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--base-seed", bench_seed, "Seed of the first run")->capture_default_str();
  add_search_options(bench, bench_sa);
  bench->add_option("--out-dir", bench_dir, "Directory for CSV files and artifacts");

  InstanceArgs sweep_ia;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  int sweep_runs = 10;
  std::uint64_t sweep_seed = 1;
  SearchArgs sweep_sa;
  std::string sweep_out;
  auto* sw = app.add_subcommand("sweep", "MVNS runs over one parameter");
  add_instance_options(sw, sweep_ia);
  sw->add_option("--param", sweep_param, "init_time or neighborhood_size")
      ->required()
      ->check(CLI::IsMember({"init_time", "neighborhood_size"}));
  sw->add_option("--values", sweep_values, "Comma separated values")->required();
  sw->add_option("--runs", sweep_runs, "Runs per value")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sw->add_option("--base-seed", sweep_seed, "Seed of the first run")->capture_default_str();
  add_search_options(sw, sweep_sa);
  sw->add_option("--out", sweep_out, "Output CSV (default stdout)");

  std::vector<std::string> stats_traces;
  std::string stats_out;
  auto* stats = app.add_subcommand("stats", "Operator win counts from trace files");
  stats->add_option("traces", stats_traces, "Trace CSV files")->required();
  stats->add_option("--out", stats_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return run_gen(gen_ia, grid, mv, hv, block, gen_seed, gen_out);
    if (*solve) return run_solve(solve_ia, solve_sa, mode, sampler, trace_path, solve_out);
    if (*bench) {
      return run_bench(bench_cases, bench_methods, bench_runs, bench_seed, bench_sa, bench_dir);
    }
    if (*sw) {
      return run_sweep(sweep_ia, sweep_param, sweep_values, sweep_runs, sweep_seed, sweep_sa,
                       sweep_out);
    }
    if (*stats) return run_stats(stats_traces, stats_out);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const AgentError& e) {
    std::cerr << "agent failure: " << e.what() << '\n';
    return kExitAgent;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ExperimentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
