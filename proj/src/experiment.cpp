#include "cablerouting/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cablerouting/learned_sampler.hpp"

namespace cablerouting {

namespace {

struct MethodName {
  Method method;
  const char* name;
};

constexpr MethodName kMethodNames[] = {
    {Method::kMcws, "mcws"}, {Method::kHgs, "hgs"},   {Method::kSns1, "sns1"},
    {Method::kSns2, "sns2"}, {Method::kSns3, "sns3"}, {Method::kMvns, "mvns"},
    {Method::kLmvns, "lmvns"},
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExperimentError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string to_string(Method method) {
  for (const MethodName& m : kMethodNames) {
    if (m.method == method) return m.name;
  }
  return "?";
}

Method method_from_string(const std::string& text) {
  for (const MethodName& m : kMethodNames) {
    if (text == m.name) return m.method;
  }
  throw std::invalid_argument("unknown method '" + text + "'");
}

bool is_path_aware(Method method) { return method != Method::kMcws && method != Method::kHgs; }

RunOutput run_method(const Instance& inst, int case_id, Method method, std::uint64_t seed,
                     const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  RunRecord& rec = out.record;
  rec.method = method;
  rec.instance = inst.name;
  rec.case_id = case_id;
  rec.seed = seed;

  const DistanceMatrix d = station_distances(inst);
  if (method == Method::kMcws) {
    out.connectivity = mcws_baseline(inst, d);
  } else {
    HgsConfig hgs = cfg.hgs;
    hgs.seed = seed;
    out.connectivity = solve_connectivity_hgs(inst, d, hgs);
  }
  if (!is_path_aware(method)) {
    rec.cost = relation_only_cost(*out.connectivity, d);
    rec.init_cost = rec.cost;
  } else {
    Solution init = realize_routes(*out.connectivity, inst);
    rec.init_cost = evaluate_f2(init, inst.graph).total;
    SearchConfig search = cfg.search;
    search.seed = seed;
    SearchResult result;
    if (method == Method::kLmvns) {
      if (cfg.agent_command.empty()) {
        throw ExperimentError("lmvns needs an agent command (--agent-cmd)");
      }
      LearnedSamplerOptions opt;
      opt.command = cfg.agent_command;
      opt.mix_probability = cfg.mix_probability;
      opt.timeout = cfg.agent_timeout;
      opt.operators = search.operators;
      opt.strict = true;
      LearnedSampler sampler(inst, init, opt);
      result = mvns_search(inst, init, search, sampler);
      sampler.shutdown();
    } else if (method == Method::kMvns) {
      result = mvns_search(inst, init, search);
    } else {
      const int which = method == Method::kSns1 ? 1 : method == Method::kSns2 ? 2 : 3;
      result = sns_search(inst, init, search, which);
    }
    rec.cost = result.cost.total;
    rec.wins = result.trace.wins;
    rec.accepted = result.trace.accepted_count();
    out.solution = std::move(result.best);
    out.trace = std::move(result.trace);
  }
  rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (cfg.artifact_dir) {
    const std::string stem = inst.name + "-" + to_string(method) + "-s" + std::to_string(seed);
    if (out.trace) {
      const auto path = *cfg.artifact_dir / (stem + ".trace.csv");
      write_file(path, trace_csv(*out.trace));
      rec.trace_path = path.string();
    }
    if (out.solution) {
      write_file(*cfg.artifact_dir / (stem + ".solution.json"),
                 serialize_solution(*out.solution, inst));
    }
  }
  return out;
}

std::vector<RunRecord> run_experiment(const Instance& inst, int case_id, Method method, int n_runs,
                                      std::uint64_t base_seed, const ExperimentConfig& cfg) {
  if (n_runs < 1) throw std::invalid_argument("need at least one run");
  std::vector<RunRecord> records;
  for (int r = 0; r < n_runs; ++r) {
    records.push_back(run_method(inst, case_id, method, base_seed + r, cfg).record);
  }
  return records;
}

std::vector<StatSummary> summarize(std::span<const RunRecord> records) {
  std::vector<StatSummary> out;
  std::map<std::string, std::vector<double>> costs;
  for (const RunRecord& r : records) {
    const std::string m = to_string(r.method);
    if (!costs.contains(m)) out.push_back({m});
    costs[m].push_back(r.cost);
  }
  for (StatSummary& s : out) {
    const std::vector<double>& c = costs[s.method];
    s.runs = static_cast<int>(c.size());
    double sum = 0.0;
    for (double v : c) sum += v;
    s.mean = sum / s.runs;
    double sq = 0.0;
    for (double v : c) sq += (v - s.mean) * (v - s.mean);
    s.variance = sq / s.runs;
  }
  if (out.empty()) return out;
  const auto best = std::min_element(out.begin(), out.end(),
                                     [](const auto& a, const auto& b) { return a.mean < b.mean; });
  for (StatSummary& s : out) {
    s.gap_percent = (s.mean - best->mean) / best->mean * 100.0;
    s.best = s.mean == best->mean;
  }
  return out;
}

OperatorStats operator_stats(const SearchTrace& trace) {
  OperatorStats s;
  for (const IterationRecord& r : trace.iterations) {
    if (r.accepted_op == 0) continue;
    ++s.wins[r.accepted_op - 1];
    ++s.accepted;
  }
  return s;
}

std::string runs_csv(std::span<const RunRecord> records) {
  std::ostringstream out;
  out << "method,instance,case,seed,cost,init_cost,runtime_s,wins_d1,wins_d2,wins_d3,accepted,"
         "trace_path\n";
  for (const RunRecord& r : records) {
    out << to_string(r.method) << ',' << r.instance << ',' << r.case_id << ',' << r.seed << ','
        << num(r.cost) << ',' << num(r.init_cost) << ',' << num(r.runtime_s) << ',' << r.wins[0]
        << ',' << r.wins[1] << ',' << r.wins[2] << ',' << r.accepted << ',' << r.trace_path
        << '\n';
  }
  return out.str();
}

std::string summary_csv(std::span<const StatSummary> summary) {
  std::ostringstream out;
  out << "method,runs,mean,variance,gap_percent,best\n";
  for (const StatSummary& s : summary) {
    char gap[32];
    std::snprintf(gap, sizeof gap, "%.2f", s.gap_percent);
    out << s.method << ',' << s.runs << ',' << num(s.mean) << ',' << num(s.variance) << ',' << gap
        << ',' << (s.best ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string operator_stats_csv(std::span<const OperatorStats> stats) {
  std::ostringstream out;
  out << "method,instance,seed,d1,d2,d3,accepted\n";
  for (const OperatorStats& s : stats) {
    out << s.method << ',' << s.instance << ',' << s.seed << ',' << s.wins[0] << ',' << s.wins[1]
        << ',' << s.wins[2] << ',' << s.accepted << '\n';
  }
  return out.str();
}

SweepParameter sweep_parameter_from_string(const std::string& text) {
  if (text == "init_time") return SweepParameter::kInitTime;
  if (text == "neighborhood_size") return SweepParameter::kNeighborhoodSize;
  throw std::invalid_argument("unknown sweep parameter '" + text + "'");
}

std::vector<SweepRow> sweep(const Instance& inst, int case_id, SweepParameter parameter,
                            std::span<const std::string> values, int n_runs,
                            std::uint64_t base_seed, const ExperimentConfig& cfg) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const std::string& v : values) {
    ExperimentConfig c = cfg;
    if (parameter == SweepParameter::kInitTime) {
      c.hgs.budget = InitBudget::parse(v);
    } else {
      std::size_t used = 0;
      int n = 0;
      try {
        n = std::stoi(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != v.size() || n < 1) throw std::invalid_argument("bad neighborhood size '" + v + "'");
      c.search.neighbors = n;
    }
    for (const RunRecord& r : run_experiment(inst, case_id, Method::kMvns, n_runs, base_seed, c)) {
      rows.push_back({v, r});
    }
  }
  return rows;
}

std::string sweep_csv(SweepParameter parameter, std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "parameter,value,seed,cost,init_cost,runtime_s\n";
  const char* name = parameter == SweepParameter::kInitTime ? "init_time" : "neighborhood_size";
  for (const SweepRow& r : rows) {
    out << name << ',' << r.value << ',' << r.record.seed << ',' << num(r.record.cost) << ','
        << num(r.record.init_cost) << ',' << num(r.record.runtime_s) << '\n';
  }
  return out.str();
}

}  // namespace cablerouting
