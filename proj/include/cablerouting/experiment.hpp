#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cablerouting/initialization.hpp"
#include "cablerouting/instance.hpp"
#include "cablerouting/mvns.hpp"

namespace cablerouting {

enum class Method { kMcws, kHgs, kSns1, kSns2, kSns3, kMvns, kLmvns };

std::string to_string(Method method);
Method method_from_string(const std::string& text);
// Path-aware methods route explicitly and are scored with trench sharing.
bool is_path_aware(Method method);

struct ExperimentConfig {
  HgsConfig hgs;        // seed is replaced per run
  SearchConfig search;  // seed is replaced per run
  std::string agent_command;
  double mix_probability = 0.7;
  std::chrono::milliseconds agent_timeout = std::chrono::milliseconds(10000);
  // When set, traces and solutions are written below this directory.
  std::optional<std::filesystem::path> artifact_dir;
};

struct RunRecord {
  Method method = Method::kMvns;
  std::string instance;
  int case_id = -1;  // -1 for instances loaded from file
  std::uint64_t seed = 0;
  double cost = 0.0;
  double init_cost = 0.0;  // path-aware methods: cost of the realised start
  double runtime_s = 0.0;
  std::array<int, 3> wins{0, 0, 0};
  int accepted = 0;
  std::string trace_path;
};

struct RunOutput {
  RunRecord record;
  std::optional<Solution> solution;     // path-aware methods
  std::optional<Connectivity> connectivity;
  std::optional<SearchTrace> trace;
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One run. The HGS stage and the search both use `seed`. L-MVNS needs an
// agent command and refuses to fall back to uniform sampling.
RunOutput run_method(const Instance& instance, int case_id, Method method, std::uint64_t seed,
                     const ExperimentConfig& config);

// Runs with seeds base_seed .. base_seed + n_runs - 1.
std::vector<RunRecord> run_experiment(const Instance& instance, int case_id, Method method,
                                      int n_runs, std::uint64_t base_seed,
                                      const ExperimentConfig& config);

struct StatSummary {
  std::string method;
  int runs = 0;
  double mean = 0.0;
  double variance = 0.0;  // population
  double gap_percent = 0.0;
  bool best = false;
};

// Groups by method in order of first appearance; the gap is relative to the
// lowest mean.
std::vector<StatSummary> summarize(std::span<const RunRecord> records);

struct OperatorStats {
  std::string method;
  std::string instance;
  std::uint64_t seed = 0;
  std::array<int, 3> wins{0, 0, 0};
  int accepted = 0;
};

OperatorStats operator_stats(const SearchTrace& trace);

std::string runs_csv(std::span<const RunRecord> records);
std::string summary_csv(std::span<const StatSummary> summary);
std::string operator_stats_csv(std::span<const OperatorStats> stats);

enum class SweepParameter { kInitTime, kNeighborhoodSize };
SweepParameter sweep_parameter_from_string(const std::string& text);

struct SweepRow {
  std::string value;
  RunRecord record;
};

// MVNS runs for every value with the same seeds. Init-time values are budget
// strings ("10s", "2000"); neighborhood values are integers.
std::vector<SweepRow> sweep(const Instance& instance, int case_id, SweepParameter parameter,
                            std::span<const std::string> values, int n_runs,
                            std::uint64_t base_seed, const ExperimentConfig& config);
std::string sweep_csv(SweepParameter parameter, std::span<const SweepRow> rows);

}  // namespace cablerouting
