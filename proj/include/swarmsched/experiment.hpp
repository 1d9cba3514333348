#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swarmsched/baselines.hpp"
#include "swarmsched/psogsa.hpp"
#include "swarmsched/simulator.hpp"
#include "swarmsched/workload.hpp"

namespace swarmsched {

enum class SchedulerKind { Psogsa, Pso, RoundRobin, Greedy, Random };

std::string to_string(SchedulerKind kind);
SchedulerKind scheduler_kind_from_string(const std::string& name);

/// One scheduler under test. The swarm/pso blocks carry the optimizer
/// parameters; their rng_seed fields are ignored in experiments, where the
/// run seed takes over.
struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::Psogsa;
  std::string label;  // file-name tag; defaults to the kind string
  SwarmConfig swarm;
  PsoConfig pso;
};

struct ExperimentConfig {
  SimConfig sim;
  std::optional<WorkloadGenParams> generate;       // exactly one of these
  std::optional<std::filesystem::path> workload_file;
  std::vector<SchedulerSpec> schedulers;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "out";
};

/// Stateful simulator plug: optimizer-backed schedulers reseed per call from
/// (run seed, call index) so reschedules are independent but reproducible.
std::unique_ptr<MappingScheduler> make_scheduler(const SchedulerSpec& spec,
                                                 std::uint64_t seed);

/// Parses the experiment JSON (also accepts a previously written manifest).
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Serializes the fully resolved config; re-running from this manifest
/// reproduces every CSV byte for byte.
std::string experiment_manifest(const ExperimentConfig& cfg);

/// Workload for one run seed: the input file verbatim, or the generator
/// reseeded per run so every seed sees a fresh, shared-across-schedulers
/// instance.
std::vector<TaskSpec> workload_for_seed(const ExperimentConfig& cfg, std::uint64_t seed);

struct SummaryRow {
  std::string scheduler;
  std::string seed;  // decimal seed, or "median" for aggregate rows
  double time_avg_load = 0.0;
  double time_avg_speed = 0.0;
  double total_exec_time = 0.0;
  double makespan = 0.0;
  int completed = 0;
};

/// Runs every (scheduler, seed) pair; writes per-run time series, the
/// combined summary.csv and manifest.json into the output directory.
std::vector<SummaryRow> run_experiment(const ExperimentConfig& cfg);

double median(std::vector<double> values);

struct SchedulerMedians {
  std::string scheduler;
  double time_avg_load = 0.0;
  double time_avg_speed = 0.0;
  double total_exec_time = 0.0;
  double makespan = 0.0;
};

struct ComparisonReport {
  std::vector<SchedulerMedians> medians;   // input order
  std::optional<std::size_t> baseline;     // index of the psogsa entry
};

ComparisonReport compare_summary(const std::filesystem::path& summary_csv);
void print_report(const ComparisonReport& report, std::ostream& out);

/// Per-run rows parsed out of summary.csv (median rows skipped).
std::vector<SummaryRow> load_summary(const std::filesystem::path& summary_csv);

}  // namespace swarmsched
