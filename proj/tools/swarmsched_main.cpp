#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "swarmsched/experiment.hpp"
#include "swarmsched/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

swarmsched::WorkloadGenParams load_gen_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw swarmsched::ConfigError("params: cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw swarmsched::ConfigError("params: " + path + ": " + e.what());
  }

  swarmsched::WorkloadGenParams p;
  p.task_count = doc.value("task_count", p.task_count);
  p.pe_exp_min = doc.value("pe_exponent_min", p.pe_exp_min);
  p.pe_exp_max = doc.value("pe_exponent_max", p.pe_exp_max);
  p.per_pe_length_min = doc.value("per_pe_length_min", p.per_pe_length_min);
  p.per_pe_length_max = doc.value("per_pe_length_max", p.per_pe_length_max);
  if (doc.contains("arrival")) {
    const auto& arrival = doc["arrival"];
    const std::string model = arrival.value("model", "fixed");
    if (model == "fixed") {
      p.arrivals.kind = swarmsched::ArrivalModel::Kind::FixedInterval;
      p.arrivals.interval = arrival.value("interval", p.arrivals.interval);
    } else if (model == "memoryless") {
      p.arrivals.kind = swarmsched::ArrivalModel::Kind::Memoryless;
      p.arrivals.interval = arrival.value("mean_interarrival", p.arrivals.interval);
    } else {
      throw swarmsched::ConfigError("params: arrival.model must be 'fixed' or 'memoryless'");
    }
  }
  if (doc.contains("batch")) {
    p.batch_min = doc["batch"].value("min", p.batch_min);
    p.batch_max = doc["batch"].value("max", p.batch_max);
  }
  p.rng_seed = doc.value("rng_seed", p.rng_seed);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bin-LB-PSOGSA load-balancing scheduler benchmark"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a scheduling experiment from a config file");
  std::string run_config;
  std::string run_scheduler;
  std::optional<std::uint64_t> run_seed;
  std::string run_out;
  run->add_option("--config", run_config, "Experiment config or manifest JSON")->required();
  run->add_option("--scheduler", run_scheduler,
                  "Restrict to one scheduler (psogsa|pso|rr|greedy|random)");
  run->add_option("--seed", run_seed, "Restrict to one seed");
  run->add_option("--out", run_out, "Override the output directory");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic workload CSV");
  std::string gen_params;
  std::string gen_out = "workload.csv";
  gen->add_option("--params", gen_params, "Workload generator params JSON")->required();
  gen->add_option("--out", gen_out, "Output CSV path");

  // compare
  auto* compare = app.add_subcommand("compare", "Compare schedulers from a summary CSV");
  std::string compare_summary_path;
  compare->add_option("--summary", compare_summary_path, "summary.csv from a run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto cfg = swarmsched::load_experiment_config(run_config);
      if (!run_scheduler.empty()) {
        const auto kind = swarmsched::scheduler_kind_from_string(run_scheduler);
        std::erase_if(cfg.schedulers,
                      [&](const swarmsched::SchedulerSpec& s) { return s.kind != kind; });
        if (cfg.schedulers.empty()) {
          throw swarmsched::ConfigError("no configured scheduler of kind '" + run_scheduler +
                                        "'");
        }
      }
      if (run_seed) cfg.seeds = {*run_seed};
      if (!run_out.empty()) cfg.output_dir = run_out;
      const auto rows = swarmsched::run_experiment(cfg);
      std::cout << "wrote " << (rows.size() - cfg.schedulers.size()) << " runs to "
                << cfg.output_dir.string() << "\n";
      swarmsched::print_report(
          swarmsched::compare_summary(cfg.output_dir / "summary.csv"), std::cout);
    } else if (gen->parsed()) {
      const auto params = load_gen_params(gen_params);
      const auto tasks = swarmsched::generate_workload(params);
      swarmsched::save_workload(gen_out, tasks);
      std::cout << "wrote " << tasks.size() << " tasks to " << gen_out << "\n";
    } else if (compare->parsed()) {
      swarmsched::print_report(swarmsched::compare_summary(compare_summary_path), std::cout);
    }
  } catch (const swarmsched::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
