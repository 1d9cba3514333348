#include "swarmsched/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace swarmsched {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

// --- schedulers -----------------------------------------------------------

class PsogsaScheduler final : public MappingScheduler {
 public:
  PsogsaScheduler(SwarmConfig cfg, std::string label, std::uint64_t seed)
      : cfg_(cfg), label_(std::move(label)), seed_(seed) {}

  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    SwarmConfig cfg = cfg_;
    cfg.rng_seed = mix_seed(seed_, calls_++);
    return run_psogsa(tasks, vms, cfg).mapping;
  }

  std::string name() const override { return label_; }

 private:
  SwarmConfig cfg_;
  std::string label_;
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
};

class PsoScheduler final : public MappingScheduler {
 public:
  PsoScheduler(PsoConfig cfg, std::string label, std::uint64_t seed)
      : cfg_(cfg), label_(std::move(label)), seed_(seed) {}

  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    PsoConfig cfg = cfg_;
    cfg.rng_seed = mix_seed(seed_, calls_++);
    return run_bin_pso(tasks, vms, cfg).mapping;
  }

  std::string name() const override { return label_; }

 private:
  PsoConfig cfg_;
  std::string label_;
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
};

class RoundRobinScheduler final : public MappingScheduler {
 public:
  explicit RoundRobinScheduler(std::string label) : label_(std::move(label)) {}
  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    return round_robin(tasks, vms);
  }
  std::string name() const override { return label_; }

 private:
  std::string label_;
};

class GreedyScheduler final : public MappingScheduler {
 public:
  explicit GreedyScheduler(std::string label) : label_(std::move(label)) {}
  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    return greedy_earliest_finish(tasks, vms);
  }
  std::string name() const override { return label_; }

 private:
  std::string label_;
};

class RandomScheduler final : public MappingScheduler {
 public:
  RandomScheduler(std::string label, std::uint64_t seed)
      : label_(std::move(label)), seed_(seed) {}
  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    return random_mapping(tasks, vms, mix_seed(seed_, calls_++));
  }
  std::string name() const override { return label_; }

 private:
  std::string label_;
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
};

// --- json helpers ----------------------------------------------------------

double get_number(const json& node, const char* key, double fallback) {
  if (!node.contains(key)) return fallback;
  if (!node[key].is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
  return node[key].get<double>();
}

int get_int(const json& node, const char* key, int fallback) {
  if (!node.contains(key)) return fallback;
  if (!node[key].is_number_integer()) {
    throw ConfigError(std::string("config: ") + key + " must be an integer");
  }
  return node[key].get<int>();
}

bool get_bool(const json& node, const char* key, bool fallback) {
  if (!node.contains(key)) return fallback;
  if (!node[key].is_boolean()) throw ConfigError(std::string("config: ") + key + " must be a bool");
  return node[key].get<bool>();
}

std::vector<VmSpec> parse_vms(const json& node) {
  std::vector<VmSpec> vms;
  if (node.is_array()) {
    int next_id = 0;
    for (const auto& item : node) {
      VmSpec vm;
      vm.id = get_int(item, "id", next_id);
      vm.pes = get_int(item, "pes", 2);
      vm.mips_per_pe = get_number(item, "mips_per_pe", 128.0);
      vms.push_back(vm);
      next_id = vm.id + 1;
    }
  } else if (node.is_object()) {
    const int count = get_int(node, "count", 5);
    if (count < 1) throw ConfigError("config: vms.count must be >= 1");
    for (int j = 0; j < count; ++j) {
      VmSpec vm;
      vm.id = j;
      vm.pes = get_int(node, "pes", 2);
      vm.mips_per_pe = get_number(node, "mips_per_pe", 128.0);
      vms.push_back(vm);
    }
  } else {
    throw ConfigError("config: sim.vms must be an array or {count, pes, mips_per_pe}");
  }
  return vms;
}

WorkloadGenParams parse_gen_params(const json& node) {
  WorkloadGenParams p;
  p.task_count = get_int(node, "task_count", p.task_count);
  p.pe_exp_min = get_int(node, "pe_exponent_min", p.pe_exp_min);
  p.pe_exp_max = get_int(node, "pe_exponent_max", p.pe_exp_max);
  p.per_pe_length_min = get_number(node, "per_pe_length_min", p.per_pe_length_min);
  p.per_pe_length_max = get_number(node, "per_pe_length_max", p.per_pe_length_max);
  if (node.contains("arrival")) {
    const auto& arrival = node["arrival"];
    const std::string model = arrival.value("model", "fixed");
    if (model == "fixed") {
      p.arrivals.kind = ArrivalModel::Kind::FixedInterval;
      p.arrivals.interval = get_number(arrival, "interval", p.arrivals.interval);
    } else if (model == "memoryless") {
      p.arrivals.kind = ArrivalModel::Kind::Memoryless;
      p.arrivals.interval = get_number(arrival, "mean_interarrival", p.arrivals.interval);
    } else {
      throw ConfigError("config: arrival.model must be 'fixed' or 'memoryless'");
    }
  }
  if (node.contains("batch")) {
    p.batch_min = get_int(node["batch"], "min", p.batch_min);
    p.batch_max = get_int(node["batch"], "max", p.batch_max);
  }
  if (node.contains("rng_seed")) p.rng_seed = node["rng_seed"].get<std::uint64_t>();
  return p;
}

json gen_params_to_json(const WorkloadGenParams& p) {
  json node;
  node["task_count"] = p.task_count;
  node["pe_exponent_min"] = p.pe_exp_min;
  node["pe_exponent_max"] = p.pe_exp_max;
  node["per_pe_length_min"] = p.per_pe_length_min;
  node["per_pe_length_max"] = p.per_pe_length_max;
  if (p.arrivals.kind == ArrivalModel::Kind::FixedInterval) {
    node["arrival"] = {{"model", "fixed"}, {"interval", p.arrivals.interval}};
  } else {
    node["arrival"] = {{"model", "memoryless"}, {"mean_interarrival", p.arrivals.interval}};
  }
  node["batch"] = {{"min", p.batch_min}, {"max", p.batch_max}};
  node["rng_seed"] = p.rng_seed;
  return node;
}

SwarmConfig parse_swarm(const json& node) {
  SwarmConfig cfg;
  cfg.population_size = get_int(node, "population_size", cfg.population_size);
  cfg.max_iterations = get_int(node, "max_iterations", cfg.max_iterations);
  cfg.g0 = get_number(node, "g0", cfg.g0);
  cfg.alpha = get_number(node, "alpha", cfg.alpha);
  cfg.epsilon = get_number(node, "epsilon", cfg.epsilon);
  cfg.w_max = get_number(node, "w_max", cfg.w_max);
  cfg.w_min = get_number(node, "w_min", cfg.w_min);
  cfg.phi_max = get_number(node, "phi_max", cfg.phi_max);
  cfg.phi_min = get_number(node, "phi_min", cfg.phi_min);
  cfg.velocity_clamp.lo = get_number(node, "velocity_min", cfg.velocity_clamp.lo);
  cfg.velocity_clamp.hi = get_number(node, "velocity_max", cfg.velocity_clamp.hi);
  return cfg;
}

json swarm_to_json(const SwarmConfig& cfg) {
  json node;
  node["population_size"] = cfg.population_size;
  node["max_iterations"] = cfg.max_iterations;
  node["g0"] = cfg.g0;
  node["alpha"] = cfg.alpha;
  node["epsilon"] = cfg.epsilon;
  node["w_max"] = cfg.w_max;
  node["w_min"] = cfg.w_min;
  node["phi_max"] = cfg.phi_max;
  node["phi_min"] = cfg.phi_min;
  node["velocity_min"] = cfg.velocity_clamp.lo;
  node["velocity_max"] = cfg.velocity_clamp.hi;
  return node;
}

PsoConfig parse_pso(const json& node) {
  PsoConfig cfg;
  cfg.population_size = get_int(node, "population_size", cfg.population_size);
  cfg.max_iterations = get_int(node, "max_iterations", cfg.max_iterations);
  cfg.w_max = get_number(node, "w_max", cfg.w_max);
  cfg.w_min = get_number(node, "w_min", cfg.w_min);
  cfg.c1 = get_number(node, "c1", cfg.c1);
  cfg.c2 = get_number(node, "c2", cfg.c2);
  cfg.velocity_clamp.lo = get_number(node, "velocity_min", cfg.velocity_clamp.lo);
  cfg.velocity_clamp.hi = get_number(node, "velocity_max", cfg.velocity_clamp.hi);
  return cfg;
}

json pso_to_json(const PsoConfig& cfg) {
  json node;
  node["population_size"] = cfg.population_size;
  node["max_iterations"] = cfg.max_iterations;
  node["w_max"] = cfg.w_max;
  node["w_min"] = cfg.w_min;
  node["c1"] = cfg.c1;
  node["c2"] = cfg.c2;
  node["velocity_min"] = cfg.velocity_clamp.lo;
  node["velocity_max"] = cfg.velocity_clamp.hi;
  return node;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Psogsa: return "psogsa";
    case SchedulerKind::Pso: return "pso";
    case SchedulerKind::RoundRobin: return "rr";
    case SchedulerKind::Greedy: return "greedy";
    case SchedulerKind::Random: return "random";
  }
  return "unknown";
}

SchedulerKind scheduler_kind_from_string(const std::string& name) {
  if (name == "psogsa") return SchedulerKind::Psogsa;
  if (name == "pso") return SchedulerKind::Pso;
  if (name == "rr") return SchedulerKind::RoundRobin;
  if (name == "greedy") return SchedulerKind::Greedy;
  if (name == "random") return SchedulerKind::Random;
  throw ConfigError("unknown scheduler '" + name + "'");
}

std::unique_ptr<MappingScheduler> make_scheduler(const SchedulerSpec& spec,
                                                 std::uint64_t seed) {
  const std::string label = spec.label.empty() ? to_string(spec.kind) : spec.label;
  switch (spec.kind) {
    case SchedulerKind::Psogsa:
      return std::make_unique<PsogsaScheduler>(spec.swarm, label, seed);
    case SchedulerKind::Pso:
      return std::make_unique<PsoScheduler>(spec.pso, label, seed);
    case SchedulerKind::RoundRobin:
      return std::make_unique<RoundRobinScheduler>(label);
    case SchedulerKind::Greedy:
      return std::make_unique<GreedyScheduler>(label);
    case SchedulerKind::Random:
      return std::make_unique<RandomScheduler>(label, seed);
  }
  throw ConfigError("unknown scheduler kind");
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }

  ExperimentConfig cfg;
  if (doc.contains("sim")) {
    const auto& sim = doc["sim"];
    if (sim.contains("vms")) cfg.sim.vms = parse_vms(sim["vms"]);
    cfg.sim.sample_interval = get_number(sim, "sample_interval", cfg.sim.sample_interval);
    cfg.sim.reschedule_on_arrival =
        get_bool(sim, "reschedule_on_arrival", cfg.sim.reschedule_on_arrival);
  }
  if (cfg.sim.vms.empty()) {
    for (int j = 0; j < 5; ++j) cfg.sim.vms.push_back({j, 2, 128.0});
  }

  if (doc.contains("workload")) {
    const auto& wl = doc["workload"];
    if (wl.contains("file") && wl.contains("generate")) {
      throw ConfigError("config: workload must have exactly one of 'file' or 'generate'");
    }
    if (wl.contains("file")) {
      cfg.workload_file = std::filesystem::path(wl["file"].get<std::string>());
    } else if (wl.contains("generate")) {
      cfg.generate = parse_gen_params(wl["generate"]);
    }
  }
  if (!cfg.generate && !cfg.workload_file) cfg.generate = WorkloadGenParams{};

  if (doc.contains("schedulers")) {
    for (const auto& item : doc["schedulers"]) {
      SchedulerSpec spec;
      if (item.is_string()) {
        spec.kind = scheduler_kind_from_string(item.get<std::string>());
      } else {
        spec.kind = scheduler_kind_from_string(item.value("kind", "psogsa"));
        spec.label = item.value("label", "");
        if (item.contains("swarm")) spec.swarm = parse_swarm(item["swarm"]);
        if (item.contains("pso")) spec.pso = parse_pso(item["pso"]);
      }
      cfg.schedulers.push_back(spec);
    }
  }
  if (doc.contains("seeds")) {
    for (const auto& seed : doc["seeds"]) cfg.seeds.push_back(seed.get<std::uint64_t>());
  }
  if (doc.contains("output_dir")) {
    cfg.output_dir = std::filesystem::path(doc["output_dir"].get<std::string>());
  }

  if (cfg.schedulers.empty()) throw ConfigError("config: at least one scheduler is required");
  if (cfg.seeds.empty()) throw ConfigError("config: at least one seed is required");

  // duplicate kinds need distinct labels for distinct file names
  std::map<std::string, int> label_uses;
  for (SchedulerSpec& spec : cfg.schedulers) {
    if (spec.label.empty()) spec.label = to_string(spec.kind);
    const int uses = ++label_uses[spec.label];
    if (uses > 1) spec.label += "_" + std::to_string(uses);
  }
  return cfg;
}

std::string experiment_manifest(const ExperimentConfig& cfg) {
  json doc;
  json sim;
  json vms = json::array();
  for (const VmSpec& vm : cfg.sim.vms) {
    vms.push_back({{"id", vm.id}, {"pes", vm.pes}, {"mips_per_pe", vm.mips_per_pe}});
  }
  sim["vms"] = vms;
  sim["sample_interval"] = cfg.sim.sample_interval;
  sim["reschedule_on_arrival"] = cfg.sim.reschedule_on_arrival;
  doc["sim"] = sim;

  json workload;
  if (cfg.workload_file) {
    workload["file"] = cfg.workload_file->string();
  } else {
    workload["generate"] = gen_params_to_json(*cfg.generate);
  }
  doc["workload"] = workload;

  json schedulers = json::array();
  for (const SchedulerSpec& spec : cfg.schedulers) {
    json node;
    node["kind"] = to_string(spec.kind);
    node["label"] = spec.label;
    if (spec.kind == SchedulerKind::Psogsa) node["swarm"] = swarm_to_json(spec.swarm);
    if (spec.kind == SchedulerKind::Pso) node["pso"] = pso_to_json(spec.pso);
    schedulers.push_back(node);
  }
  doc["schedulers"] = schedulers;
  doc["seeds"] = cfg.seeds;
  doc["output_dir"] = cfg.output_dir.string();
  return doc.dump(2) + "\n";
}

std::vector<TaskSpec> workload_for_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.workload_file) return load_workload(*cfg.workload_file);
  WorkloadGenParams params = *cfg.generate;
  params.rng_seed = mix_seed(params.rng_seed, seed);
  return generate_workload(params);
}

std::vector<SummaryRow> run_experiment(const ExperimentConfig& config) {
  if (config.schedulers.empty()) throw ConfigError("experiment: no schedulers configured");
  if (config.seeds.empty()) throw ConfigError("experiment: no seeds configured");

  // resolve file-name labels; configs built in code may leave them empty
  ExperimentConfig cfg = config;
  std::map<std::string, int> label_uses;
  for (SchedulerSpec& spec : cfg.schedulers) {
    if (spec.label.empty()) spec.label = to_string(spec.kind);
    const int uses = ++label_uses[spec.label];
    if (uses > 1) spec.label += "_" + std::to_string(uses);
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  // writing the manifest up front also proves the directory is usable
  write_file(cfg.output_dir / "manifest.json", experiment_manifest(cfg));

  std::vector<SummaryRow> rows;
  for (const SchedulerSpec& spec : cfg.schedulers) {
    for (const std::uint64_t seed : cfg.seeds) {
      auto scheduler = make_scheduler(spec, seed);
      const auto workload = workload_for_seed(cfg, seed);
      const SimResult result = run_simulation(workload, cfg.sim, *scheduler);

      std::ostringstream series;
      series << "time,avg_vm_load,avg_processing_speed,running_count\n";
      for (const MetricSample& sample : result.samples) {
        series << fmt(sample.time) << ',' << fmt(sample.avg_vm_load) << ','
               << fmt(sample.avg_processing_speed) << ',' << sample.running_count << "\n";
      }
      const std::string file_name =
          "timeseries_" + spec.label + "_" + std::to_string(seed) + ".csv";
      write_file(cfg.output_dir / file_name, series.str());

      SummaryRow row;
      row.scheduler = spec.label;
      row.seed = std::to_string(seed);
      row.time_avg_load = result.summary.time_avg_load;
      row.time_avg_speed = result.summary.time_avg_speed;
      row.total_exec_time = result.summary.total_exec_time;
      row.makespan = result.summary.makespan;
      row.completed = result.summary.completed;
      rows.push_back(row);
    }
  }

  // per-scheduler median rows
  std::vector<SummaryRow> medians;
  for (const SchedulerSpec& spec : cfg.schedulers) {
    std::vector<double> load, speed, exec, makespan;
    int completed = 0;
    for (const SummaryRow& row : rows) {
      if (row.scheduler != spec.label) continue;
      load.push_back(row.time_avg_load);
      speed.push_back(row.time_avg_speed);
      exec.push_back(row.total_exec_time);
      makespan.push_back(row.makespan);
      completed += row.completed;
    }
    SummaryRow row;
    row.scheduler = spec.label;
    row.seed = "median";
    row.time_avg_load = median(load);
    row.time_avg_speed = median(speed);
    row.total_exec_time = median(exec);
    row.makespan = median(makespan);
    row.completed = completed / static_cast<int>(cfg.seeds.size());
    medians.push_back(row);
  }

  std::ostringstream summary;
  summary << "scheduler,seed,time_avg_load,time_avg_speed,total_exec_time,makespan,completed\n";
  for (const auto& set : {rows, medians}) {
    for (const SummaryRow& row : set) {
      summary << row.scheduler << ',' << row.seed << ',' << fmt(row.time_avg_load) << ','
              << fmt(row.time_avg_speed) << ',' << fmt(row.total_exec_time) << ','
              << fmt(row.makespan) << ',' << row.completed << "\n";
    }
  }
  write_file(cfg.output_dir / "summary.csv", summary.str());

  rows.insert(rows.end(), medians.begin(), medians.end());
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<SummaryRow> load_summary(const std::filesystem::path& summary_csv) {
  std::ifstream in(summary_csv);
  if (!in) throw ConfigError("compare: cannot open " + summary_csv.string());

  std::vector<SummaryRow> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_number == 1) continue;  // header
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (fields.size() != 7) {
      throw ConfigError(summary_csv.string() + ":" + std::to_string(line_number) +
                        ": expected 7 fields");
    }
    if (fields[1] == "median") continue;
    SummaryRow row;
    row.scheduler = fields[0];
    row.seed = fields[1];
    row.time_avg_load = std::stod(fields[2]);
    row.time_avg_speed = std::stod(fields[3]);
    row.total_exec_time = std::stod(fields[4]);
    row.makespan = std::stod(fields[5]);
    row.completed = std::stoi(fields[6]);
    rows.push_back(row);
  }
  return rows;
}

ComparisonReport compare_summary(const std::filesystem::path& summary_csv) {
  const auto rows = load_summary(summary_csv);
  if (rows.empty()) throw ConfigError("compare: no data rows in " + summary_csv.string());

  std::vector<std::string> order;
  std::map<std::string, std::vector<const SummaryRow*>> by_scheduler;
  for (const SummaryRow& row : rows) {
    if (!by_scheduler.count(row.scheduler)) order.push_back(row.scheduler);
    by_scheduler[row.scheduler].push_back(&row);
  }

  ComparisonReport report;
  for (const std::string& name : order) {
    std::vector<double> load, speed, exec, makespan;
    for (const SummaryRow* row : by_scheduler[name]) {
      load.push_back(row->time_avg_load);
      speed.push_back(row->time_avg_speed);
      exec.push_back(row->total_exec_time);
      makespan.push_back(row->makespan);
    }
    report.medians.push_back(
        {name, median(load), median(speed), median(exec), median(makespan)});
    if (name == "psogsa") report.baseline = report.medians.size() - 1;
  }
  return report;
}

void print_report(const ComparisonReport& report, std::ostream& out) {
  const SchedulerMedians* base =
      report.baseline ? &report.medians[*report.baseline] : nullptr;
  const bool deltas = base != nullptr && report.medians.size() > 1;

  auto delta = [](double value, double reference) {
    if (reference == 0.0) return std::string("n/a");
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%+.2f%%", 100.0 * (value - reference) / reference);
    return std::string(buffer);
  };

  out << "medians over seeds";
  if (deltas) out << " (deltas vs " << base->scheduler << ")";
  out << "\n";
  out << std::left << std::setw(12) << "scheduler" << std::right << std::setw(16)
      << "time_avg_load" << std::setw(16) << "time_avg_speed" << std::setw(16)
      << "total_exec" << std::setw(16) << "makespan";
  if (deltas) out << std::setw(12) << "load_delta";
  out << "\n";
  for (const SchedulerMedians& m : report.medians) {
    out << std::left << std::setw(12) << m.scheduler << std::right << std::setw(16)
        << fmt(m.time_avg_load) << std::setw(16) << fmt(m.time_avg_speed) << std::setw(16)
        << fmt(m.total_exec_time) << std::setw(16) << fmt(m.makespan);
    if (deltas) out << std::setw(12) << delta(m.time_avg_load, base->time_avg_load);
    out << "\n";
  }
}

}  // namespace swarmsched
