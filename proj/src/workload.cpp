#include "swarmsched/workload.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>

namespace swarmsched {

namespace {

const char* kHeader = "id,submit_time,length_mi,pes";

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line,
                             const std::string& what) {
  throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, bool& ok) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  ok = end != text.c_str() && *end == '\0' && errno == 0 && std::isfinite(value);
  return value;
}

long parse_long(const std::string& text, bool& ok) {
  errno = 0;
  char* end = nullptr;
  const long value = std::strtol(text.c_str(), &end, 10);
  ok = end != text.c_str() && *end == '\0' && errno == 0;
  return value;
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

std::vector<TaskSpec> generate_workload(const WorkloadGenParams& p) {
  if (p.task_count < 1) throw ConfigError("workload: task count must be >= 1");
  if (p.pe_exp_min < 0 || p.pe_exp_max < p.pe_exp_min || p.pe_exp_max > 30) {
    throw ConfigError("workload: PE exponent range is invalid");
  }
  if (p.per_pe_length_min <= 0.0 || p.per_pe_length_max < p.per_pe_length_min) {
    throw ConfigError("workload: per-PE length range is invalid");
  }
  if (p.batch_min < 1 || p.batch_max < p.batch_min) {
    throw ConfigError("workload: batch size range is invalid");
  }
  if (p.arrivals.interval <= 0.0) {
    throw ConfigError("workload: arrival interval must be > 0");
  }

  Rng rng(p.rng_seed);
  std::vector<TaskSpec> tasks;
  tasks.reserve(p.task_count);

  double batch_time = 0.0;
  int next_id = 0;
  while (next_id < p.task_count) {
    const int batch = p.batch_min + rng.uniform_int(p.batch_max - p.batch_min + 1);
    for (int i = 0; i < batch && next_id < p.task_count; ++i) {
      const int exponent = p.pe_exp_min + rng.uniform_int(p.pe_exp_max - p.pe_exp_min + 1);
      const int pes = 1 << exponent;
      const double per_pe = p.per_pe_length_min +
                            rng.uniform() * (p.per_pe_length_max - p.per_pe_length_min);
      tasks.push_back({next_id, pes * per_pe, pes, batch_time});
      ++next_id;
    }
    switch (p.arrivals.kind) {
      case ArrivalModel::Kind::FixedInterval:
        batch_time += p.arrivals.interval;
        break;
      case ArrivalModel::Kind::Memoryless:
        batch_time += -p.arrivals.interval * std::log(1.0 - rng.uniform());
        break;
    }
  }
  return tasks;  // construction order is already sorted by submission time
}

std::vector<TaskSpec> load_workload(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("workload: cannot open " + path.string());

  std::vector<TaskSpec> tasks;
  std::unordered_set<int> seen_ids;
  std::string line;
  int line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader) parse_fail(path, line_number, "expected header '" +
                                                             std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }

    const auto fields = split_row(line);
    if (fields.size() != 4) {
      parse_fail(path, line_number, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    bool ok = true;
    TaskSpec task;
    task.id = static_cast<int>(parse_long(fields[0], ok));
    if (!ok) parse_fail(path, line_number, "bad task id '" + fields[0] + "'");
    task.submit_time = parse_double(fields[1], ok);
    if (!ok) parse_fail(path, line_number, "bad submit_time '" + fields[1] + "'");
    task.length_mi = parse_double(fields[2], ok);
    if (!ok) parse_fail(path, line_number, "bad length_mi '" + fields[2] + "'");
    task.pes = static_cast<int>(parse_long(fields[3], ok));
    if (!ok) parse_fail(path, line_number, "bad pes '" + fields[3] + "'");

    if (task.length_mi <= 0.0) parse_fail(path, line_number, "length_mi must be > 0");
    if (task.submit_time < 0.0) parse_fail(path, line_number, "submit_time must be >= 0");
    if (task.pes < 1) parse_fail(path, line_number, "pes must be >= 1");
    if (!seen_ids.insert(task.id).second) {
      parse_fail(path, line_number, "duplicate task id " + std::to_string(task.id));
    }
    tasks.push_back(task);
  }

  std::stable_sort(tasks.begin(), tasks.end(), [](const TaskSpec& a, const TaskSpec& b) {
    if (a.submit_time != b.submit_time) return a.submit_time < b.submit_time;
    return a.id < b.id;
  });
  return tasks;
}

void save_workload(const std::filesystem::path& path, const std::vector<TaskSpec>& tasks) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("workload: cannot write " + path.string());
  out << kHeader << "\n";
  for (const TaskSpec& task : tasks) {
    out << task.id << ',' << format_double(task.submit_time) << ','
        << format_double(task.length_mi) << ',' << task.pes << "\n";
  }
  out.flush();
  if (!out) throw std::runtime_error("workload: write failed for " + path.string());
}

}  // namespace swarmsched
