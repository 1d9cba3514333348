#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "swarmsched/scheduling.hpp"

namespace swarmsched {

/// How batch submission times advance.
struct ArrivalModel {
  enum class Kind { FixedInterval, Memoryless };
  Kind kind = Kind::FixedInterval;
  double interval = 1.0;  // fixed gap, or mean inter-arrival when memoryless
};

/// Synthetic workload knobs. PE counts are powers of two over the exponent
/// range; task length is pes * uniform(per-PE length range), so wide jobs
/// are long ones.
struct WorkloadGenParams {
  int task_count = 100;
  int pe_exp_min = 2;   // pes from 2^2 = 4
  int pe_exp_max = 8;   // up to 2^8 = 256
  double per_pe_length_min = 500.0;   // MI
  double per_pe_length_max = 2000.0;  // MI
  ArrivalModel arrivals;
  int batch_min = 1;  // tasks per submission batch, uniform
  int batch_max = 1;
  std::uint64_t rng_seed = 0;
};

std::vector<TaskSpec> generate_workload(const WorkloadGenParams& params);

/// Reads the workload CSV format (header id,submit_time,length_mi,pes).
/// Validation failures report the offending line number.
std::vector<TaskSpec> load_workload(const std::filesystem::path& path);

/// Writes the workload CSV with full double round-trip precision.
void save_workload(const std::filesystem::path& path, const std::vector<TaskSpec>& tasks);

}  // namespace swarmsched
