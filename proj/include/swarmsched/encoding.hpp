#pragma once

#include <functional>
#include <vector>

#include "swarmsched/core.hpp"
#include "swarmsched/scheduling.hpp"

namespace swarmsched {

/// Velocity clamp range applied element-wise after every velocity update.
struct VelocityClamp {
  double lo = -8.0;
  double hi = 8.0;
};

double clamp_velocity(double v, const VelocityClamp& clamp);

/// Position matrix with one task per column; the single set row is the
/// hosting VM. The set row of each column is drawn uniformly.
BitMatrix random_one_hot(int vm_count, int task_count, Rng& rng);

/// True when every column has exactly one set bit.
bool is_one_hot(const BitMatrix& bits);

/// Restores the one-hot invariant on a candidate bit matrix. Columns with
/// several set bits keep the set bit of highest flip probability; columns
/// with none set the highest-probability row. Ties go to the lowest row.
void repair_one_hot_columns(BitMatrix& bits, const RealMatrix& prob);

/// Reads the per-column set row out of a one-hot position matrix and maps
/// it to VM ids.
Mapping decode_mapping(const BitMatrix& position, const std::vector<VmSpec>& vms);

/// Fitness of a position matrix; lower is better.
using FitnessFn = std::function<double(const BitMatrix&)>;

/// The canonical objective: decode and evaluate the expected makespan.
FitnessFn makespan_fitness(std::vector<TaskSpec> tasks, std::vector<VmSpec> vms);

}  // namespace swarmsched
