#pragma once

#include <utility>
#include <vector>

#include "swarmsched/core.hpp"

namespace swarmsched {

/// A schedulable task. Lengths are in million instructions (MI). The PE
/// demand is workload metadata and never constrains placement.
struct TaskSpec {
  int id = 0;
  double length_mi = 0.0;
  int pes = 1;
  double submit_time = 0.0;

  bool operator==(const TaskSpec&) const = default;
};

/// A virtual machine. Total capacity is spread evenly over the tasks
/// currently mapped to it (processor sharing).
struct VmSpec {
  int id = 0;
  int pes = 1;
  double mips_per_pe = 0.0;

  double capacity() const { return static_cast<double>(pes) * mips_per_pe; }

  bool operator==(const VmSpec&) const = default;
};

/// Task-to-VM assignment: vm_ids[i] is the VM hosting task i.
struct Mapping {
  std::vector<int> vm_ids;

  bool operator==(const Mapping&) const = default;
};

/// MIPS share each of n co-located tasks gets on a time-shared VM.
/// Requires n >= 1.
double processing_speed(const VmSpec& vm, int n);

/// Seconds to run a task at the given MIPS share. Requires speed > 0.
double execution_time(const TaskSpec& task, double speed);

/// Expected makespan of a mapping: per VM, the summed execution times of its
/// tasks under the crowded per-task speed; the fitness is the worst VM.
/// Empty VMs contribute 0.
double mapping_fitness(const Mapping& mapping, const std::vector<TaskSpec>& tasks,
                       const std::vector<VmSpec>& vms);

/// Exhaustive optimum over all v^c mappings (test oracle). Ties resolved
/// toward the lexicographically smallest assignment vector. Guarded to
/// v^c <= 10^6 enumerations.
std::pair<Mapping, double> brute_force_optimum(const std::vector<TaskSpec>& tasks,
                                               const std::vector<VmSpec>& vms);

}  // namespace swarmsched
