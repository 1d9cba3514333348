#include "swarmsched/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

namespace swarmsched {

double processing_speed(const VmSpec& vm, int n) {
  if (n < 1) {
    throw std::invalid_argument("processing_speed: task count must be >= 1");
  }
  return vm.capacity() / static_cast<double>(n);
}

double execution_time(const TaskSpec& task, double speed) {
  if (speed <= 0.0) {
    throw std::invalid_argument("execution_time: processing speed must be > 0");
  }
  return task.length_mi / speed;
}

double mapping_fitness(const Mapping& mapping, const std::vector<TaskSpec>& tasks,
                       const std::vector<VmSpec>& vms) {
  if (mapping.vm_ids.size() != tasks.size()) {
    throw std::invalid_argument("mapping_fitness: mapping length does not match task count");
  }

  std::unordered_map<int, int> vm_index;
  vm_index.reserve(vms.size());
  for (std::size_t j = 0; j < vms.size(); ++j) {
    vm_index.emplace(vms[j].id, static_cast<int>(j));
  }

  // finish_j = sum_i TL_i / (capacity_j / n_j) = n_j * sum_i TL_i / capacity_j
  std::vector<int> counts(vms.size(), 0);
  std::vector<double> length_sums(vms.size(), 0.0);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto it = vm_index.find(mapping.vm_ids[i]);
    if (it == vm_index.end()) {
      throw std::invalid_argument("mapping_fitness: unknown VM id " +
                                  std::to_string(mapping.vm_ids[i]));
    }
    counts[it->second] += 1;
    length_sums[it->second] += tasks[i].length_mi;
  }

  double makespan = 0.0;
  for (std::size_t j = 0; j < vms.size(); ++j) {
    if (counts[j] == 0) continue;
    const double finish = length_sums[j] * counts[j] / vms[j].capacity();
    makespan = std::max(makespan, finish);
  }
  return makespan;
}

std::pair<Mapping, double> brute_force_optimum(const std::vector<TaskSpec>& tasks,
                                               const std::vector<VmSpec>& vms) {
  if (vms.empty()) {
    throw ConfigError("brute_force_optimum: VM list is empty");
  }

  const std::size_t v = vms.size();
  const std::size_t c = tasks.size();
  double combos = 1.0;
  for (std::size_t i = 0; i < c; ++i) {
    combos *= static_cast<double>(v);
    if (combos > 1e6) {
      throw ConfigError("brute_force_optimum: instance exceeds 10^6 enumerations");
    }
  }

  // Enumerate in lexicographic id order so first-strict-improvement keeps
  // the lexicographically smallest minimizer.
  std::vector<int> id_order(v);
  std::iota(id_order.begin(), id_order.end(), 0);
  std::sort(id_order.begin(), id_order.end(),
            [&](int a, int b) { return vms[a].id < vms[b].id; });

  std::vector<int> digits(c, 0);  // positions in id_order
  Mapping current;
  current.vm_ids.resize(c);
  Mapping best;
  double best_fitness = std::numeric_limits<double>::infinity();

  while (true) {
    for (std::size_t i = 0; i < c; ++i) {
      current.vm_ids[i] = vms[id_order[digits[i]]].id;
    }
    const double fitness = mapping_fitness(current, tasks, vms);
    if (fitness < best_fitness) {
      best_fitness = fitness;
      best = current;
    }

    // advance the base-v counter, least significant digit last
    std::size_t pos = c;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < static_cast<int>(v)) break;
      digits[pos] = 0;
      if (pos == 0) return {best, best_fitness};
    }
    if (c == 0) break;
  }
  return {best, best_fitness};
}

}  // namespace swarmsched
