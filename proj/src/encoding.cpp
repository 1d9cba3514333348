#include "swarmsched/encoding.hpp"

#include <algorithm>
#include <utility>

namespace swarmsched {

double clamp_velocity(double v, const VelocityClamp& clamp) {
  return std::clamp(v, clamp.lo, clamp.hi);
}

BitMatrix random_one_hot(int vm_count, int task_count, Rng& rng) {
  BitMatrix bits(vm_count, task_count, 0);
  for (int task = 0; task < task_count; ++task) {
    bits(rng.uniform_int(vm_count), task) = 1;
  }
  return bits;
}

bool is_one_hot(const BitMatrix& bits) {
  for (int c = 0; c < bits.cols(); ++c) {
    int set = 0;
    for (int r = 0; r < bits.rows(); ++r) set += bits(r, c);
    if (set != 1) return false;
  }
  return true;
}

void repair_one_hot_columns(BitMatrix& bits, const RealMatrix& prob) {
  for (int c = 0; c < bits.cols(); ++c) {
    int set_count = 0;
    int best_set_row = -1;     // highest-probability row among set bits
    int best_any_row = 0;      // highest-probability row overall
    for (int r = 0; r < bits.rows(); ++r) {
      if (prob(r, c) > prob(best_any_row, c)) best_any_row = r;
      if (bits(r, c)) {
        ++set_count;
        if (best_set_row < 0 || prob(r, c) > prob(best_set_row, c)) best_set_row = r;
      }
    }
    if (set_count == 1) continue;
    const int keep = set_count == 0 ? best_any_row : best_set_row;
    for (int r = 0; r < bits.rows(); ++r) bits(r, c) = 0;
    bits(keep, c) = 1;
  }
}

Mapping decode_mapping(const BitMatrix& position, const std::vector<VmSpec>& vms) {
  Mapping mapping;
  mapping.vm_ids.resize(position.cols());
  for (int c = 0; c < position.cols(); ++c) {
    int row = -1;
    for (int r = 0; r < position.rows(); ++r) {
      if (position(r, c)) {
        row = r;
        break;
      }
    }
    if (row < 0) {
      throw std::invalid_argument("decode_mapping: column without a set bit");
    }
    mapping.vm_ids[c] = vms[static_cast<std::size_t>(row)].id;
  }
  return mapping;
}

FitnessFn makespan_fitness(std::vector<TaskSpec> tasks, std::vector<VmSpec> vms) {
  return [tasks = std::move(tasks), vms = std::move(vms)](const BitMatrix& position) {
    return mapping_fitness(decode_mapping(position, vms), tasks, vms);
  };
}

}  // namespace swarmsched
