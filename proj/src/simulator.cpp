#include "swarmsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace swarmsched {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
// MI below which a task counts as done. One millionth of an MI (a single
// instruction) absorbs the rounding of projected completion times at large
// clock values without measurable work loss.
constexpr double kRemainingEps = 1e-6;

std::vector<int> vm_task_counts(const SimState& state) {
  std::vector<int> counts(state.vms.size(), 0);
  for (const RunningTask& task : state.active) counts[task.vm_index] += 1;
  return counts;
}

double average_vm_load(const SimState& state) {
  if (state.vms.empty()) return 0.0;
  std::vector<double> remaining(state.vms.size(), 0.0);
  for (const RunningTask& task : state.active) remaining[task.vm_index] += task.remaining_mi;
  double total = 0.0;
  for (std::size_t j = 0; j < state.vms.size(); ++j) {
    total += remaining[j] / state.vms[j].capacity();
  }
  return total / static_cast<double>(state.vms.size());
}

double average_processing_speed(const SimState& state, const std::vector<int>& counts) {
  if (state.active.empty()) return 0.0;
  double total = 0.0;
  for (const RunningTask& task : state.active) {
    total += state.vms[task.vm_index].capacity() / counts[task.vm_index];
  }
  return total / static_cast<double>(state.active.size());
}

}  // namespace

int SimState::tasks_on_vm(int vm_index) const {
  int count = 0;
  for (const RunningTask& task : active) count += task.vm_index == vm_index;
  return count;
}

double next_event_time(const SimState& state) {
  double next = kInfinity;
  if (!state.pending.empty()) {
    next = std::min(next, state.pending.front().submit_time);
  }
  if (!state.active.empty()) {
    const auto counts = vm_task_counts(state);
    for (const RunningTask& task : state.active) {
      const double rate = state.vms[task.vm_index].capacity() / counts[task.vm_index];
      next = std::min(next, state.clock + task.remaining_mi / rate);
    }
  }
  if (!state.pending.empty() || !state.active.empty()) {
    next = std::min(next, static_cast<double>(state.next_tick) * state.sample_interval);
  }
  return next;
}

void progress(SimState& state, double dt) {
  const auto counts = vm_task_counts(state);
  const double load_before = average_vm_load(state);
  state.speed_integral += dt * average_processing_speed(state, counts);

  const double finish_time = state.clock + dt;
  for (RunningTask& task : state.active) {
    const double rate = state.vms[task.vm_index].capacity() / counts[task.vm_index];
    const double drained = std::min(task.remaining_mi, dt * rate);
    task.remaining_mi -= drained;
    state.work_done_mi += drained;
  }

  state.load_integral += dt * 0.5 * (load_before + average_vm_load(state));
  state.clock = finish_time;

  auto done = std::stable_partition(state.active.begin(), state.active.end(),
                                    [](const RunningTask& task) {
                                      return task.remaining_mi > kRemainingEps;
                                    });
  for (auto it = done; it != state.active.end(); ++it) {
    state.completed.push_back({it->id, finish_time, it->submit_time, it->length_mi});
  }
  state.active.erase(done, state.active.end());
}

void reschedule(SimState& state, MappingScheduler& scheduler, bool reschedule_all) {
  std::vector<TaskSpec> batch;
  std::vector<RunningTask> placed;
  if (reschedule_all) {
    for (const RunningTask& task : state.active) {
      batch.push_back({task.id, task.remaining_mi, task.pes, task.submit_time});
    }
  } else {
    placed = state.active;
  }
  batch.insert(batch.end(), state.arrived.begin(), state.arrived.end());
  std::sort(batch.begin(), batch.end(), [](const TaskSpec& a, const TaskSpec& b) {
    if (a.submit_time != b.submit_time) return a.submit_time < b.submit_time;
    return a.id < b.id;
  });

  const Mapping mapping = scheduler.schedule(batch, state.vms);
  if (mapping.vm_ids.size() != batch.size()) {
    throw std::runtime_error("reschedule: scheduler returned a mapping of wrong length (" +
                             scheduler.name() + ")");
  }

  std::unordered_map<int, int> vm_index;
  for (std::size_t j = 0; j < state.vms.size(); ++j) vm_index.emplace(state.vms[j].id, j);
  std::unordered_map<int, double> original_length;
  for (const RunningTask& task : state.active) original_length.emplace(task.id, task.length_mi);

  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto it = vm_index.find(mapping.vm_ids[i]);
    if (it == vm_index.end()) {
      throw std::runtime_error("reschedule: scheduler mapped task " +
                               std::to_string(batch[i].id) + " to unknown VM id " +
                               std::to_string(mapping.vm_ids[i]));
    }
    const auto orig = original_length.find(batch[i].id);
    const double length =
        orig != original_length.end() ? orig->second : batch[i].length_mi;
    placed.push_back({batch[i].id, batch[i].length_mi, it->second, batch[i].pes,
                      batch[i].submit_time, length});
  }

  state.active = std::move(placed);
  state.arrived.clear();
}

MetricSample sample_metrics(SimState& state) {
  MetricSample sample;
  sample.time = state.clock;
  sample.avg_vm_load = average_vm_load(state);
  sample.avg_processing_speed = average_processing_speed(state, vm_task_counts(state));
  sample.running_count = static_cast<int>(state.active.size());
  if (!state.samples.empty() && state.samples.back().time == sample.time) {
    state.samples.back() = sample;  // coincident events collapse to one row
  } else {
    state.samples.push_back(sample);
  }
  return sample;
}

SimResult run_simulation(std::vector<TaskSpec> workload, const SimConfig& cfg,
                         MappingScheduler& scheduler) {
  if (cfg.vms.empty()) throw ConfigError("simulation: VM list is empty");
  if (cfg.sample_interval <= 0.0) throw ConfigError("simulation: sample interval must be > 0");
  {
    std::unordered_map<int, int> seen;
    for (const VmSpec& vm : cfg.vms) {
      if (vm.capacity() <= 0.0) {
        throw ConfigError("simulation: VM " + std::to_string(vm.id) + " has no capacity");
      }
      if (!seen.emplace(vm.id, 1).second) {
        throw ConfigError("simulation: duplicate VM id " + std::to_string(vm.id));
      }
    }
  }

  {
    std::unordered_map<int, int> seen;
    for (const TaskSpec& task : workload) {
      if (task.length_mi <= 0.0) {
        throw ConfigError("simulation: task " + std::to_string(task.id) +
                          " has non-positive length");
      }
      if (task.submit_time < 0.0) {
        throw ConfigError("simulation: task " + std::to_string(task.id) +
                          " submitted before time 0");
      }
      if (!seen.emplace(task.id, 1).second) {
        throw ConfigError("simulation: duplicate task id " + std::to_string(task.id));
      }
    }
  }

  std::sort(workload.begin(), workload.end(), [](const TaskSpec& a, const TaskSpec& b) {
    if (a.submit_time != b.submit_time) return a.submit_time < b.submit_time;
    return a.id < b.id;
  });

  SimState state;
  state.vms = cfg.vms;
  state.sample_interval = cfg.sample_interval;
  state.pending.assign(workload.begin(), workload.end());
  sample_metrics(state);

  // Generous bound on event count; trips only if the loop stops converging.
  const long long max_events =
      16 * (static_cast<long long>(workload.size()) + 4) *
          (static_cast<long long>(workload.size()) + 4) +
      1'000'000;
  long long events = 0;

  while (!state.pending.empty() || !state.active.empty()) {
    if (++events > max_events) {
      throw std::runtime_error("simulation: event budget exhausted, no progress");
    }

    const double event_time = next_event_time(state);
    const double dt = event_time - state.clock;
    if (dt > 0.0) {
      progress(state, dt);
      state.clock = event_time;  // snap away accumulated rounding
    }

    // arrivals first, then completions (handled in progress), then samples
    while (!state.pending.empty() && state.pending.front().submit_time <= state.clock) {
      state.arrived.push_back(state.pending.front());
      state.pending.pop_front();
    }
    if (!state.arrived.empty()) {
      reschedule(state, scheduler, cfg.reschedule_on_arrival);
    }

    while (static_cast<double>(state.next_tick) * state.sample_interval <= state.clock) {
      state.next_tick += 1;
    }
    sample_metrics(state);
  }

  SimResult result;
  result.summary.completed = static_cast<int>(state.completed.size());
  for (const FinishedTask& task : state.completed) {
    result.summary.makespan = std::max(result.summary.makespan, task.finish_time);
    result.summary.total_exec_time += task.finish_time - task.submit_time;
    result.summary.completed_length_mi += task.length_mi;
  }
  if (state.clock > 0.0) {
    result.summary.time_avg_load = state.load_integral / state.clock;
    result.summary.time_avg_speed = state.speed_integral / state.clock;
  }
  result.summary.work_done_mi = state.work_done_mi;
  result.samples = std::move(state.samples);
  return result;
}

}  // namespace swarmsched
