#pragma once

#include <deque>
#include <string>
#include <vector>

#include "swarmsched/scheduling.hpp"

namespace swarmsched {

/// Scheduler plugged into the simulator. Called at every arrival epoch with
/// the incomplete task set (remaining MI as lengths); may keep internal
/// state, e.g. per-call random streams.
class MappingScheduler {
 public:
  virtual ~MappingScheduler() = default;
  virtual Mapping schedule(const std::vector<TaskSpec>& tasks,
                           const std::vector<VmSpec>& vms) = 0;
  virtual std::string name() const = 0;
};

struct SimConfig {
  std::vector<VmSpec> vms;
  double sample_interval = 1.0;       // seconds
  bool reschedule_on_arrival = true;  // false: place only the new batch
};

struct MetricSample {
  double time = 0.0;
  double avg_vm_load = 0.0;           // expected drain seconds, mean over VMs
  double avg_processing_speed = 0.0;  // MIPS, mean over running tasks
  int running_count = 0;
};

/// A placed task with work left to do.
struct RunningTask {
  int id = 0;
  double remaining_mi = 0.0;
  int vm_index = 0;
  int pes = 1;
  double submit_time = 0.0;
  double length_mi = 0.0;  // original length, for accounting
};

struct FinishedTask {
  int id = 0;
  double finish_time = 0.0;
  double submit_time = 0.0;
  double length_mi = 0.0;
};

struct SimState {
  double clock = 0.0;
  std::vector<VmSpec> vms;
  double sample_interval = 1.0;
  std::deque<TaskSpec> pending;       // sorted by (submit_time, id)
  std::vector<TaskSpec> arrived;      // batch staged for the next reschedule
  std::vector<RunningTask> active;
  std::vector<FinishedTask> completed;
  std::vector<MetricSample> samples;
  long long next_tick = 1;            // next sample tick index

  // summary accumulators, integrated exactly between events
  double load_integral = 0.0;   // avg load is piecewise linear
  double speed_integral = 0.0;  // avg speed is piecewise constant
  double work_done_mi = 0.0;

  int tasks_on_vm(int vm_index) const;
};

/// Earliest of: next pending arrival, next projected completion, next sample
/// tick. +inf when none exist.
double next_event_time(const SimState& state);

/// Drains dt seconds of processor-sharing work from every active task;
/// tasks reaching zero remaining MI complete at clock + dt. The caller must
/// not let dt jump over an interior event.
void progress(SimState& state, double dt);

/// Hands the staged arrival batch (plus, when reschedule_all, every active
/// task with its remaining MI as length) to the scheduler and applies the
/// returned mapping. Migration is free.
void reschedule(SimState& state, MappingScheduler& scheduler, bool reschedule_all);

/// Computes the current load/speed averages and appends them to the series.
MetricSample sample_metrics(SimState& state);

struct SimSummary {
  double time_avg_load = 0.0;
  double time_avg_speed = 0.0;
  double total_exec_time = 0.0;  // sum of per-task realized durations, seconds
  double makespan = 0.0;
  int completed = 0;
  double work_done_mi = 0.0;        // integrated processing
  double completed_length_mi = 0.0; // sum of completed task lengths
};

struct SimResult {
  std::vector<MetricSample> samples;
  SimSummary summary;
};

/// Event loop: advance to the next event, apply arrivals (rescheduling),
/// completions, and samples until the workload drains.
SimResult run_simulation(std::vector<TaskSpec> workload, const SimConfig& cfg,
                         MappingScheduler& scheduler);

}  // namespace swarmsched
