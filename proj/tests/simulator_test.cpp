#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "swarmsched/baselines.hpp"
#include "swarmsched/simulator.hpp"

using namespace swarmsched;

namespace {

std::vector<VmSpec> equal_vms(int count) {
  std::vector<VmSpec> vms;
  for (int j = 0; j < count; ++j) vms.push_back({j, 2, 128.0});
  return vms;
}

class GreedySim final : public MappingScheduler {
 public:
  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    return greedy_earliest_finish(tasks, vms);
  }
  std::string name() const override { return "greedy"; }
};

class RoundRobinSim final : public MappingScheduler {
 public:
  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    return round_robin(tasks, vms);
  }
  std::string name() const override { return "rr"; }
};

// Records what the simulator hands to the scheduler at each epoch.
class SpyScheduler final : public MappingScheduler {
 public:
  Mapping schedule(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) override {
    calls.push_back(tasks);
    return round_robin(tasks, vms);
  }
  std::string name() const override { return "spy"; }

  std::vector<std::vector<TaskSpec>> calls;
};

SimState state_with(std::vector<VmSpec> vms) {
  SimState state;
  state.vms = std::move(vms);
  return state;
}

}  // namespace

TEST_CASE("progress drains processor-shared work") {
  SUBCASE("two colocated tasks split the capacity") {
    SimState state = state_with(equal_vms(1));
    state.active.push_back({0, 256.0, 0, 1, 0.0, 256.0});
    state.active.push_back({1, 256.0, 0, 1, 0.0, 256.0});
    progress(state, 1.0);
    CHECK(state.active.size() == 2);
    CHECK(state.active[0].remaining_mi == doctest::Approx(128.0));
    CHECK(state.active[1].remaining_mi == doctest::Approx(128.0));
    CHECK(state.clock == doctest::Approx(1.0));
  }

  SUBCASE("a lone task finishes exactly at the projected instant") {
    SimState state = state_with(equal_vms(1));
    state.active.push_back({0, 256.0, 0, 1, 0.0, 256.0});
    progress(state, 1.0);
    CHECK(state.active.empty());
    REQUIRE(state.completed.size() == 1);
    CHECK(state.completed[0].finish_time == doctest::Approx(1.0));
  }

  SUBCASE("idle progress only moves the clock") {
    SimState state = state_with(equal_vms(2));
    progress(state, 3.5);
    CHECK(state.clock == doctest::Approx(3.5));
    CHECK(state.active.empty());
    CHECK(state.completed.empty());
    CHECK(state.work_done_mi == 0.0);
  }
}

TEST_CASE("next_event_time takes the earliest of arrival, completion, tick") {
  SUBCASE("completion before arrival") {
    SimState state = state_with(equal_vms(1));
    state.sample_interval = 100.0;
    state.pending.push_back({1, 100.0, 1, 5.0});
    state.active.push_back({0, 768.0, 0, 1, 0.0, 768.0});  // 768/256 = 3 s
    CHECK(next_event_time(state) == doctest::Approx(3.0));
  }

  SUBCASE("empty system waits for the arrival") {
    SimState state = state_with(equal_vms(1));
    state.sample_interval = 100.0;
    state.pending.push_back({0, 100.0, 1, 10.0});
    CHECK(next_event_time(state) == doctest::Approx(10.0));
  }

  SUBCASE("sharing delays the projected completion") {
    SimState state = state_with(equal_vms(1));
    state.sample_interval = 100.0;
    state.active.push_back({0, 128.0, 0, 1, 0.0, 128.0});
    state.active.push_back({1, 256.0, 0, 1, 0.0, 256.0});
    // first completion: 128 / (256/2) = 1.0
    CHECK(next_event_time(state) == doctest::Approx(1.0));
  }

  SUBCASE("nothing left means no next event") {
    SimState state = state_with(equal_vms(1));
    CHECK(std::isinf(next_event_time(state)));
  }
}

TEST_CASE("reschedule hands remaining work to the scheduler") {
  SimState state = state_with(equal_vms(2));
  SpyScheduler spy;

  // first batch into an empty system
  state.arrived.push_back({0, 512.0, 1, 0.0});
  state.arrived.push_back({1, 256.0, 1, 0.0});
  reschedule(state, spy, true);
  CHECK(state.active.size() == 2);
  CHECK(state.arrived.empty());
  REQUIRE(spy.calls.size() == 1);
  CHECK(spy.calls[0][0].length_mi == 512.0);

  // drain half of task 0's work, then a new arrival triggers rescheduling
  // with remaining MI as lengths
  state.active[0].remaining_mi = 200.0;
  state.arrived.push_back({2, 300.0, 1, 4.0});
  reschedule(state, spy, true);
  REQUIRE(spy.calls.size() == 2);
  REQUIRE(spy.calls[1].size() == 3);
  CHECK(spy.calls[1][0].id == 0);
  CHECK(spy.calls[1][0].length_mi == doctest::Approx(200.0));
  CHECK(spy.calls[1][2].id == 2);
  CHECK(spy.calls[1][2].length_mi == doctest::Approx(300.0));
  // original lengths survive for accounting
  for (const RunningTask& task : state.active) {
    if (task.id == 0) CHECK(task.length_mi == 512.0);
  }
}

TEST_CASE("without rescheduling, placed tasks stay put") {
  SpyScheduler spy;
  SimConfig cfg;
  cfg.vms = equal_vms(2);
  cfg.reschedule_on_arrival = false;
  const std::vector<TaskSpec> workload{
      {0, 51200.0, 1, 0.0}, {1, 51200.0, 1, 0.0}, {2, 256.0, 1, 10.0}};
  const SimResult result = run_simulation(workload, cfg, spy);

  CHECK(result.summary.completed == 3);
  REQUIRE(spy.calls.size() == 2);
  CHECK(spy.calls[0].size() == 2);  // the t=0 batch
  REQUIRE(spy.calls[1].size() == 1);  // only the new arrival
  CHECK(spy.calls[1][0].id == 2);
}

TEST_CASE("sample_metrics reports load and speed means") {
  SimState state = state_with(equal_vms(2));

  SUBCASE("idle system samples zeros") {
    const MetricSample sample = sample_metrics(state);
    CHECK(sample.avg_vm_load == 0.0);
    CHECK(sample.avg_processing_speed == 0.0);
    CHECK(sample.running_count == 0);
  }

  SUBCASE("load is remaining work over capacity, averaged over VMs") {
    state.active.push_back({0, 256.0, 0, 1, 0.0, 256.0});
    state.active.push_back({1, 256.0, 0, 1, 0.0, 256.0});
    const MetricSample sample = sample_metrics(state);
    // VM0 drains 512 MI at 256 MIPS -> 2 s; VM1 idle; mean over 2 VMs = 1
    CHECK(sample.avg_vm_load == doctest::Approx(1.0));
    // each of the two tasks runs at 128 MIPS
    CHECK(sample.avg_processing_speed == doctest::Approx(128.0));
    CHECK(sample.running_count == 2);
  }

  SUBCASE("a lone task gets the full capacity") {
    state.active.push_back({0, 100.0, 1, 1, 0.0, 100.0});
    const MetricSample sample = sample_metrics(state);
    CHECK(sample.avg_processing_speed == doctest::Approx(256.0));
  }
}

TEST_CASE("run_simulation end to end") {
  SUBCASE("single task on a single VM") {
    GreedySim greedy;
    SimConfig cfg;
    cfg.vms = equal_vms(1);
    const SimResult result = run_simulation({{0, 256.0, 1, 0.0}}, cfg, greedy);
    CHECK(result.summary.completed == 1);
    CHECK(result.summary.makespan == doctest::Approx(1.0));
    CHECK(result.summary.total_exec_time == doctest::Approx(1.0));
    CHECK(result.summary.work_done_mi == doctest::Approx(256.0));
  }

  SUBCASE("empty workload") {
    GreedySim greedy;
    SimConfig cfg;
    cfg.vms = equal_vms(2);
    const SimResult result = run_simulation({}, cfg, greedy);
    CHECK(result.summary.completed == 0);
    CHECK(result.summary.makespan == 0.0);
    REQUIRE(result.samples.size() == 1);  // the t=0 sample only
    CHECK(result.samples[0].time == 0.0);
  }

  SUBCASE("two equal tasks on two equal VMs finish together") {
    GreedySim greedy;
    SimConfig cfg;
    cfg.vms = equal_vms(2);
    const std::vector<TaskSpec> workload{{0, 512.0, 1, 0.0}, {1, 512.0, 1, 0.0}};
    const SimResult result = run_simulation(workload, cfg, greedy);
    CHECK(result.summary.completed == 2);
    CHECK(result.summary.makespan == doctest::Approx(2.0));
    CHECK(result.summary.total_exec_time == doctest::Approx(4.0));
  }

  SUBCASE("staggered arrivals reschedule and conserve work") {
    RoundRobinSim rr;
    SimConfig cfg;
    cfg.vms = equal_vms(2);
    std::vector<TaskSpec> workload;
    double total = 0.0;
    for (int i = 0; i < 9; ++i) {
      const double length = 200.0 + 37.0 * i;
      workload.push_back({i, length, 1, 1.5 * (i / 3)});
      total += length;
    }
    const SimResult result = run_simulation(workload, cfg, rr);
    CHECK(result.summary.completed == 9);
    CHECK(result.summary.completed_length_mi == doctest::Approx(total));
    CHECK(result.summary.work_done_mi ==
          doctest::Approx(total).epsilon(1e-6));

    SUBCASE("sample times strictly increase") {
      for (std::size_t i = 1; i < result.samples.size(); ++i) {
        CHECK(result.samples[i].time > result.samples[i - 1].time);
      }
    }

    SUBCASE("metric values stay finite and non-negative") {
      for (const MetricSample& sample : result.samples) {
        CHECK(std::isfinite(sample.avg_vm_load));
        CHECK(sample.avg_vm_load >= 0.0);
        CHECK(std::isfinite(sample.avg_processing_speed));
        CHECK(sample.avg_processing_speed >= 0.0);
        CHECK(sample.running_count >= 0);
      }
    }

    SUBCASE("identical runs produce identical series") {
      RoundRobinSim rr2;
      const SimResult again = run_simulation(workload, cfg, rr2);
      REQUIRE(again.samples.size() == result.samples.size());
      for (std::size_t i = 0; i < result.samples.size(); ++i) {
        CHECK(again.samples[i].time == result.samples[i].time);
        CHECK(again.samples[i].avg_vm_load == result.samples[i].avg_vm_load);
      }
    }
  }

  SUBCASE("invalid configs are rejected") {
    GreedySim greedy;
    SimConfig cfg;
    CHECK_THROWS_AS(run_simulation({{0, 100.0, 1, 0.0}}, cfg, greedy), ConfigError);
    cfg.vms = equal_vms(1);
    cfg.sample_interval = 0.0;
    CHECK_THROWS_AS(run_simulation({{0, 100.0, 1, 0.0}}, cfg, greedy), ConfigError);
  }

  SUBCASE("invalid workloads are rejected") {
    GreedySim greedy;
    SimConfig cfg;
    cfg.vms = equal_vms(1);
    CHECK_THROWS_AS(run_simulation({{0, -5.0, 1, 0.0}}, cfg, greedy), ConfigError);
    CHECK_THROWS_AS(run_simulation({{0, 100.0, 1, 0.0}, {0, 50.0, 1, 0.0}}, cfg, greedy),
                    ConfigError);
  }
}
