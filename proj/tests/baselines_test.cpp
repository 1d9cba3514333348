#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "swarmsched/baselines.hpp"

using namespace swarmsched;

namespace {

std::vector<VmSpec> equal_vms(int count) {
  std::vector<VmSpec> vms;
  for (int j = 0; j < count; ++j) vms.push_back({j, 2, 128.0});
  return vms;
}

bool valid_mapping(const Mapping& mapping, std::size_t task_count,
                   const std::vector<VmSpec>& vms) {
  if (mapping.vm_ids.size() != task_count) return false;
  std::set<int> ids;
  for (const VmSpec& vm : vms) ids.insert(vm.id);
  return std::all_of(mapping.vm_ids.begin(), mapping.vm_ids.end(),
                     [&](int id) { return ids.count(id) > 0; });
}

}  // namespace

TEST_CASE("pso_velocity composes the classic three terms") {
  Rng rng(1);
  Particle particle;
  particle.position = BitMatrix(2, 2, 0);
  particle.position(0, 0) = particle.position(0, 1) = 1;
  particle.velocity = RealMatrix(2, 2, 0.0);
  particle.best_position = particle.position;
  const VelocityClamp clamp;

  SUBCASE("fixed point: x = pbest = gbest, v = 0") {
    pso_velocity(particle, particle.best_position, particle.position, 0.9, 2.0, 2.0, clamp,
                 rng);
    for (double v : particle.velocity.data()) CHECK(v == 0.0);
  }

  SUBCASE("social term alone moves toward gbest") {
    BitMatrix gbest = particle.position;
    gbest(0, 0) = 0;
    gbest(1, 0) = 1;  // differs in column 0
    // c2=1 and r2 in [0,1): v = r2 * (gbest - x)
    pso_velocity(particle, particle.best_position, gbest, 0.0, 0.0, 1.0, clamp, rng);
    CHECK(particle.velocity(1, 0) >= 0.0);
    CHECK(particle.velocity(0, 0) <= 0.0);
    CHECK(particle.velocity(0, 1) == 0.0);
    CHECK(particle.velocity(1, 1) == 0.0);
  }

  SUBCASE("clamp caps the result") {
    particle.velocity = RealMatrix(2, 2, 9.5);
    pso_velocity(particle, particle.best_position, particle.position, 1.0, 0.0, 0.0, clamp,
                 rng);
    for (double v : particle.velocity.data()) CHECK(v == 8.0);
  }
}

TEST_CASE("pso_position flips bits through the static sigmoid and repairs") {
  CHECK(sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(sigmoid(8.0) == doctest::Approx(0.9996646498695336));

  Rng rng(2);
  Particle particle;
  particle.position = BitMatrix(3, 4, 0);
  for (int c = 0; c < 4; ++c) particle.position(0, c) = 1;
  particle.velocity = RealMatrix(3, 4, 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    for (double& v : particle.velocity.data()) v = -8.0 + 16.0 * rng.uniform();
    pso_position(particle, rng);
    CHECK(is_one_hot(particle.position));
  }
}

TEST_CASE("round_robin cycles VMs in submission order") {
  const auto vms = equal_vms(3);

  SUBCASE("five tasks wrap around") {
    std::vector<TaskSpec> tasks;
    for (int i = 0; i < 5; ++i) tasks.push_back({i, 100.0, 1, static_cast<double>(i)});
    const Mapping mapping = round_robin(tasks, vms);
    CHECK(mapping.vm_ids == std::vector<int>{0, 1, 2, 0, 1});
  }

  SUBCASE("submission time outranks list order") {
    std::vector<TaskSpec> tasks{{0, 100.0, 1, 5.0}, {1, 100.0, 1, 0.0}};
    const Mapping mapping = round_robin(tasks, vms);
    CHECK(mapping.vm_ids == std::vector<int>{1, 0});  // task 1 arrived first
  }

  SUBCASE("single task lands on the first VM") {
    const Mapping mapping = round_robin({{0, 100.0, 1, 0.0}}, vms);
    CHECK(mapping.vm_ids == std::vector<int>{0});
  }

  SUBCASE("as many tasks as VMs gives one each") {
    std::vector<TaskSpec> tasks;
    for (int i = 0; i < 3; ++i) tasks.push_back({i, 100.0, 1, 0.0});
    const Mapping mapping = round_robin(tasks, vms);
    std::set<int> used(mapping.vm_ids.begin(), mapping.vm_ids.end());
    CHECK(used.size() == 3);
  }

  SUBCASE("no VMs is a configuration error") {
    CHECK_THROWS_AS(round_robin({{0, 100.0, 1, 0.0}}, {}), ConfigError);
  }
}

TEST_CASE("greedy_earliest_finish balances by resulting finish time") {
  SUBCASE("two equal tasks split over two equal VMs") {
    const std::vector<TaskSpec> tasks{{0, 512.0, 1, 0.0}, {1, 512.0, 1, 0.0}};
    const auto vms = equal_vms(2);
    const Mapping mapping = greedy_earliest_finish(tasks, vms);
    CHECK(mapping.vm_ids[0] != mapping.vm_ids[1]);
    CHECK(mapping_fitness(mapping, tasks, vms) == doctest::Approx(2.0));
  }

  SUBCASE("single VM takes everything") {
    std::vector<TaskSpec> tasks;
    for (int i = 0; i < 4; ++i) tasks.push_back({i, 100.0 * (i + 1), 1, 0.0});
    const Mapping mapping = greedy_earliest_finish(tasks, equal_vms(1));
    CHECK(mapping.vm_ids == std::vector<int>(4, 0));
  }

  SUBCASE("equal tasks over equal VMs end up count-balanced") {
    const auto vms = equal_vms(3);
    for (int n : {3, 5, 7, 9}) {
      std::vector<TaskSpec> tasks;
      for (int i = 0; i < n; ++i) tasks.push_back({i, 300.0, 1, 0.0});
      const Mapping mapping = greedy_earliest_finish(tasks, vms);
      std::vector<int> counts(3, 0);
      for (int id : mapping.vm_ids) counts[id] += 1;
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      CHECK(*hi - *lo <= 1);
      // matches the enumerated optimum on these symmetric instances
      CHECK(mapping_fitness(mapping, tasks, vms) ==
            doctest::Approx(brute_force_optimum(tasks, vms).second));
    }
  }
}

TEST_CASE("run_bin_pso searches with the same machinery as the hybrid") {
  const auto vms = equal_vms(3);
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < 6; ++i) tasks.push_back({i, 400.0 + 130.0 * i, 1, 0.0});

  PsoConfig cfg;
  cfg.population_size = 20;
  cfg.max_iterations = 120;
  cfg.rng_seed = 12;
  const SearchResult result = run_bin_pso(tasks, vms, cfg);

  CHECK(valid_mapping(result.mapping, tasks.size(), vms));
  CHECK(result.best_fitness == doctest::Approx(mapping_fitness(result.mapping, tasks, vms)));

  SUBCASE("global best is non-increasing") {
    double best = result.best_fitness_history.front();
    for (double value : result.best_fitness_history) {
      CHECK(value <= best);
      best = value;
    }
  }

  SUBCASE("never better than the enumeration oracle") {
    const auto [oracle_mapping, oracle_fitness] = brute_force_optimum(tasks, vms);
    CHECK(result.best_fitness >= oracle_fitness - 1e-12);
  }

  SUBCASE("deterministic under the seed") {
    const SearchResult again = run_bin_pso(tasks, vms, cfg);
    CHECK(again.mapping == result.mapping);
    CHECK(again.best_fitness_history == result.best_fitness_history);
  }
}

TEST_CASE("random_mapping emits valid seeded mappings") {
  const auto vms = equal_vms(4);
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < 10; ++i) tasks.push_back({i, 250.0, 1, 0.0});

  const Mapping a = random_mapping(tasks, vms, 99);
  const Mapping b = random_mapping(tasks, vms, 99);
  CHECK(valid_mapping(a, tasks.size(), vms));
  CHECK(a == b);
  CHECK(random_mapping(tasks, vms, 100) != a);  // overwhelmingly likely
}
