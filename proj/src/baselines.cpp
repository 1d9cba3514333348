#include "swarmsched/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace swarmsched {

namespace {

void validate(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
              const PsoConfig& cfg) {
  if (tasks.empty()) throw ConfigError("pso: task list is empty");
  if (vms.empty()) throw ConfigError("pso: VM list is empty");
  if (cfg.population_size < 1) throw ConfigError("pso: population size must be >= 1");
  if (cfg.max_iterations < 1) throw ConfigError("pso: max iterations must be >= 1");
  if (cfg.w_max < cfg.w_min) throw ConfigError("pso: w_max must be >= w_min");
  if (cfg.velocity_clamp.lo > cfg.velocity_clamp.hi) {
    throw ConfigError("pso: velocity clamp range is inverted");
  }
}

// Indices of tasks sorted by (submission time, id).
std::vector<std::size_t> submission_order(const std::vector<TaskSpec>& tasks) {
  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tasks[a].submit_time != tasks[b].submit_time) {
      return tasks[a].submit_time < tasks[b].submit_time;
    }
    return tasks[a].id < tasks[b].id;
  });
  return order;
}

}  // namespace

double sigmoid(double velocity) { return 1.0 / (1.0 + std::exp(-velocity)); }

void pso_velocity(Particle& particle, const BitMatrix& pbest, const BitMatrix& gbest,
                  double w, double c1, double c2, const VelocityClamp& clamp, Rng& rng) {
  auto& velocity = particle.velocity.data();
  const auto& position = particle.position.data();
  const auto& personal = pbest.data();
  const auto& global = gbest.data();
  for (std::size_t d = 0; d < velocity.size(); ++d) {
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    const double v =
        w * velocity[d] +
        c1 * r1 * (static_cast<double>(personal[d]) - static_cast<double>(position[d])) +
        c2 * r2 * (static_cast<double>(global[d]) - static_cast<double>(position[d]));
    velocity[d] = clamp_velocity(v, clamp);
  }
}

void pso_position(Particle& particle, Rng& rng) {
  RealMatrix prob(particle.position.rows(), particle.position.cols());
  auto& prob_data = prob.data();
  const auto& velocity = particle.velocity.data();
  auto& bits = particle.position.data();
  for (std::size_t d = 0; d < bits.size(); ++d) {
    prob_data[d] = sigmoid(velocity[d]);
    bits[d] = rng.uniform() < prob_data[d] ? 1 : 0;
  }
  repair_one_hot_columns(particle.position, prob);
}

SearchResult run_bin_pso(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                         const PsoConfig& cfg, const FitnessFn& fitness) {
  validate(tasks, vms, cfg);

  const int v = static_cast<int>(vms.size());
  const int c = static_cast<int>(tasks.size());
  Rng rng(cfg.rng_seed);

  std::vector<Particle> particles(cfg.population_size);
  BitMatrix gbest;
  double gbest_fitness = std::numeric_limits<double>::infinity();
  for (Particle& particle : particles) {
    particle.position = random_one_hot(v, c, rng);
    particle.velocity = RealMatrix(v, c, 0.0);
    particle.fitness = fitness(particle.position);
    particle.best_position = particle.position;
    particle.best_fitness = particle.fitness;
    if (particle.best_fitness < gbest_fitness) {
      gbest_fitness = particle.best_fitness;
      gbest = particle.best_position;
    }
  }

  SearchResult result;
  result.best_fitness_history.reserve(cfg.max_iterations);
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    const double progress = static_cast<double>(t) / static_cast<double>(cfg.max_iterations);
    const double w = cfg.w_max - progress * (cfg.w_max - cfg.w_min);

    for (Particle& particle : particles) {
      pso_velocity(particle, particle.best_position, gbest, w, cfg.c1, cfg.c2,
                   cfg.velocity_clamp, rng);
    }
    for (Particle& particle : particles) {
      pso_position(particle, rng);
    }
    for (Particle& particle : particles) {
      particle.fitness = fitness(particle.position);
      if (particle.fitness < particle.best_fitness) {
        particle.best_fitness = particle.fitness;
        particle.best_position = particle.position;
      }
    }
    for (const Particle& particle : particles) {
      if (particle.best_fitness < gbest_fitness) {
        gbest_fitness = particle.best_fitness;
        gbest = particle.best_position;
      }
    }
    result.best_fitness_history.push_back(gbest_fitness);
  }

  result.mapping = decode_mapping(gbest, vms);
  result.best_fitness = gbest_fitness;
  return result;
}

SearchResult run_bin_pso(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                         const PsoConfig& cfg) {
  return run_bin_pso(tasks, vms, cfg, makespan_fitness(tasks, vms));
}

Mapping round_robin(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms) {
  if (vms.empty()) throw ConfigError("round_robin: VM list is empty");

  Mapping mapping;
  mapping.vm_ids.resize(tasks.size());
  const auto order = submission_order(tasks);
  for (std::size_t i = 0; i < order.size(); ++i) {
    mapping.vm_ids[order[i]] = vms[i % vms.size()].id;
  }
  return mapping;
}

Mapping greedy_earliest_finish(const std::vector<TaskSpec>& tasks,
                               const std::vector<VmSpec>& vms) {
  if (vms.empty()) throw ConfigError("greedy_earliest_finish: VM list is empty");

  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tasks[a].length_mi != tasks[b].length_mi) {
      return tasks[a].length_mi > tasks[b].length_mi;
    }
    return tasks[a].id < tasks[b].id;
  });

  std::vector<int> counts(vms.size(), 0);
  std::vector<double> length_sums(vms.size(), 0.0);
  Mapping mapping;
  mapping.vm_ids.resize(tasks.size());
  for (std::size_t i : order) {
    std::size_t chosen = 0;
    double chosen_finish = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < vms.size(); ++j) {
      const double finish =
          (length_sums[j] + tasks[i].length_mi) * (counts[j] + 1) / vms[j].capacity();
      if (finish < chosen_finish ||
          (finish == chosen_finish && vms[j].id < vms[chosen].id)) {
        chosen = j;
        chosen_finish = finish;
      }
    }
    counts[chosen] += 1;
    length_sums[chosen] += tasks[i].length_mi;
    mapping.vm_ids[i] = vms[chosen].id;
  }
  return mapping;
}

Mapping random_mapping(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                       std::uint64_t seed) {
  if (vms.empty()) throw ConfigError("random_mapping: VM list is empty");

  Rng rng(seed);
  Mapping mapping;
  mapping.vm_ids.resize(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    mapping.vm_ids[i] = vms[static_cast<std::size_t>(rng.uniform_int(
                                static_cast<int>(vms.size())))]
                            .id;
  }
  return mapping;
}

}  // namespace swarmsched
