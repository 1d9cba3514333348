#pragma once

#include <cstdint>
#include <vector>

#include "swarmsched/encoding.hpp"
#include "swarmsched/psogsa.hpp"
#include "swarmsched/scheduling.hpp"

namespace swarmsched {

/// Binary PSO parameters: constant acceleration coefficients (2 and 2) and
/// the same linear inertia schedule, clamp, encoding and repair as the
/// hybrid, so comparisons isolate the velocity rule.
struct PsoConfig {
  int population_size = 50;
  int max_iterations = 500;
  double w_max = 0.9;
  double w_min = 0.4;
  double c1 = 2.0;
  double c2 = 2.0;
  VelocityClamp velocity_clamp;
  std::uint64_t rng_seed = 0;
};

struct Particle {
  BitMatrix position;
  RealMatrix velocity;
  double fitness = 0.0;
  BitMatrix best_position;
  double best_fitness = 0.0;
};

/// Static sigmoid transfer of binary PSO.
double sigmoid(double velocity);

/// v' = w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x) element-wise, clamped;
/// r1 and r2 are fresh draws per element.
void pso_velocity(Particle& particle, const BitMatrix& pbest, const BitMatrix& gbest,
                  double w, double c1, double c2, const VelocityClamp& clamp, Rng& rng);

/// Bit flips through the static sigmoid followed by the shared one-hot repair.
void pso_position(Particle& particle, Rng& rng);

/// Full Bin-LB-PSO search, mirroring the hybrid's loop with the plain PSO
/// velocity rule.
SearchResult run_bin_pso(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                         const PsoConfig& cfg, const FitnessFn& fitness);
SearchResult run_bin_pso(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                         const PsoConfig& cfg);

/// Task i (submission order, ties by id) goes to vms[i mod v].
Mapping round_robin(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms);

/// Longest tasks first, each placed on the VM whose finish time after the
/// placement is smallest; ties go to the lowest VM id.
Mapping greedy_earliest_finish(const std::vector<TaskSpec>& tasks,
                               const std::vector<VmSpec>& vms);

/// Uniform random VM per task.
Mapping random_mapping(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                       std::uint64_t seed);

}  // namespace swarmsched
