#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "swarmsched/encoding.hpp"
#include "swarmsched/scheduling.hpp"

namespace swarmsched {

/// Bin-LB-PSOGSA controlling parameters. Defaults follow the evaluated
/// setup: 50 masses, 500 iterations, G0=1, alpha=20, epsilon=e^-1, inertia
/// 0.9 -> 0.4, transfer steepness 1.0 -> 5.0, velocities clamped to [-8, 8].
struct SwarmConfig {
  int population_size = 50;
  int max_iterations = 500;
  double g0 = 1.0;
  double alpha = 20.0;
  double epsilon = 0.36787944117144233;  // e^-1
  double w_max = 0.9;
  double w_min = 0.4;
  double phi_max = 1.0;
  double phi_min = 5.0;
  VelocityClamp velocity_clamp;
  std::uint64_t rng_seed = 0;
};

/// One search agent: a full task-to-VM assignment with physics attributes.
struct Mass {
  BitMatrix position;        // one-hot per column
  RealMatrix velocity;       // clamped reals
  double fitness = 0.0;      // seconds
  BitMatrix best_position;
  double best_fitness = 0.0;
  double mass_value = 0.0;   // normalized M_m, in [0, 1]
  RealMatrix acceleration;
};

struct SwarmState {
  SwarmConfig cfg;
  std::vector<Mass> masses;
  int iteration = 0;
  double g = 0.0;               // gravitational constant at this iteration
  double best_fitness = 0.0;    // population extremes this iteration
  double worst_fitness = 0.0;
  BitMatrix global_best_position;
  double global_best_fitness = 0.0;
  Rng rng{0};
};

/// Time-varying coefficients evaluated at one iteration.
struct Schedule {
  double w = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double phi = 0.0;
};

/// G(t) = G0 * exp(-alpha * t / t_max).
double gravitational_constant(int t, const SwarmConfig& cfg);

/// w decreases linearly w_max -> w_min; c1 = 1 - (t/t_max)^3 and
/// c2 = (t/t_max)^3; phi interpolates linearly phi_max -> phi_min.
Schedule schedules(int t, const SwarmConfig& cfg);

/// Time-varying transfer function 1 / (1 + exp(-v / phi)).
double transfer_probability(double velocity, double phi);

/// Seeds the population with random one-hot positions, zero velocities, and
/// evaluated fitnesses; personal bests start at the current positions and
/// the global best at the population minimum.
SwarmState initialize_population(const std::vector<TaskSpec>& tasks,
                                 const std::vector<VmSpec>& vms, const SwarmConfig& cfg,
                                 const FitnessFn& fitness);

/// Population extremes and normalized mass values from current fitnesses.
/// raw_m = (fit_m - worst) / (best - worst), M_m = raw_m / sum(raw); a
/// degenerate best == worst population gets uniform 1/s.
void compute_mass_values(SwarmState& state);

/// Total rand-weighted gravitational force on one mass and the resulting
/// acceleration. Draws one uniform per (contributing mass, element), masses
/// ascending and elements row-major. A zero-mass agent gets zero acceleration.
void compute_forces_and_acceleration(SwarmState& state, int mass_index);

/// v' = w*v + c1*r1*acc + c2*r2*(gbest - x) element-wise, clamped; r1 and r2
/// are fresh draws per element.
void update_velocity(Mass& mass, const BitMatrix& gbest, const Schedule& sched,
                     const VelocityClamp& clamp, Rng& rng);

/// Stochastic bit flips through the transfer function followed by one-hot
/// column repair.
void update_position(Mass& mass, double phi, Rng& rng);

/// One full iteration: global variables, mass values, forces, velocities,
/// positions, fitnesses, then personal and global bests (strict improvement).
void step(SwarmState& state, const FitnessFn& fitness);

struct SearchResult {
  Mapping mapping;
  double best_fitness = 0.0;
  std::vector<double> best_fitness_history;  // global best after each iteration
};

/// Runs the full search and decodes the global best position.
SearchResult run_psogsa(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                        const SwarmConfig& cfg, const FitnessFn& fitness);
SearchResult run_psogsa(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                        const SwarmConfig& cfg);

}  // namespace swarmsched
