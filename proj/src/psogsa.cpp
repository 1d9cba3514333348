#include "swarmsched/psogsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarmsched {

namespace {

void validate(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
              const SwarmConfig& cfg) {
  if (tasks.empty()) throw ConfigError("swarm: task list is empty");
  if (vms.empty()) throw ConfigError("swarm: VM list is empty");
  if (cfg.population_size < 2) throw ConfigError("swarm: population size must be >= 2");
  if (cfg.max_iterations < 1) throw ConfigError("swarm: max iterations must be >= 1");
  if (cfg.g0 <= 0.0) throw ConfigError("swarm: G0 must be > 0");
  if (cfg.alpha <= 0.0) throw ConfigError("swarm: alpha must be > 0");
  if (cfg.epsilon <= 0.0) throw ConfigError("swarm: epsilon must be > 0");
  if (cfg.w_max < cfg.w_min) throw ConfigError("swarm: w_max must be >= w_min");
  if (cfg.phi_max <= 0.0 || cfg.phi_min <= 0.0) throw ConfigError("swarm: phi must be > 0");
  if (cfg.velocity_clamp.lo > cfg.velocity_clamp.hi) {
    throw ConfigError("swarm: velocity clamp range is inverted");
  }
}

// Euclidean distance between two flattened binary matrices.
double position_distance(const BitMatrix& a, const BitMatrix& b) {
  int differing = 0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    differing += da[i] != db[i];
  }
  return std::sqrt(static_cast<double>(differing));
}

void refresh_global_best(SwarmState& state) {
  for (const Mass& mass : state.masses) {
    if (mass.best_fitness < state.global_best_fitness) {
      state.global_best_fitness = mass.best_fitness;
      state.global_best_position = mass.best_position;
    }
  }
}

}  // namespace

double gravitational_constant(int t, const SwarmConfig& cfg) {
  return cfg.g0 * std::exp(-cfg.alpha * static_cast<double>(t) /
                           static_cast<double>(cfg.max_iterations));
}

Schedule schedules(int t, const SwarmConfig& cfg) {
  const double progress = static_cast<double>(t) / static_cast<double>(cfg.max_iterations);
  Schedule sched;
  sched.w = cfg.w_max - progress * (cfg.w_max - cfg.w_min);
  sched.c1 = 1.0 - progress * progress * progress;
  sched.c2 = progress * progress * progress;
  sched.phi = cfg.phi_max - progress * (cfg.phi_max - cfg.phi_min);
  return sched;
}

double transfer_probability(double velocity, double phi) {
  return 1.0 / (1.0 + std::exp(-velocity / phi));
}

SwarmState initialize_population(const std::vector<TaskSpec>& tasks,
                                 const std::vector<VmSpec>& vms, const SwarmConfig& cfg,
                                 const FitnessFn& fitness) {
  validate(tasks, vms, cfg);

  const int v = static_cast<int>(vms.size());
  const int c = static_cast<int>(tasks.size());

  SwarmState state;
  state.cfg = cfg;
  state.rng = Rng(cfg.rng_seed);
  state.g = cfg.g0;
  state.masses.resize(cfg.population_size);
  for (Mass& mass : state.masses) {
    mass.position = random_one_hot(v, c, state.rng);
    mass.velocity = RealMatrix(v, c, 0.0);
    mass.acceleration = RealMatrix(v, c, 0.0);
    mass.fitness = fitness(mass.position);
    mass.best_position = mass.position;
    mass.best_fitness = mass.fitness;
  }

  state.global_best_fitness = std::numeric_limits<double>::infinity();
  refresh_global_best(state);
  compute_mass_values(state);
  return state;
}

void compute_mass_values(SwarmState& state) {
  double best = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (const Mass& mass : state.masses) {
    best = std::min(best, mass.fitness);
    worst = std::max(worst, mass.fitness);
  }
  state.best_fitness = best;
  state.worst_fitness = worst;

  const std::size_t s = state.masses.size();
  if (best == worst) {
    for (Mass& mass : state.masses) mass.mass_value = 1.0 / static_cast<double>(s);
    return;
  }

  double total = 0.0;
  for (Mass& mass : state.masses) {
    mass.mass_value = (mass.fitness - worst) / (best - worst);
    total += mass.mass_value;
  }
  for (Mass& mass : state.masses) mass.mass_value /= total;
}

void compute_forces_and_acceleration(SwarmState& state, int mass_index) {
  Mass& mass = state.masses[mass_index];
  std::fill(mass.acceleration.data().begin(), mass.acceleration.data().end(), 0.0);

  RealMatrix force(mass.position.rows(), mass.position.cols(), 0.0);
  auto& force_data = force.data();
  const auto& own_bits = mass.position.data();

  for (std::size_t b = 0; b < state.masses.size(); ++b) {
    if (static_cast<int>(b) == mass_index) continue;
    const Mass& other = state.masses[b];
    const double distance = position_distance(mass.position, other.position);
    const double pull =
        state.g * mass.mass_value * other.mass_value / (distance + state.cfg.epsilon);
    const auto& other_bits = other.position.data();
    for (std::size_t d = 0; d < force_data.size(); ++d) {
      const double r = state.rng.uniform();
      force_data[d] += r * pull *
                       (static_cast<double>(other_bits[d]) - static_cast<double>(own_bits[d]));
    }
  }

  if (mass.mass_value == 0.0) return;  // inertialess agent, acceleration stays zero
  auto& acc_data = mass.acceleration.data();
  for (std::size_t d = 0; d < force_data.size(); ++d) {
    acc_data[d] = force_data[d] / mass.mass_value;
  }
}

void update_velocity(Mass& mass, const BitMatrix& gbest, const Schedule& sched,
                     const VelocityClamp& clamp, Rng& rng) {
  auto& velocity = mass.velocity.data();
  const auto& acc = mass.acceleration.data();
  const auto& position = mass.position.data();
  const auto& best = gbest.data();
  for (std::size_t d = 0; d < velocity.size(); ++d) {
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    const double v = sched.w * velocity[d] + sched.c1 * r1 * acc[d] +
                     sched.c2 * r2 * (static_cast<double>(best[d]) - static_cast<double>(position[d]));
    velocity[d] = clamp_velocity(v, clamp);
  }
}

void update_position(Mass& mass, double phi, Rng& rng) {
  RealMatrix prob(mass.position.rows(), mass.position.cols());
  auto& prob_data = prob.data();
  const auto& velocity = mass.velocity.data();
  auto& bits = mass.position.data();
  for (std::size_t d = 0; d < bits.size(); ++d) {
    prob_data[d] = transfer_probability(velocity[d], phi);
    bits[d] = rng.uniform() < prob_data[d] ? 1 : 0;
  }
  repair_one_hot_columns(mass.position, prob);
}

void step(SwarmState& state, const FitnessFn& fitness) {
  const int t = state.iteration + 1;  // iterations run 1..t_max
  state.g = gravitational_constant(t, state.cfg);

  compute_mass_values(state);
  for (int m = 0; m < static_cast<int>(state.masses.size()); ++m) {
    compute_forces_and_acceleration(state, m);
  }

  const Schedule sched = schedules(t, state.cfg);
  for (Mass& mass : state.masses) {
    update_velocity(mass, state.global_best_position, sched, state.cfg.velocity_clamp,
                    state.rng);
  }
  for (Mass& mass : state.masses) {
    update_position(mass, sched.phi, state.rng);
  }
  for (Mass& mass : state.masses) {
    mass.fitness = fitness(mass.position);
    if (mass.fitness < mass.best_fitness) {
      mass.best_fitness = mass.fitness;
      mass.best_position = mass.position;
    }
  }
  refresh_global_best(state);

  state.iteration = t;
}

SearchResult run_psogsa(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                        const SwarmConfig& cfg, const FitnessFn& fitness) {
  SwarmState state = initialize_population(tasks, vms, cfg, fitness);

  SearchResult result;
  result.best_fitness_history.reserve(cfg.max_iterations);
  while (state.iteration < cfg.max_iterations) {
    step(state, fitness);
    result.best_fitness_history.push_back(state.global_best_fitness);
  }

  result.mapping = decode_mapping(state.global_best_position, vms);
  result.best_fitness = state.global_best_fitness;
  return result;
}

SearchResult run_psogsa(const std::vector<TaskSpec>& tasks, const std::vector<VmSpec>& vms,
                        const SwarmConfig& cfg) {
  return run_psogsa(tasks, vms, cfg, makespan_fitness(tasks, vms));
}

}  // namespace swarmsched
