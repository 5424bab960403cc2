#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rftc/fuzzy.hpp"

namespace rftc {

constexpr int kMfDimensions = 33;  // 11 membership functions x <U, D, C>

// Per-dimension search box of the membership-function encoding, in variable
// order QL(short, medium, long), WT(short, medium, long), ET(short, long),
// UD(low, medium, high).
struct SearchBounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

SearchBounds mf_search_bounds();

// [U1 D1 C1 U2 D2 C2 ... C11]. encode requires every term to carry a
// trapezoid triple; decode clips each trapezoid to its variable's domain.
Eigen::VectorXd encode_mf_set(const MembershipSet& set);
MembershipSet decode_mf_set(const Eigen::VectorXd& position);

struct TrainingScenario {
  std::string condition;
  std::uint64_t seed = 1;
  std::int64_t horizon = 20000;
};

struct SwarmConfig {
  int particles = 20;        // M
  int iterations = 1000;     // G
  double omega_start = 0.9;
  double omega_end = 0.4;
  double c1 = 2.0;
  double c2 = 2.0;
  double w1 = 1.0;
  double w2 = 1e-8;
  std::uint64_t rng_seed = 1;
  bool seed_default_position = true;  // start one particle at the hand-set shapes
  int threads = 0;                    // 0 = hardware concurrency
  std::vector<TrainingScenario> training;

  void validate() const;
};

struct Particle {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
  double fitness = 0.0;
  Eigen::VectorXd best_position;
  double best_fitness = 0.0;
};

// omega_start linearly decreased to omega_end over the run.
double inertia(const SwarmConfig& config, int iteration);

// Velocity then position per the standard inertia-weight update; positions
// are clamped to the bounds and the clamped velocity component zeroed.
// Consumes 2N uniforms from rng: rand1[0..N-1] then rand2[0..N-1].
void update_particle(Particle& p, const Eigen::VectorXd& g_best, double omega, double c1,
                     double c2, const SearchBounds& bounds, std::mt19937_64& rng);

using FitnessFn = std::function<double(const Eigen::VectorXd&)>;

// Traffic fitness: decode -> FUZZY-MIX-OPT -> run the training scenarios with
// their fixed seeds -> mean of w1*(vehMiss/vehPass) + w2*vehDelay. A run that
// passes no vehicles contributes w1*vehMiss + w2*vehDelay.
FitnessFn make_traffic_fitness(const SwarmConfig& config);

struct OptimizeResult {
  Eigen::VectorXd g_best;
  double g_best_fitness = 0.0;
  std::vector<double> history;  // g_best fitness after init and each iteration
};

// Global-best PSO over the membership search box (minimization). Fitness
// evaluations within an iteration run concurrently; results are independent
// of evaluation order.
OptimizeResult optimize(const SwarmConfig& config, const FitnessFn& fitness);

}  // namespace rftc
