#include "rftc/pso.hpp"

#include <atomic>
#include <thread>

#include <nlohmann/json.hpp>

#include "rftc/conditions.hpp"
#include "rftc/controllers.hpp"

namespace rftc {

void SwarmConfig::validate() const {
  if (particles < 2) throw ConfigError("swarm needs at least 2 particles");
  if (iterations < 1) throw ConfigError("iterations must be positive");
  if (omega_start < omega_end) throw ConfigError("inertia must not increase");
}

SearchBounds mf_search_bounds() {
  SearchBounds b{Eigen::VectorXd::Zero(kMfDimensions), Eigen::VectorXd::Zero(kMfDimensions)};
  // (U, D, C) caps per membership function, indexed 1..11 in the encoding
  // order: 1-3 QL, 4-6 WT, 7-8 ET, 9-11 UD.
  auto set = [&](int mf_first, int mf_last, double u, double d, double c) {
    for (int i = mf_first; i <= mf_last; ++i) {
      const int base = (i - 1) * 3;
      b.hi[base] = u;
      b.hi[base + 1] = d;
      b.hi[base + 2] = c;
    }
  };
  set(1, 3, 10.0, 10.0, 20.0);
  set(4, 6, 50.0, 50.0, 100.0);
  set(7, 8, 7.5, 7.5, 15.0);
  set(9, 11, 0.5, 0.5, 1.0);
  return b;
}

namespace {
struct VariableSlot {
  FuzzyVariable MembershipSet::*member;
  const char* name;
  double lo, hi;
  std::vector<const char*> terms;
};

const std::vector<VariableSlot>& slots() {
  static const std::vector<VariableSlot> s = {
      {&MembershipSet::ql, "QL", 0, 20, {"short", "medium", "long"}},
      {&MembershipSet::wt, "WT", 0, 100, {"short", "medium", "long"}},
      {&MembershipSet::et, "ET", 0, 15, {"short", "long"}},
      {&MembershipSet::ud, "UD", 0, 1, {"low", "medium", "high"}},
  };
  return s;
}
}  // namespace

Eigen::VectorXd encode_mf_set(const MembershipSet& set) {
  Eigen::VectorXd v(kMfDimensions);
  int dim = 0;
  for (const VariableSlot& slot : slots()) {
    for (const char* term_name : slot.terms) {
      const FuzzyTerm& term = (set.*slot.member).term(term_name);
      if (!term.trapezoid) {
        throw RangeError("term " + std::string(term_name) + " of " + slot.name +
                         " has no trapezoid representation");
      }
      v[dim++] = term.trapezoid->upper;
      v[dim++] = term.trapezoid->spread;
      v[dim++] = term.trapezoid->center;
    }
  }
  return v;
}

MembershipSet decode_mf_set(const Eigen::VectorXd& position) {
  if (position.size() != kMfDimensions) throw RangeError("position must have 33 components");
  const SearchBounds bounds = mf_search_bounds();
  MembershipSet set;
  int dim = 0;
  for (const VariableSlot& slot : slots()) {
    FuzzyVariable& var = set.*slot.member;
    var.name = slot.name;
    var.lo = slot.lo;
    var.hi = slot.hi;
    for (const char* term_name : slot.terms) {
      for (int k = 0; k < 3; ++k) {
        if (position[dim + k] < bounds.lo[dim + k] || position[dim + k] > bounds.hi[dim + k]) {
          throw RangeError("component " + std::to_string(dim + k) + " outside search bounds");
        }
      }
      FuzzyTerm term;
      term.name = term_name;
      term.trapezoid = TrapezoidMF{position[dim], position[dim + 1], position[dim + 2]};
      term.mf = term.trapezoid->to_piecewise(slot.lo, slot.hi);
      var.terms.push_back(std::move(term));
      dim += 3;
    }
  }
  return set;
}

double inertia(const SwarmConfig& config, int iteration) {
  if (config.iterations <= 1) return config.omega_end;
  return config.omega_start - (config.omega_start - config.omega_end) *
                                  static_cast<double>(iteration) /
                                  static_cast<double>(config.iterations - 1);
}

void update_particle(Particle& p, const Eigen::VectorXd& g_best, double omega, double c1,
                     double c2, const SearchBounds& bounds, std::mt19937_64& rng) {
  const Eigen::Index n = p.position.size();
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::VectorXd rand1(n), rand2(n);
  for (Eigen::Index i = 0; i < n; ++i) rand1[i] = uniform(rng);
  for (Eigen::Index i = 0; i < n; ++i) rand2[i] = uniform(rng);

  p.velocity = omega * p.velocity +
               c1 * rand1.cwiseProduct(p.best_position - p.position) +
               c2 * rand2.cwiseProduct(g_best - p.position);
  p.position += p.velocity;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p.position[i] < bounds.lo[i]) {
      p.position[i] = bounds.lo[i];
      p.velocity[i] = 0.0;
    } else if (p.position[i] > bounds.hi[i]) {
      p.position[i] = bounds.hi[i];
      p.velocity[i] = 0.0;
    }
  }
}

FitnessFn make_traffic_fitness(const SwarmConfig& config) {
  if (config.training.empty()) throw ConfigError("no training scenarios configured");
  std::vector<Scenario> scenarios;
  for (const TrainingScenario& t : config.training) {
    scenarios.push_back(make_scenario(t.condition, t.horizon, t.seed));
  }
  const double w1 = config.w1;
  const double w2 = config.w2;
  return [scenarios, w1, w2](const Eigen::VectorXd& position) {
    const MembershipSet mfs = decode_mf_set(position);
    double total = 0.0;
    for (const Scenario& scenario : scenarios) {
      auto controller = make_fuzzy_mix_controller({}, mfs);
      const SimMetrics m = run(scenario, *controller);
      const double miss_ratio =
          m.veh_pass > 0 ? static_cast<double>(m.veh_miss) / static_cast<double>(m.veh_pass)
                         : static_cast<double>(m.veh_miss);
      total += w1 * miss_ratio + w2 * m.veh_delay_seconds(scenario.time_unit_seconds);
    }
    return total / static_cast<double>(scenarios.size());
  };
}

namespace {
// Hand-set default shapes expressed as trapezoids, projected into the search
// box (the exact triangle spreads of the defaults exceed the D caps).
Eigen::VectorXd default_seed_position(const SearchBounds& bounds) {
  Eigen::VectorXd v(kMfDimensions);
  // QL: shoulder at 0 falling to 8; triangle (4,10,16); shoulder rising from 12.
  v.segment<3>(0) << 8, 8, 0;
  v.segment<3>(3) << 0, 12, 10;
  v.segment<3>(6) << 8, 8, 20;
  // WT: same shapes scaled onto [0,100].
  v.segment<3>(9) << 40, 40, 0;
  v.segment<3>(12) << 0, 60, 50;
  v.segment<3>(15) << 40, 40, 100;
  // ET: complementary shoulders split at 7.5.
  v.segment<3>(18) << 7.5, 7.5, 0;
  v.segment<3>(21) << 7.5, 7.5, 15;
  // UD: QL shapes scaled onto [0,1].
  v.segment<3>(24) << 0.4, 0.4, 0;
  v.segment<3>(27) << 0, 0.6, 0.5;
  v.segment<3>(30) << 0.4, 0.4, 1;
  return v.cwiseMax(bounds.lo).cwiseMin(bounds.hi);
}

void evaluate_all(std::vector<Particle>& swarm, const FitnessFn& fitness, int threads) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  if (threads == 1) {
    for (Particle& p : swarm) p.fitness = fitness(p.position);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= swarm.size()) return;
      swarm[i].fitness = fitness(swarm[i].position);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}
}  // namespace

OptimizeResult optimize(const SwarmConfig& config, const FitnessFn& fitness) {
  config.validate();
  const SearchBounds bounds = mf_search_bounds();
  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<Particle> swarm(static_cast<std::size_t>(config.particles));
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    Particle& p = swarm[i];
    p.position.resize(kMfDimensions);
    p.velocity.resize(kMfDimensions);
    for (int d = 0; d < kMfDimensions; ++d) {
      const double range = bounds.hi[d] - bounds.lo[d];
      p.position[d] = bounds.lo[d] + range * uniform(rng);
      p.velocity[d] = range * (uniform(rng) - 0.5);
    }
    if (i == 0 && config.seed_default_position) p.position = default_seed_position(bounds);
  }

  evaluate_all(swarm, fitness, config.threads);
  for (Particle& p : swarm) {
    p.best_position = p.position;
    p.best_fitness = p.fitness;
  }
  OptimizeResult result;
  auto refresh_g_best = [&] {
    for (const Particle& p : swarm) {
      if (result.g_best.size() == 0 || p.best_fitness < result.g_best_fitness) {
        result.g_best = p.best_position;
        result.g_best_fitness = p.best_fitness;
      }
    }
  };
  refresh_g_best();
  result.history.push_back(result.g_best_fitness);

  for (int iter = 0; iter < config.iterations; ++iter) {
    const double omega = inertia(config, iter);
    for (Particle& p : swarm) {
      update_particle(p, result.g_best, omega, config.c1, config.c2, bounds, rng);
    }
    evaluate_all(swarm, fitness, config.threads);
    for (Particle& p : swarm) {
      if (p.fitness < p.best_fitness) {
        p.best_fitness = p.fitness;
        p.best_position = p.position;
      }
    }
    refresh_g_best();
    result.history.push_back(result.g_best_fitness);
  }
  return result;
}

}  // namespace rftc
