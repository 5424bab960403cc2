#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rftc/phases.hpp"

namespace rftc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RateWaypoint {
  double t = 0.0;       // time units
  double lambda = 0.0;  // vehicles per time unit
};

using RateSchedule = std::vector<RateWaypoint>;

// One traffic condition for one run. A time unit is 0.5 s.
struct Scenario {
  std::string name;
  std::int64_t horizon = 100000;
  double time_unit_seconds = 0.5;
  int detector_cap = 20;
  double discharge_headway = 1.0;  // green time units per departing vehicle per lane
  std::array<RateSchedule, kNumFlows> rates{};
  std::uint64_t rng_seed = 1;
  std::int64_t trace_interval = 100;

  void validate() const;
};

// Piecewise-linear interpolation between waypoints, constant outside the span.
double rate_at(const RateSchedule& schedule, double t);

struct SimMetrics {
  std::int64_t veh_miss = 0;
  std::int64_t veh_pass = 0;
  std::int64_t delay_sum = 0;  // time units, accumulated at departure
  std::array<std::int64_t, kNumFlows> arrivals{};
  std::vector<std::pair<std::int64_t, double>> queue_trace;  // (t, mean queue length)

  std::int64_t total_arrivals() const;
  double veh_delay_seconds(double time_unit_seconds) const;
};

struct Observation {
  double queue_len = 0.0;  // mean detected queue over the phase's moving flows
  double wait_time = 0.0;  // mean time-since-arrival of those queued vehicles
};

// Read-only window the controllers see.
class TrafficView {
 public:
  virtual ~TrafficView() = default;
  virtual std::int64_t now() const = 0;
  virtual PhaseId current_phase() const = 0;
  virtual std::int64_t green_elapsed() const = 0;  // time units since last phase change
  virtual Observation observe(PhaseId p) const = 0;
  // Time of the most recent detected arrival on a flow, or -1.
  virtual std::int64_t last_detected_arrival(FlowId f) const = 0;
};

Observation observe_subset(const TrafficView& view, Subset s);

class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  // Called whenever the current command expires; the returned command covers
  // the time until the next decision.
  virtual SignalCommand decide(const TrafficView& view) = 0;
};

struct DecisionEvent {
  std::int64_t t = 0;
  std::string event;  // extend | switch | allred
  PhaseId phase = PhaseId::P0;
  std::int64_t duration = 0;
};

using DecisionLog = std::vector<DecisionEvent>;

// Discrete-time roundabout simulation. Per tick: Poisson arrivals on the 8
// flows (detector-capped), all-red countdown or green discharge at the fixed
// saturation headway, phase countdown, trace sampling. Strictly sequential
// and deterministic for a fixed seed.
class Simulation : public TrafficView {
 public:
  Simulation(const Scenario& scenario, Controller& controller, DecisionLog* log = nullptr);

  bool done() const { return clock_ >= scenario_.horizon; }
  void step();
  // Invokes the controller when the current command has expired.
  void decide_if_due();
  SimMetrics run_to_end();

  std::int64_t now() const override { return clock_; }
  PhaseId current_phase() const override { return phase_; }
  std::int64_t green_elapsed() const override { return clock_ - phase_started_; }
  Observation observe(PhaseId p) const override;
  std::int64_t last_detected_arrival(FlowId f) const override;

  const SimMetrics& metrics() const { return metrics_; }
  std::int64_t queue_length(int flow_idx) const;
  std::int64_t all_red_remaining() const { return all_red_remaining_; }
  std::int64_t phase_remaining() const { return phase_remaining_; }

 private:
  void apply(const SignalCommand& cmd);
  void enter_phase(PhaseId p, std::int64_t duration);

  Scenario scenario_;
  Controller& controller_;
  DecisionLog* log_ = nullptr;
  std::mt19937_64 rng_;

  std::int64_t clock_ = 0;
  PhaseId phase_ = PhaseId::P0;
  std::int64_t phase_remaining_ = 0;
  std::int64_t phase_started_ = 0;
  std::int64_t all_red_remaining_ = 0;
  PhaseId pending_phase_ = PhaseId::P0;
  std::int64_t pending_duration_ = 0;

  std::array<std::deque<std::int64_t>, kNumFlows> queues_;  // arrival timestamps
  std::array<double, kNumFlows> green_credit_{};            // phase-local discharge counters
  std::array<std::int64_t, kNumFlows> last_arrival_;
  SimMetrics metrics_;
};

SimMetrics run(const Scenario& scenario, Controller& controller, DecisionLog* log = nullptr);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& doc);

}  // namespace rftc
