#include "rftc/sim.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rftc {

void Scenario::validate() const {
  if (horizon <= 0) throw ConfigError("horizon must be positive");
  if (time_unit_seconds <= 0.0) throw ConfigError("time unit must be positive");
  if (detector_cap <= 0) throw ConfigError("detector cap must be positive");
  if (discharge_headway <= 0) throw ConfigError("discharge headway must be positive");
  if (trace_interval <= 0) throw ConfigError("trace interval must be positive");
  for (const RateSchedule& schedule : rates) {
    double prev = -1.0;
    for (const RateWaypoint& wp : schedule) {
      if (wp.lambda < 0.0) throw ConfigError("negative arrival rate");
      if (!(wp.t > prev)) throw ConfigError("waypoints not strictly increasing in t");
      prev = wp.t;
    }
  }
}

double rate_at(const RateSchedule& schedule, double t) {
  if (schedule.empty()) return 0.0;
  if (t <= schedule.front().t) return schedule.front().lambda;
  if (t >= schedule.back().t) return schedule.back().lambda;
  auto it = std::upper_bound(schedule.begin(), schedule.end(), t,
                             [](double v, const RateWaypoint& wp) { return v < wp.t; });
  const RateWaypoint& hi = *it;
  const RateWaypoint& lo = *std::prev(it);
  return lo.lambda + (hi.lambda - lo.lambda) * (t - lo.t) / (hi.t - lo.t);
}

std::int64_t SimMetrics::total_arrivals() const {
  std::int64_t total = 0;
  for (std::int64_t a : arrivals) total += a;
  return total;
}

double SimMetrics::veh_delay_seconds(double time_unit_seconds) const {
  if (veh_pass == 0) return 0.0;
  return static_cast<double>(delay_sum) * time_unit_seconds / static_cast<double>(veh_pass);
}

Observation observe_subset(const TrafficView& view, Subset s) {
  return view.observe(entrance(s));
}

Simulation::Simulation(const Scenario& scenario, Controller& controller, DecisionLog* log)
    : scenario_(scenario), controller_(controller), log_(log), rng_(scenario.rng_seed) {
  scenario_.validate();
  last_arrival_.fill(-1);
  enter_phase(PhaseId::P0, 10);
}

Observation Simulation::observe(PhaseId p) const {
  Observation obs;
  int count = 0;
  auto flows = moving_flows(p, count);
  std::int64_t vehicles = 0;
  std::int64_t wait_total = 0;
  for (int i = 0; i < count; ++i) {
    const auto& q = queues_[static_cast<std::size_t>(flow_index(flows[i]))];
    vehicles += static_cast<std::int64_t>(q.size());
    for (std::int64_t arrival : q) wait_total += clock_ - arrival;
  }
  obs.queue_len = static_cast<double>(vehicles) / static_cast<double>(count);
  obs.wait_time = vehicles > 0 ? static_cast<double>(wait_total) / static_cast<double>(vehicles) : 0.0;
  return obs;
}

std::int64_t Simulation::last_detected_arrival(FlowId f) const {
  return last_arrival_[static_cast<std::size_t>(flow_index(f))];
}

std::int64_t Simulation::queue_length(int flow_idx) const {
  return static_cast<std::int64_t>(queues_[static_cast<std::size_t>(flow_idx)].size());
}

void Simulation::enter_phase(PhaseId p, std::int64_t duration) {
  phase_ = p;
  phase_remaining_ = duration;
  phase_started_ = clock_;
  green_credit_.fill(0);
}

void Simulation::apply(const SignalCommand& cmd) {
  if (cmd.duration <= 0) throw ConfigError("command duration must be positive");
  switch (cmd.kind) {
    case SignalCommand::Kind::Extend:
      phase_remaining_ += cmd.duration;
      if (log_) log_->push_back({clock_, "extend", phase_, cmd.duration});
      break;
    case SignalCommand::Kind::Switch:
      if (log_) log_->push_back({clock_, "switch", cmd.phase, cmd.duration});
      enter_phase(cmd.phase, cmd.duration);
      break;
    case SignalCommand::Kind::AllRedThenSwitch:
      if (cmd.all_red <= 0) throw ConfigError("all-red duration must be positive");
      all_red_remaining_ = cmd.all_red;
      pending_phase_ = cmd.phase;
      pending_duration_ = cmd.duration;
      if (log_) log_->push_back({clock_, "allred", cmd.phase, cmd.all_red});
      break;
  }
}

void Simulation::step() {
  // (a) Poisson arrivals on every flow; over-cap arrivals are undetected.
  for (int f = 0; f < kNumFlows; ++f) {
    const double lambda = rate_at(scenario_.rates[static_cast<std::size_t>(f)],
                                  static_cast<double>(clock_));
    if (lambda <= 0.0) continue;
    std::poisson_distribution<int> dist(lambda);
    const int n = dist(rng_);
    for (int k = 0; k < n; ++k) {
      ++metrics_.arrivals[static_cast<std::size_t>(f)];
      auto& q = queues_[static_cast<std::size_t>(f)];
      if (static_cast<int>(q.size()) < scenario_.detector_cap) {
        q.push_back(clock_);
        last_arrival_[static_cast<std::size_t>(f)] = clock_;
      } else {
        ++metrics_.veh_miss;
      }
    }
  }

  if (all_red_remaining_ > 0) {
    // (b) all-red: no discharge.
    --all_red_remaining_;
    if (all_red_remaining_ == 0) {
      if (log_) log_->push_back({clock_ + 1, "switch", pending_phase_, pending_duration_});
      enter_phase(pending_phase_, pending_duration_);
      phase_started_ = clock_ + 1;
    }
  } else {
    // (c) discharge one vehicle per moving lane per headway of green.
    for (int f = 0; f < kNumFlows; ++f) {
      if (!((moving_flow_mask(phase_) >> f) & 1u)) continue;
      auto& credit = green_credit_[static_cast<std::size_t>(f)];
      credit += 1.0;
      while (credit >= scenario_.discharge_headway) {
        credit -= scenario_.discharge_headway;
        auto& q = queues_[static_cast<std::size_t>(f)];
        if (!q.empty()) {
          ++metrics_.veh_pass;
          metrics_.delay_sum += clock_ - q.front();
          q.pop_front();
        }
      }
    }
    // (d) phase countdown.
    if (phase_remaining_ > 0) --phase_remaining_;
  }

  // (e) queue trace.
  if (clock_ % scenario_.trace_interval == 0) {
    std::int64_t total = 0;
    for (const auto& q : queues_) total += static_cast<std::int64_t>(q.size());
    metrics_.queue_trace.emplace_back(clock_, static_cast<double>(total) / kNumFlows);
  }

  ++clock_;
  decide_if_due();
}

void Simulation::decide_if_due() {
  if (!done() && all_red_remaining_ == 0 && phase_remaining_ == 0) {
    apply(controller_.decide(*this));
  }
}

SimMetrics Simulation::run_to_end() {
  while (!done()) step();
  return metrics_;
}

SimMetrics run(const Scenario& scenario, Controller& controller, DecisionLog* log) {
  Simulation sim(scenario, controller, log);
  return sim.run_to_end();
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json rates = nlohmann::json::object();
  for (int f = 0; f < kNumFlows; ++f) {
    nlohmann::json wps = nlohmann::json::array();
    for (const RateWaypoint& wp : s.rates[static_cast<std::size_t>(f)]) {
      wps.push_back({wp.t, wp.lambda});
    }
    rates[flow_name(flow_from_index(f))] = wps;
  }
  return nlohmann::json{{"name", s.name},
                        {"horizon", s.horizon},
                        {"time_unit_seconds", s.time_unit_seconds},
                        {"detector_cap", s.detector_cap},
                        {"discharge_headway", s.discharge_headway},
                        {"rng_seed", s.rng_seed},
                        {"trace_interval", s.trace_interval},
                        {"rates", rates}};
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  Scenario s;
  try {
    s.name = doc.at("name").get<std::string>();
    s.horizon = doc.value("horizon", s.horizon);
    s.time_unit_seconds = doc.value("time_unit_seconds", s.time_unit_seconds);
    s.detector_cap = doc.value("detector_cap", s.detector_cap);
    s.discharge_headway = doc.value("discharge_headway", s.discharge_headway);
    s.rng_seed = doc.value("rng_seed", s.rng_seed);
    s.trace_interval = doc.value("trace_interval", s.trace_interval);
    const auto& rates = doc.at("rates");
    for (int f = 0; f < kNumFlows; ++f) {
      for (const auto& wp : rates.at(flow_name(flow_from_index(f)))) {
        s.rates[static_cast<std::size_t>(f)].push_back({wp[0].get<double>(), wp[1].get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace rftc
