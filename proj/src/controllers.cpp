#include "rftc/controllers.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rftc/pso.hpp"

namespace rftc {

void ControllerParams::validate() const {
  if (initial_duration <= 0 || ud_interval <= 0 || all_red <= 0 || va_window <= 0 ||
      va_increment <= 0 || va_max_green <= 0 || extend_threshold <= 0.0) {
    throw ConfigError("controller parameters must be positive");
  }
}

std::int64_t extension_ticks(double et) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(et + 0.5)));
}

namespace {

class VaController final : public Controller {
 public:
  explicit VaController(const ControllerParams& params) : params_(params) { params_.validate(); }

  std::string name() const override { return "va"; }

  SignalCommand decide(const TrafficView& view) override {
    const PhaseId current = view.current_phase();
    bool detected = false;
    int count = 0;
    auto flows = moving_flows(current, count);
    for (int i = 0; i < count && !detected; ++i) {
      const std::int64_t last = view.last_detected_arrival(flows[i]);
      detected = last >= 0 && view.now() - last < params_.va_window;
    }
    const std::int64_t elapsed = view.green_elapsed();
    if (detected && elapsed < params_.va_max_green) {
      return SignalCommand::extend(
          std::min(params_.va_increment, params_.va_max_green - elapsed));
    }
    return SignalCommand::switch_to(next_in_circle(current), params_.initial_duration);
  }

 private:
  ControllerParams params_;
};

class FuzzyTurnController final : public Controller {
 public:
  FuzzyTurnController(const ControllerParams& params, MembershipSet mfs)
      : params_(params), mfs_(std::move(mfs)), rules_(et_rule_base()) {
    params_.validate();
  }

  std::string name() const override { return "turn"; }

  SignalCommand decide(const TrafficView& view) override {
    const Observation obs = view.observe(view.current_phase());
    const double et =
        infer(rules_, mfs_.ql, obs.queue_len, mfs_.wt, obs.wait_time, mfs_.et).crisp;
    if (et > params_.extend_threshold) return SignalCommand::extend(extension_ticks(et));
    return SignalCommand::switch_to(next_in_circle(view.current_phase()),
                                    params_.initial_duration);
  }

 private:
  ControllerParams params_;
  MembershipSet mfs_;
  RuleBase rules_;
};

class FuzzyJumpController final : public Controller {
 public:
  FuzzyJumpController(const ControllerParams& params, MembershipSet mfs)
      : params_(params), mfs_(std::move(mfs)), rules_(ud_rule_base()) {
    params_.validate();
  }

  std::string name() const override { return "jump"; }

  SignalCommand decide(const TrafficView& view) override {
    const PhaseId current = view.current_phase();
    std::array<double, kNumPhases> ud{};
    for (int i = 0; i < kNumPhases; ++i) {
      const Observation obs = view.observe(phase_from_index(i));
      ud[static_cast<std::size_t>(i)] =
          infer(rules_, mfs_.ql, obs.queue_len, mfs_.wt, obs.wait_time, mfs_.ud).crisp;
    }
    const double best = *std::max_element(ud.begin(), ud.end());
    if (ud[static_cast<std::size_t>(phase_index(current))] == best) {
      return SignalCommand::extend(params_.ud_interval);
    }
    PhaseId target = current;
    for (int i = 0; i < kNumPhases; ++i) {
      if (ud[static_cast<std::size_t>(i)] == best) {
        target = phase_from_index(i);
        break;
      }
    }
    if (consistent(current, target)) {
      return SignalCommand::switch_to(target, params_.ud_interval);
    }
    return SignalCommand::all_red_then_switch(target, params_.all_red, params_.ud_interval);
  }

 private:
  ControllerParams params_;
  MembershipSet mfs_;
  RuleBase rules_;
};

class FuzzyMixController final : public Controller {
 public:
  FuzzyMixController(const ControllerParams& params, MembershipSet mfs, std::string name)
      : params_(params), mfs_(std::move(mfs)), et_rules_(et_rule_base()),
        ud_rules_(ud_rule_base()), name_(std::move(name)) {
    params_.validate();
  }

  std::string name() const override { return name_; }

  SignalCommand decide(const TrafficView& view) override {
    const PhaseId current = view.current_phase();
    const Subset running = subset_of(current);
    const double ud_current = subset_urgency(view, running);
    const double ud_other = subset_urgency(view, other_subset(running));
    if (ud_current >= ud_other) {
      const Observation obs = view.observe(current);
      const double et =
          infer(et_rules_, mfs_.ql, obs.queue_len, mfs_.wt, obs.wait_time, mfs_.et).crisp;
      if (et > params_.extend_threshold) return SignalCommand::extend(extension_ticks(et));
      return SignalCommand::switch_to(next_in_subset(current), params_.initial_duration);
    }
    return SignalCommand::all_red_then_switch(entrance(other_subset(running)),
                                              params_.all_red, params_.initial_duration);
  }

 private:
  double subset_urgency(const TrafficView& view, Subset s) const {
    const Observation obs = observe_subset(view, s);
    return infer(ud_rules_, mfs_.ql, obs.queue_len, mfs_.wt, obs.wait_time, mfs_.ud).crisp;
  }

  ControllerParams params_;
  MembershipSet mfs_;
  RuleBase et_rules_;
  RuleBase ud_rules_;
  std::string name_;
};

void check_trapezoid_ranges(const MembershipSet& set) {
  const SearchBounds bounds = mf_search_bounds();
  int dim = 0;
  for (const FuzzyVariable* var : {&set.ql, &set.wt, &set.et, &set.ud}) {
    for (const FuzzyTerm& term : var->terms) {
      if (!term.trapezoid) {
        dim += 3;
        continue;
      }
      const double v[3] = {term.trapezoid->upper, term.trapezoid->spread,
                           term.trapezoid->center};
      for (double x : v) {
        if (x < bounds.lo[dim] || x > bounds.hi[dim]) {
          throw RangeError("membership parameter " + std::to_string(dim) + " of " + var->name +
                           " '" + term.name + "' outside [" + std::to_string(bounds.lo[dim]) +
                           ", " + std::to_string(bounds.hi[dim]) + "]");
        }
        ++dim;
      }
    }
  }
}

}  // namespace

std::unique_ptr<Controller> make_va_controller(const ControllerParams& params) {
  return std::make_unique<VaController>(params);
}

std::unique_ptr<Controller> make_fuzzy_turn_controller(const ControllerParams& params,
                                                       MembershipSet mfs) {
  return std::make_unique<FuzzyTurnController>(params, std::move(mfs));
}

std::unique_ptr<Controller> make_fuzzy_jump_controller(const ControllerParams& params,
                                                       MembershipSet mfs) {
  return std::make_unique<FuzzyJumpController>(params, std::move(mfs));
}

std::unique_ptr<Controller> make_fuzzy_mix_controller(const ControllerParams& params,
                                                      MembershipSet mfs) {
  return std::make_unique<FuzzyMixController>(params, std::move(mfs), "mix");
}

MembershipSet load_mf_document(const nlohmann::json& doc) {
  MembershipSet set = mf_set_from_json(doc);
  check_trapezoid_ranges(set);
  return set;
}

std::unique_ptr<Controller> make_fuzzy_mix_opt_controller(const nlohmann::json& mf_document,
                                                          const ControllerParams& params) {
  return std::make_unique<FuzzyMixController>(params, load_mf_document(mf_document), "mix-opt");
}

std::unique_ptr<Controller> make_controller(const std::string& name,
                                            const ControllerParams& params,
                                            const nlohmann::json* mf_document) {
  if (name == "va") return make_va_controller(params);
  if (name == "turn") return make_fuzzy_turn_controller(params);
  if (name == "jump") return make_fuzzy_jump_controller(params);
  if (name == "mix") return make_fuzzy_mix_controller(params);
  if (name == "mix-opt") {
    if (!mf_document) throw ConfigError("mix-opt requires a membership-function document");
    return make_fuzzy_mix_opt_controller(*mf_document, params);
  }
  throw ConfigError("unknown controller '" + name + "'");
}

}  // namespace rftc
