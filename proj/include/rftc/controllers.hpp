#pragma once

#include <memory>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "rftc/fuzzy.hpp"
#include "rftc/sim.hpp"

namespace rftc {

struct ControllerParams {
  std::int64_t initial_duration = 10;  // Theta
  double extend_threshold = 5.0;       // Phi
  std::int64_t ud_interval = 10;       // Delta
  std::int64_t all_red = 5;            // theta
  // Vehicle-actuated extras.
  std::int64_t va_window = 4;
  std::int64_t va_increment = 4;
  std::int64_t va_max_green = 120;

  void validate() const;
};

// ET crisp values become whole-tick extensions, rounded half-up, minimum 1.
std::int64_t extension_ticks(double et);

// Vehicle-actuated baseline: extend while any moving flow saw an arrival in
// the last detection window and the green is under the cap, else advance
// along the phase circle.
std::unique_ptr<Controller> make_va_controller(const ControllerParams& params = {});

// Circle-following fuzzy controller: extend by the inferred ET when it
// exceeds the threshold, else next circle phase. Never inserts all-red.
std::unique_ptr<Controller> make_fuzzy_turn_controller(const ControllerParams& params = {},
                                                       MembershipSet mfs = default_membership_set());

// Interval-driven controller: every Delta it jumps to the phase with the
// largest inferred urgency degree, inserting all-red across subsets.
std::unique_ptr<Controller> make_fuzzy_jump_controller(const ControllerParams& params = {},
                                                       MembershipSet mfs = default_membership_set());

// Two-layer controller: the outer layer compares subset urgency degrees and
// jumps (with all-red) to the other subset's entrance phase when it is more
// urgent; the inner layer extends or advances within the current subset.
std::unique_ptr<Controller> make_fuzzy_mix_controller(const ControllerParams& params = {},
                                                      MembershipSet mfs = default_membership_set());

// FUZZY-MIX with a trained membership-function document. Trapezoid-form
// terms are checked against the optimizer's search box (RangeError outside).
std::unique_ptr<Controller> make_fuzzy_mix_opt_controller(const nlohmann::json& mf_document,
                                                          const ControllerParams& params = {});

MembershipSet load_mf_document(const nlohmann::json& doc);

// va | turn | jump | mix | mix-opt (mix-opt requires a membership document).
std::unique_ptr<Controller> make_controller(const std::string& name,
                                            const ControllerParams& params = {},
                                            const nlohmann::json* mf_document = nullptr);

}  // namespace rftc
