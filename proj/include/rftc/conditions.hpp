#pragma once

#include <array>
#include <string>
#include <vector>

#include "rftc/sim.hpp"

namespace rftc {

// One built-in traffic condition: per-flow arrival-rate levels at fractions
// of the horizon. Steady conditions carry one level, time-varying ones two
// (start and end; rates interpolate linearly in between).
struct Condition {
  std::string name;
  std::vector<std::array<double, kNumFlows>> levels;  // flow order 0-L..3-L, 0-S..3-S
  bool steady() const { return levels.size() == 1; }
};

// C1..C16. C1-C8 steady (C1-C4 light, C5-C8 heavy); C9-C16 ramp from a start
// level to an end level over the horizon.
const std::vector<Condition>& builtin_conditions();
const Condition& condition_by_name(const std::string& name);

Scenario make_scenario(const Condition& condition, std::int64_t horizon, std::uint64_t seed);
Scenario make_scenario(const std::string& condition_name, std::int64_t horizon,
                       std::uint64_t seed);

std::string conditions_reference();

}  // namespace rftc
