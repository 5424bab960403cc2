#include "rftc/conditions.hpp"

#include <iomanip>
#include <sstream>

namespace rftc {

namespace {
// Flow order: 0-L, 1-L, 2-L, 3-L, 0-S, 1-S, 2-S, 3-S (vehicles per time unit).
std::vector<Condition> build_table() {
  std::vector<Condition> table;
  auto steady = [&](std::string name, std::array<double, kNumFlows> rates) {
    table.push_back({std::move(name), {rates}});
  };
  auto ramp = [&](std::string name, std::array<double, kNumFlows> from,
                  std::array<double, kNumFlows> to) {
    table.push_back({std::move(name), {from, to}});
  };
  steady("C1", {0.102, 0.097, 0.092, 0.123, 0.118, 0.108, 0.108, 0.125});
  steady("C2", {0.156, 0.099, 0.143, 0.102, 0.176, 0.111, 0.180, 0.108});
  steady("C3", {0.067, 0.074, 0.068, 0.068, 0.178, 0.149, 0.158, 0.169});
  steady("C4", {0.057, 0.111, 0.069, 0.121, 0.154, 0.199, 0.142, 0.212});
  steady("C5", {0.178, 0.165, 0.189, 0.215, 0.199, 0.212, 0.203, 0.222});
  steady("C6", {0.181, 0.121, 0.243, 0.132, 0.209, 0.131, 0.255, 0.143});
  steady("C7", {0.132, 0.114, 0.117, 0.108, 0.251, 0.232, 0.223, 0.209});
  steady("C8", {0.101, 0.188, 0.098, 0.200, 0.198, 0.287, 0.216, 0.320});
  ramp("C9", {0.089, 0.102, 0.103, 0.077, 0.112, 0.108, 0.131, 0.105},
       {0.178, 0.177, 0.190, 0.168, 0.198, 0.189, 0.179, 0.170});
  ramp("C10", {0.057, 0.066, 0.072, 0.072, 0.080, 0.066, 0.073, 0.081},
       {0.224, 0.232, 0.189, 0.250, 0.200, 0.240, 0.232, 0.255});
  ramp("C11", {0.156, 0.078, 0.123, 0.050, 0.158, 0.089, 0.149, 0.101},
       {0.223, 0.182, 0.189, 0.132, 0.240, 0.194, 0.278, 0.201});
  ramp("C12", {0.101, 0.058, 0.097, 0.034, 0.125, 0.077, 0.102, 0.073},
       {0.242, 0.179, 0.199, 0.155, 0.252, 0.177, 0.280, 0.156});
  ramp("C13", {0.101, 0.097, 0.108, 0.099, 0.159, 0.188, 0.180, 0.176},
       {0.158, 0.135, 0.138, 0.160, 0.277, 0.256, 0.280, 0.310});
  ramp("C14", {0.057, 0.077, 0.079, 0.100, 0.140, 0.161, 0.151, 0.130},
       {0.158, 0.170, 0.120, 0.155, 0.300, 0.341, 0.400, 0.299});
  ramp("C15", {0.055, 0.089, 0.048, 0.100, 0.121, 0.189, 0.148, 0.210},
       {0.101, 0.151, 0.078, 0.162, 0.178, 0.298, 0.210, 0.250});
  ramp("C16", {0.055, 0.102, 0.077, 0.134, 0.160, 0.205, 0.144, 0.245},
       {0.158, 0.189, 0.176, 0.188, 0.298, 0.315, 0.298, 0.341});
  return table;
}
}  // namespace

const std::vector<Condition>& builtin_conditions() {
  static const std::vector<Condition> table = build_table();
  return table;
}

const Condition& condition_by_name(const std::string& name) {
  for (const Condition& c : builtin_conditions()) {
    if (c.name == name) return c;
  }
  throw ConfigError("unknown condition '" + name + "' (expected C1..C16)");
}

Scenario make_scenario(const Condition& condition, std::int64_t horizon, std::uint64_t seed) {
  Scenario s;
  s.name = condition.name;
  s.horizon = horizon;
  s.rng_seed = seed;
  const std::size_t n = condition.levels.size();
  for (int f = 0; f < kNumFlows; ++f) {
    auto& schedule = s.rates[static_cast<std::size_t>(f)];
    for (std::size_t k = 0; k < n; ++k) {
      const double t = n == 1 ? 0.0
                              : static_cast<double>(horizon) * static_cast<double>(k) /
                                    static_cast<double>(n - 1);
      schedule.push_back({t, condition.levels[k][static_cast<std::size_t>(f)]});
    }
  }
  s.validate();
  return s;
}

Scenario make_scenario(const std::string& condition_name, std::int64_t horizon,
                       std::uint64_t seed) {
  return make_scenario(condition_by_name(condition_name), horizon, seed);
}

std::string conditions_reference() {
  std::ostringstream os;
  os << "Built-in traffic conditions (vehicles per time unit; a time unit is 0.5 s)\n";
  os << std::left << std::setw(11) << "condition";
  for (int f = 0; f < kNumFlows; ++f) {
    os << std::setw(8) << flow_name(flow_from_index(f));
  }
  os << "\n";
  os << std::fixed << std::setprecision(3);
  for (const Condition& c : builtin_conditions()) {
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
      std::string label = c.name;
      if (!c.steady()) label += k == 0 ? " start" : " end";
      os << std::left << std::setw(11) << label;
      for (int f = 0; f < kNumFlows; ++f) {
        os << std::setw(8) << c.levels[k][static_cast<std::size_t>(f)];
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace rftc
