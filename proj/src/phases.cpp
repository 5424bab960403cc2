#include "rftc/phases.hpp"

#include <sstream>
#include <stdexcept>

namespace rftc {

int flow_index(FlowId f) {
  return f.approach + (f.movement == Movement::GoThrough ? 4 : 0);
}

FlowId flow_from_index(int idx) {
  if (idx < 0 || idx >= kNumFlows) throw std::out_of_range("flow index");
  return FlowId{idx % 4, idx < 4 ? Movement::LeftTurn : Movement::GoThrough};
}

std::string flow_name(FlowId f) {
  return std::to_string(f.approach) + (f.movement == Movement::LeftTurn ? "-L" : "-S");
}

PhaseId phase_from_index(int idx) {
  if (idx < 0 || idx >= kNumPhases) throw std::out_of_range("phase index");
  return static_cast<PhaseId>(idx);
}

namespace {
constexpr std::uint8_t bit(int approach, Movement m) {
  return static_cast<std::uint8_t>(1u << (approach + (m == Movement::GoThrough ? 4 : 0)));
}
// P0: 0-S 2-S; P1: 0-L 2-L; P2: 0-L 0-S 2-L 2-S;
// P3: 1-S 3-S; P4: 1-L 3-L; P5: 1-L 1-S 3-L 3-S.
constexpr std::array<std::uint8_t, kNumPhases> kMasks = {
    static_cast<std::uint8_t>(bit(0, Movement::GoThrough) | bit(2, Movement::GoThrough)),
    static_cast<std::uint8_t>(bit(0, Movement::LeftTurn) | bit(2, Movement::LeftTurn)),
    static_cast<std::uint8_t>(bit(0, Movement::GoThrough) | bit(2, Movement::GoThrough) |
                              bit(0, Movement::LeftTurn) | bit(2, Movement::LeftTurn)),
    static_cast<std::uint8_t>(bit(1, Movement::GoThrough) | bit(3, Movement::GoThrough)),
    static_cast<std::uint8_t>(bit(1, Movement::LeftTurn) | bit(3, Movement::LeftTurn)),
    static_cast<std::uint8_t>(bit(1, Movement::GoThrough) | bit(3, Movement::GoThrough) |
                              bit(1, Movement::LeftTurn) | bit(3, Movement::LeftTurn)),
};
constexpr std::array<int, kNumPhases> kNextInSubset = {1, 2, 0, 4, 5, 3};
constexpr std::array<int, kNumPhases> kNextInCircle = {2, 4, 1, 0, 5, 3};
}  // namespace

std::uint8_t moving_flow_mask(PhaseId p) { return kMasks[phase_index(p)]; }

bool flow_moves(PhaseId p, FlowId f) {
  return (moving_flow_mask(p) >> flow_index(f)) & 1u;
}

std::array<FlowId, 4> moving_flows(PhaseId p, int& count) {
  std::array<FlowId, 4> out{};
  count = 0;
  for (int i = 0; i < kNumFlows; ++i) {
    if ((moving_flow_mask(p) >> i) & 1u) out[count++] = flow_from_index(i);
  }
  return out;
}

Subset subset_of(PhaseId p) { return phase_index(p) < 3 ? Subset::I : Subset::II; }

Subset other_subset(Subset s) { return s == Subset::I ? Subset::II : Subset::I; }

PhaseId entrance(Subset s) { return s == Subset::I ? PhaseId::P1 : PhaseId::P4; }

PhaseId next_in_subset(PhaseId p) { return phase_from_index(kNextInSubset[phase_index(p)]); }

PhaseId next_in_circle(PhaseId p) { return phase_from_index(kNextInCircle[phase_index(p)]); }

bool consistent(PhaseId p, PhaseId q) { return subset_of(p) == subset_of(q); }

SignalCommand SignalCommand::extend(std::int64_t d) {
  return SignalCommand{Kind::Extend, PhaseId::P0, d, 0};
}

SignalCommand SignalCommand::switch_to(PhaseId p, std::int64_t d) {
  return SignalCommand{Kind::Switch, p, d, 0};
}

SignalCommand SignalCommand::all_red_then_switch(PhaseId p, std::int64_t red, std::int64_t d) {
  return SignalCommand{Kind::AllRedThenSwitch, p, d, red};
}

std::string phase_table_reference() {
  std::ostringstream os;
  os << "Phases (moving flows):\n";
  for (int i = 0; i < kNumPhases; ++i) {
    PhaseId p = phase_from_index(i);
    os << "  P" << i << "  subset " << (subset_of(p) == Subset::I ? "I " : "II") << "  {";
    int n = 0;
    auto flows = moving_flows(p, n);
    for (int k = 0; k < n; ++k) os << (k ? ", " : "") << flow_name(flows[k]);
    os << "}\n";
  }
  os << "Entrance phases: I -> P1, II -> P4\n";
  os << "Within-subset cycles: P1 -> P2 -> P0 -> P1, P4 -> P5 -> P3 -> P4\n";
  os << "Phase circle: P0 -> P2 -> P1 -> P4 -> P5 -> P3 -> P0\n";
  os << "Consistency: two phases are consistent iff they share a subset.\n";
  return os.str();
}

}  // namespace rftc
