#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace rftc {

// One of the eight signal-controlled entrance flows. Right-turn lanes have
// their own roadway and never meet a stop line, so they are not modeled.
enum class Movement : std::uint8_t { LeftTurn, GoThrough };

struct FlowId {
  int approach = 0;  // 0..3
  Movement movement = Movement::GoThrough;

  friend bool operator==(const FlowId&, const FlowId&) = default;
};

// Dense index 0..7 used for per-flow arrays: 0-L,1-L,2-L,3-L,0-S,1-S,2-S,3-S.
constexpr int kNumFlows = 8;
int flow_index(FlowId f);
FlowId flow_from_index(int idx);
std::string flow_name(FlowId f);

enum class PhaseId : std::uint8_t { P0, P1, P2, P3, P4, P5 };
constexpr int kNumPhases = 6;
PhaseId phase_from_index(int idx);
inline int phase_index(PhaseId p) { return static_cast<int>(p); }

enum class Subset : std::uint8_t { I, II };

// Moving-flow sets of the six phases, as a fixed 8-bit mask per phase
// (bit = flow_index).
std::uint8_t moving_flow_mask(PhaseId p);
bool flow_moves(PhaseId p, FlowId f);
std::array<FlowId, 4> moving_flows(PhaseId p, int& count);

Subset subset_of(PhaseId p);
Subset other_subset(Subset s);
PhaseId entrance(Subset s);

// Within-subset service cycles 1->2->0->1 and 4->5->3->4; every interior
// transition shares a moving flow with its predecessor.
PhaseId next_in_subset(PhaseId p);

// Fixed cyclic order 0->2->1->4->5->3->0 used by circle-following controllers.
PhaseId next_in_circle(PhaseId p);

// Two phases are consistent iff they serve the same direction pair.
bool consistent(PhaseId p, PhaseId q);

// Controller-to-signal contract.
struct SignalCommand {
  enum class Kind { Extend, Switch, AllRedThenSwitch };
  Kind kind = Kind::Extend;
  PhaseId phase = PhaseId::P0;   // target phase (Switch / AllRedThenSwitch)
  std::int64_t duration = 1;     // green duration in time units, > 0
  std::int64_t all_red = 0;      // all-red duration (AllRedThenSwitch only)

  static SignalCommand extend(std::int64_t d);
  static SignalCommand switch_to(PhaseId p, std::int64_t d);
  static SignalCommand all_red_then_switch(PhaseId p, std::int64_t red, std::int64_t d);
};

// Human-readable reference dump of the phase tables (CLI `phases`).
std::string phase_table_reference();

}  // namespace rftc
