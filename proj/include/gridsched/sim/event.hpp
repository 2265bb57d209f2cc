#pragma once

#include <any>
#include <cstdint>

namespace gridsched::sim {

// Simulation time in abstract time units. Never decreases over a run.
using SimTime = double;

using EntityId = int;

inline constexpr EntityId kNoEntity = -1;

// A timestamped message between entities. `seq` is a global insertion
// counter; (time, seq) is the total delivery order, so equal-time events
// pop in insertion order.
struct Event {
    SimTime time = 0.0;
    EntityId source = kNoEntity;
    EntityId destination = kNoEntity;
    int tag = 0;
    std::uint64_t seq = 0;
    std::any data;
};

}  // namespace gridsched::sim
