#pragma once

#include <any>
#include <cstdint>

#include "gridsched/errors.hpp"
#include "gridsched/sim/engine.hpp"

namespace gridsched::net {

// Time to move size_bytes over a link of baud_rate bits per time unit.
sim::SimTime transfer_delay(std::uint64_t size_bytes, double baud_rate);

// Serialized outbound channel of one entity. Transfers occupy the link one
// at a time, so arrivals per (source, destination) keep send order and
// back-to-back equal-size sends arrive equally spaced.
class OutputPort {
public:
    OutputPort() = default;
    explicit OutputPort(double baud_rate);

    double baud_rate() const { return baud_rate_; }

    // Schedules delivery of (tag, data) at the receiver after the link
    // finishes any transfer already in flight plus this one's delay.
    // Returns the arrival time.
    sim::SimTime send(const sim::Context& ctx, sim::EntityId destination, int tag,
                      std::uint64_t size_bytes, std::any data = {});

private:
    double baud_rate_ = static_cast<double>(9600);
    sim::SimTime busy_until_ = 0.0;
};

}  // namespace gridsched::net
