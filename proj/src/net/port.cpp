#include "gridsched/net/port.hpp"

#include <algorithm>

namespace gridsched::net {

sim::SimTime transfer_delay(std::uint64_t size_bytes, double baud_rate) {
    if (!(baud_rate > 0.0)) {
        throw InvalidRate("transfer_delay: baud rate must be positive");
    }
    return 8.0 * static_cast<double>(size_bytes) / baud_rate;
}

OutputPort::OutputPort(double baud_rate) : baud_rate_(baud_rate) {
    if (!(baud_rate > 0.0)) {
        throw InvalidRate("OutputPort: baud rate must be positive");
    }
}

sim::SimTime OutputPort::send(const sim::Context& ctx, sim::EntityId destination, int tag,
                              std::uint64_t size_bytes, std::any data) {
    const sim::SimTime start = std::max(ctx.now(), busy_until_);
    const sim::SimTime arrival = start + transfer_delay(size_bytes, baud_rate_);
    busy_until_ = arrival;
    ctx.engine().schedule_at(ctx.self(), destination, arrival, tag, std::move(data));
    return arrival;
}

}  // namespace gridsched::net
