#pragma once

#include <string>
#include <vector>

#include "gridsched/net/port.hpp"
#include "gridsched/net/tags.hpp"
#include "gridsched/sim/engine.hpp"

namespace gridsched::net {

struct DirectoryRecord {
    sim::EntityId resource = sim::kNoEntity;
    sim::SimTime registration_time = 0.0;
};

// Payload of a RESOURCE_LIST reply: registered resource ids in registration
// order.
using ResourceList = std::vector<sim::EntityId>;

// Directory entity: resources register via REGISTER_RESOURCE, requesters get
// the registered ids back as a synchronous RESOURCE_LIST request/reply pair.
class InformationService final : public sim::Entity {
public:
    explicit InformationService(std::string name, double baud_rate = tags::DEFAULT_BAUD_RATE,
                                bool bypass_network = false)
        : Entity(std::move(name)), out_(baud_rate), bypass_network_(bypass_network) {}

    sim::Process body(sim::Context& ctx) override;

    const std::vector<DirectoryRecord>& records() const { return records_; }

private:
    void register_resource_(sim::EntityId resource, sim::SimTime at);

    OutputPort out_;
    bool bypass_network_;
    std::vector<DirectoryRecord> records_;
};

}  // namespace gridsched::net
