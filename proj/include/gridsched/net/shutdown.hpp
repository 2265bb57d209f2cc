#pragma once

#include <string>

#include "gridsched/net/tags.hpp"
#include "gridsched/sim/engine.hpp"

namespace gridsched::net {

// Waits for END_OF_SIMULATION from each user, then signals the report
// writer (if one is configured, and waits for its acknowledgement so it can
// still query the statistics entity), and finally broadcasts
// END_OF_SIMULATION to every other entity so the run winds down.
class ShutdownCoordinator final : public sim::Entity {
public:
    ShutdownCoordinator(std::string name, int user_count, std::string report_writer_name = {})
        : Entity(std::move(name)),
          user_count_(user_count),
          report_writer_name_(std::move(report_writer_name)) {}

    sim::Process body(sim::Context& ctx) override;

    bool fired() const { return fired_; }
    sim::SimTime fired_at() const { return fired_at_; }

private:
    int user_count_;
    std::string report_writer_name_;
    bool fired_ = false;
    sim::SimTime fired_at_ = 0.0;
};

}  // namespace gridsched::net
