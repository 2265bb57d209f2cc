#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridsched/broker/experiment.hpp"
#include "gridsched/net/port.hpp"
#include "gridsched/sim/engine.hpp"

namespace gridsched::broker {

// Grid user: hands its experiment to its broker, waits for the processed
// experiment back, then signals the shutdown coordinator.
class UserEntity final : public sim::Entity {
public:
    UserEntity(std::string name, std::string broker_name, std::string shutdown_name,
               Experiment experiment, double baud_rate);

    sim::Process body(sim::Context& ctx) override;

    const std::optional<Experiment>& result() const { return result_; }

private:
    std::string broker_name_;
    std::string shutdown_name_;
    Experiment experiment_;
    net::OutputPort out_;
    std::optional<Experiment> result_;
};

// Replay-style user: submits explicitly timed gridlets directly to one
// resource (no broker) and collects the returns. Used for micro scenarios
// where exact arrival times matter.
class TraceUser final : public sim::Entity {
public:
    struct TraceItem {
        app::Gridlet gridlet;
        sim::SimTime submit_at = 0.0;
    };

    TraceUser(std::string name, std::string resource_name, std::string shutdown_name,
              std::string statistics_name, std::vector<TraceItem> items, double baud_rate);

    sim::Process body(sim::Context& ctx) override;

    const app::GridletBatch& returned() const { return returned_; }

private:
    std::string resource_name_;
    std::string shutdown_name_;
    std::string statistics_name_;
    std::vector<TraceItem> items_;
    net::OutputPort out_;
    app::GridletBatch returned_;  // in return order
};

}  // namespace gridsched::broker
