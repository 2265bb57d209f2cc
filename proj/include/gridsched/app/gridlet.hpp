#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridsched/sim/event.hpp"

namespace gridsched::app {

enum class GridletStatus { Created, Submitted, Queued, InExec, Success, Canceled };

std::string to_string(GridletStatus status);

// A job package: length in MI, I/O sizes in bytes, owner, and the timing and
// cost records filled in as it moves through broker and resource.
struct Gridlet {
    int id = 0;
    double length_mi = 0.0;
    std::uint64_t input_size_bytes = 0;
    std::uint64_t output_size_bytes = 0;
    sim::EntityId owner = sim::kNoEntity;
    GridletStatus status = GridletStatus::Created;

    sim::SimTime submission_time = 0.0;  // dispatched by the broker
    sim::SimTime arrival_time = 0.0;     // received by the resource
    sim::SimTime exec_start_time = 0.0;  // first assigned processing share
    sim::SimTime finish_time = 0.0;
    sim::SimTime wall_clock = 0.0;  // finish - arrival at the resource
    double processing_cost = 0.0;   // G$
    sim::EntityId executed_on = sim::kNoEntity;
};

using GridletBatch = std::vector<Gridlet>;

}  // namespace gridsched::app
