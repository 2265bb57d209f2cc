#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "gridsched/app/gridlet.hpp"
#include "gridsched/net/port.hpp"
#include "gridsched/net/tags.hpp"
#include "gridsched/res/calendar.hpp"
#include "gridsched/res/characteristics.hpp"
#include "gridsched/res/share.hpp"
#include "gridsched/sim/engine.hpp"

namespace gridsched::res {

// A gridlet under execution (or queued) at a resource.
struct ResidentGridlet {
    app::Gridlet gridlet;
    sim::SimTime arrival_time = 0.0;
    double remaining_mi = 0.0;
    int machine_id = -1;  // space-shared PE assignment
    int pe_id = -1;
    sim::SimTime last_update = 0.0;
    std::uint64_t arrival_seq = 0;      // share-assignment tie-break
    std::uint64_t completion_tag = 0;   // space-shared: the event that finishes it
};

// Payload of a resource's self-scheduled completion event. Only an event
// whose tag matches the latest scheduled one is honored.
struct CompletionPayload {
    std::uint64_t tag = 0;
};

struct CharacteristicsReply {
    sim::EntityId resource = sim::kNoEntity;
    ResourceCharacteristics characteristics;
};

struct ResourceDynamics {
    int n_executing = 0;
    int n_queued = 0;
    double effective_load = 0.0;
};

struct GridletStatusQuery {
    int gridlet_id = 0;
};

struct GridletStatusReply {
    int gridlet_id = 0;
    app::GridletStatus status = app::GridletStatus::Created;
    bool known = false;
};

// A grid resource entity: registers with the directory, then serves gridlet
// submissions under its allocation policy, driving execution with internal
// completion events. Time-shared resources spread PE shares over all
// resident gridlets; space-shared resources dedicate one PE per gridlet and
// queue the overflow FCFS.
class GridResource final : public sim::Entity {
public:
    GridResource(std::string name, ResourceCharacteristics characteristics,
                 ResourceCalendar calendar, double baud_rate, std::string gis_name,
                 bool return_uses_output_size = true);

    sim::Process body(sim::Context& ctx) override;

    const ResourceCharacteristics& characteristics() const { return chars_; }
    std::uint64_t submits_received() const { return submits_received_; }
    std::uint64_t returns_sent() const { return returns_sent_; }

    // Inspection hooks for tests and tooling.
    const std::vector<ResidentGridlet>& executing() const { return exec_; }
    const std::deque<ResidentGridlet>& queued() const { return submission_queue_; }

private:
    void handle_submit_(sim::Context& ctx, app::Gridlet gridlet);
    void handle_completion_(sim::Context& ctx, const CompletionPayload& payload);
    void handle_calendar_tick_(sim::Context& ctx);

    void time_shared_submit_(sim::Context& ctx, app::Gridlet gridlet);
    void time_shared_completion_(sim::Context& ctx);
    void update_time_shared_progress_(sim::SimTime now);
    void reforecast_time_shared_(sim::Context& ctx);

    void space_shared_submit_(sim::Context& ctx, app::Gridlet gridlet);
    void space_shared_completion_(sim::Context& ctx, std::uint64_t tag);
    bool has_free_pe_() const;
    void allocate_pe_to_gridlet_(sim::Context& ctx, ResidentGridlet resident);

    void return_gridlet_(sim::Context& ctx, ResidentGridlet& resident, sim::SimTime finish);
    void reply_status_(sim::Context& ctx, sim::EntityId requester, int gridlet_id);
    void schedule_calendar_tick_(sim::Context& ctx);
    double current_effective_mips_(sim::SimTime now) const;
    std::vector<ExecEntry> exec_entries_() const;

    ResourceCharacteristics chars_;
    ResourceCalendar calendar_;
    net::OutputPort out_;
    std::string gis_name_;
    bool return_uses_output_size_;

    std::vector<ResidentGridlet> exec_;
    std::deque<ResidentGridlet> submission_queue_;  // space-shared overflow
    std::uint64_t latest_tag_ = 0;                  // freshest internal event tag
    std::uint64_t next_arrival_seq_ = 0;
    sim::SimTime last_update_ = 0.0;
    std::uint64_t submits_received_ = 0;
    std::uint64_t returns_sent_ = 0;
};

// Remaining MI at or below this counts as complete.
inline constexpr double kMiCompletionTolerance = 1e-9;

}  // namespace gridsched::res
