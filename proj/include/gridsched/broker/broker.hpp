#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "gridsched/broker/experiment.hpp"
#include "gridsched/net/port.hpp"
#include "gridsched/net/tags.hpp"
#include "gridsched/res/characteristics.hpp"
#include "gridsched/sim/engine.hpp"

namespace gridsched::broker {

// Broker-side view of one discovered resource.
struct BrokerResourceRecord {
    sim::EntityId resource = sim::kNoEntity;
    std::string name;
    res::ResourceCharacteristics characteristics;
    double cost_per_mi = 0.0;

    std::deque<int> assigned_pending;  // assigned gridlet ids awaiting dispatch
    int dispatched = 0;
    int completed = 0;
    double completed_mi = 0.0;
    double measured_share_mips = 0.0;  // starts optimistic: all PEs available
    bool has_dispatched = false;
    sim::SimTime first_dispatch_time = 0.0;
    double expenses = 0.0;

    int in_flight() const { return dispatched - completed; }
    int active_assigned() const { return static_cast<int>(assigned_pending.size()) + in_flight(); }
    int staging_limit(int max_gridlets_per_pe) const {
        return max_gridlets_per_pe * characteristics.total_pes();
    }
};

// Per-resource assignment targets produced by one advisor pass.
struct SchedulePlan {
    struct Entry {
        sim::EntityId resource = sim::kNoEntity;
        int predicted_capacity = 0;  // jobs consumable by the deadline
        int active_after = 0;        // assigned (pending + in flight) after the pass
    };
    std::vector<Entry> entries;
};

struct DispatchOrder {
    sim::EntityId resource = sim::kNoEntity;
    int gridlet_id = 0;
};

// Engine-independent deadline/budget-constrained cost-optimization state:
// resource records, the unassigned queue, and the advisor / dispatcher /
// receiver transitions. The Broker entity wraps this with event traffic.
class BrokerCore {
public:
    explicit BrokerCore(Experiment experiment, int max_gridlets_per_pe = 2);

    void set_owner(sim::EntityId owner);
    void add_resource(sim::EntityId id, std::string name,
                      res::ResourceCharacteristics characteristics);
    // Sorts records by cost per MI (ties by discovery order) and resolves
    // factor-based constraints; call once after discovery/trading.
    void finalize_resources();

    // Refreshes per-resource consumption predictions, strips over-commitments
    // back to the unassigned queue, then fills cheap resources first while
    // the budget allows.
    SchedulePlan schedule_advisor(sim::SimTime clock);

    // Selects gridlets to stage now, bounded per resource by
    // max_gridlets_per_pe * n_pes minus what is already in flight, and marks
    // them dispatched. The caller must actually send each order.
    std::vector<DispatchOrder> plan_dispatch(sim::SimTime clock);

    // Processes one returned gridlet: marks it SUCCESS, accounts expenses,
    // and recalibrates the resource's measured MI share.
    void on_gridlet_return(const app::Gridlet& returned, sim::SimTime clock);

    bool all_done() const { return unfinished_count() == 0; }
    int unfinished_count() const;
    int total_in_flight() const;
    double expenses() const { return expenses_; }
    // Actual spend plus the cost of work currently on resources.
    double committed_cost() const { return expenses_ + in_flight_cost_; }

    Experiment& experiment() { return experiment_; }
    const Experiment& experiment() const { return experiment_; }
    const std::vector<BrokerResourceRecord>& records() const { return records_; }
    const std::deque<int>& unassigned() const { return unassigned_; }
    const app::Gridlet& gridlet(int id) const;
    int max_gridlets_per_pe() const { return max_gridlets_per_pe_; }

private:
    app::Gridlet& gridlet_(int id);
    BrokerResourceRecord& record_for_(sim::EntityId resource);
    void reclaim_(BrokerResourceRecord& record, int count);

    Experiment experiment_;
    int max_gridlets_per_pe_;
    std::vector<BrokerResourceRecord> records_;  // sorted cheapest per-MI first
    std::deque<int> unassigned_;
    std::map<int, std::size_t> gridlet_index_;
    double expenses_ = 0.0;        // cost of completed gridlets
    double in_flight_cost_ = 0.0;  // cost of dispatched, unfinished gridlets
    bool finalized_ = false;
};

// Per-user broker entity: discovery, trading, constraint derivation, then
// the advisor/dispatcher/receiver cycle until the work is done or the
// deadline or budget runs out. In-flight gridlets are awaited (never
// cancelled), so termination can exceed the deadline.
class Broker final : public sim::Entity {
public:
    Broker(std::string name, std::string gis_name, std::string statistics_name,
           double baud_rate, int max_gridlets_per_pe = 2);

    sim::Process body(sim::Context& ctx) override;

    // Set when the run finished and the experiment went back to the user.
    const Experiment* result() const { return core_ ? &core_->experiment() : nullptr; }
    const BrokerCore* core() const { return core_.get(); }

private:
    int drain_returns_(sim::Context& ctx);
    void record_stat_(sim::Context& ctx, sim::EntityId stats, const std::string& user_name,
                      const std::string& metric, double value);

    std::string gis_name_;
    std::string statistics_name_;
    net::OutputPort out_;
    int max_gridlets_per_pe_;
    std::unique_ptr<BrokerCore> core_;
};

}  // namespace gridsched::broker
