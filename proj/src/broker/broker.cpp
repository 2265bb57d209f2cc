#include "gridsched/broker/broker.hpp"

#include <algorithm>
#include <cmath>

#include "gridsched/broker/estimates.hpp"
#include "gridsched/net/info_service.hpp"
#include "gridsched/res/grid_resource.hpp"
#include "gridsched/stats/statistics.hpp"

namespace gridsched::broker {

using app::Gridlet;
using app::GridletStatus;

BrokerCore::BrokerCore(Experiment experiment, int max_gridlets_per_pe)
    : experiment_(std::move(experiment)), max_gridlets_per_pe_(max_gridlets_per_pe) {
    for (std::size_t i = 0; i < experiment_.gridlets.size(); ++i) {
        gridlet_index_[experiment_.gridlets[i].id] = i;
        unassigned_.push_back(experiment_.gridlets[i].id);
    }
}

void BrokerCore::set_owner(sim::EntityId owner) {
    for (auto& g : experiment_.gridlets) {
        g.owner = owner;
    }
}

Gridlet& BrokerCore::gridlet_(int id) {
    const auto it = gridlet_index_.find(id);
    if (it == gridlet_index_.end()) {
        throw ProtocolError("unknown gridlet id " + std::to_string(id));
    }
    return experiment_.gridlets[it->second];
}

const Gridlet& BrokerCore::gridlet(int id) const {
    return const_cast<BrokerCore*>(this)->gridlet_(id);
}

BrokerResourceRecord& BrokerCore::record_for_(sim::EntityId resource) {
    for (auto& r : records_) {
        if (r.resource == resource) {
            return r;
        }
    }
    throw ProtocolError("no broker record for resource entity " + std::to_string(resource));
}

void BrokerCore::add_resource(sim::EntityId id, std::string name,
                              res::ResourceCharacteristics characteristics) {
    BrokerResourceRecord rec;
    rec.resource = id;
    rec.name = std::move(name);
    rec.cost_per_mi = cost_per_mi(characteristics);
    rec.measured_share_mips = characteristics.total_pes() * characteristics.pe_mips();
    rec.characteristics = std::move(characteristics);
    records_.push_back(std::move(rec));
}

void BrokerCore::finalize_resources() {
    std::stable_sort(records_.begin(), records_.end(),
                     [](const BrokerResourceRecord& a, const BrokerResourceRecord& b) {
                         return a.cost_per_mi < b.cost_per_mi;
                     });
    if (experiment_.use_factors && !experiment_.gridlets.empty()) {
        std::vector<res::ResourceCharacteristics> chars;
        chars.reserve(records_.size());
        for (const auto& r : records_) {
            chars.push_back(r.characteristics);
        }
        experiment_.deadline = compute_deadline(experiment_.gridlets, chars, experiment_.d_factor);
        experiment_.budget =
            compute_budget(experiment_.gridlets, chars, experiment_.b_factor, experiment_.deadline);
    }
    finalized_ = true;
}

int BrokerCore::unfinished_count() const {
    return static_cast<int>(experiment_.gridlets.size()) - experiment_.completed_count();
}

int BrokerCore::total_in_flight() const {
    int n = 0;
    for (const auto& r : records_) {
        n += r.in_flight();
    }
    return n;
}

void BrokerCore::reclaim_(BrokerResourceRecord& record, int count) {
    std::vector<int> reclaimed;
    for (int i = 0; i < count && !record.assigned_pending.empty(); ++i) {
        reclaimed.push_back(record.assigned_pending.back());
        record.assigned_pending.pop_back();
    }
    std::sort(reclaimed.begin(), reclaimed.end());
    unassigned_.insert(unassigned_.begin(), reclaimed.begin(), reclaimed.end());
}

SchedulePlan BrokerCore::schedule_advisor(sim::SimTime clock) {
    SchedulePlan plan;
    if (!finalized_) {
        throw SimError("schedule_advisor before finalize_resources");
    }
    if (expenses_ >= experiment_.budget) {
        return plan;  // budget exhausted: nothing more gets planned
    }
    const double time_left = std::max(0.0, experiment_.deadline - clock);

    double remaining_mi_sum = 0.0;
    int remaining_jobs = 0;
    for (const auto& g : experiment_.gridlets) {
        if (g.status != GridletStatus::Success) {
            remaining_mi_sum += g.length_mi;
            ++remaining_jobs;
        }
    }
    const double mean_mi = remaining_jobs > 0 ? remaining_mi_sum / remaining_jobs : 0.0;

    // Predicted consumption per resource from the measured share.
    std::vector<int> predicted(records_.size(), 0);
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (mean_mi > 0.0) {
            predicted[i] =
                static_cast<int>(std::floor(records_[i].measured_share_mips * time_left / mean_mi));
        }
    }

    // Shed over-commitments back to the unassigned queue.
    for (std::size_t i = 0; i < records_.size(); ++i) {
        auto& rec = records_[i];
        if (rec.active_assigned() > predicted[i]) {
            reclaim_(rec, rec.active_assigned() - predicted[i]);
        }
    }

    // Fill cheap resources first, from the unassigned queue and then
    // from the pending queues of more expensive resources. A job is only
    // placed where the budget could still cover it on top of the work
    // already on resources; the dispatcher re-checks before submitting.
    for (std::size_t i = 0; i < records_.size(); ++i) {
        auto& rec = records_[i];
        while (rec.active_assigned() < predicted[i]) {
            int job_id = -1;
            bool from_unassigned = false;
            if (!unassigned_.empty()) {
                job_id = unassigned_.front();
                from_unassigned = true;
            } else {
                for (std::size_t j = records_.size(); j-- > i + 1;) {
                    if (!records_[j].assigned_pending.empty()) {
                        job_id = records_[j].assigned_pending.back();
                        records_[j].assigned_pending.pop_back();
                        break;
                    }
                }
            }
            if (job_id < 0) {
                break;  // nothing left to place
            }
            const double job_cost = gridlet_(job_id).length_mi * rec.cost_per_mi;
            if (committed_cost() + job_cost > experiment_.budget + 1e-9) {
                if (!from_unassigned) {
                    unassigned_.push_front(job_id);
                }
                break;
            }
            if (from_unassigned) {
                unassigned_.pop_front();
            }
            rec.assigned_pending.push_back(job_id);
        }
    }

    plan.entries.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        plan.entries.push_back(SchedulePlan::Entry{records_[i].resource, predicted[i],
                                                   records_[i].active_assigned()});
    }
    return plan;
}

std::vector<DispatchOrder> BrokerCore::plan_dispatch(sim::SimTime clock) {
    std::vector<DispatchOrder> orders;
    for (auto& rec : records_) {
        int slots = rec.staging_limit(max_gridlets_per_pe_) - rec.in_flight();
        while (slots > 0 && !rec.assigned_pending.empty()) {
            const int id = rec.assigned_pending.front();
            const double job_cost = gridlet_(id).length_mi * rec.cost_per_mi;
            if (committed_cost() + job_cost > experiment_.budget + 1e-9) {
                break;  // submitting this would overrun the budget
            }
            rec.assigned_pending.pop_front();
            Gridlet& g = gridlet_(id);
            g.status = GridletStatus::Submitted;
            g.submission_time = clock;
            ++rec.dispatched;
            in_flight_cost_ += job_cost;
            if (!rec.has_dispatched) {
                rec.has_dispatched = true;
                rec.first_dispatch_time = clock;
            }
            orders.push_back(DispatchOrder{rec.resource, id});
            --slots;
        }
    }
    return orders;
}

void BrokerCore::on_gridlet_return(const Gridlet& returned, sim::SimTime clock) {
    Gridlet& g = gridlet_(returned.id);
    if (g.status == GridletStatus::Success) {
        throw ProtocolError("gridlet " + std::to_string(returned.id) + " returned twice");
    }
    BrokerResourceRecord& rec = record_for_(returned.executed_on);
    g = returned;

    const double cost =
        g.length_mi / rec.characteristics.pe_mips() * rec.characteristics.cost_per_pe_time_unit;
    rec.expenses += cost;
    expenses_ += cost;
    in_flight_cost_ = std::max(0.0, in_flight_cost_ - g.length_mi * rec.cost_per_mi);
    experiment_.expenses = expenses_;

    // Share extrapolation: the returned job's observed rate times the number
    // of jobs it shared the resource with (in flight, itself included).
    // Unlike total-MI-over-total-time, this has no warm-up bias, so a
    // resource that is keeping up is not stripped during the first batches.
    const double duration = clock - g.submission_time;
    if (duration > 0.0) {
        rec.measured_share_mips = g.length_mi / duration * rec.in_flight();
    }
    ++rec.completed;
    rec.completed_mi += g.length_mi;
}

// --- entity ---

Broker::Broker(std::string name, std::string gis_name, std::string statistics_name,
               double baud_rate, int max_gridlets_per_pe)
    : Entity(std::move(name)),
      gis_name_(std::move(gis_name)),
      statistics_name_(std::move(statistics_name)),
      out_(baud_rate),
      max_gridlets_per_pe_(max_gridlets_per_pe) {}

int Broker::drain_returns_(sim::Context& ctx) {
    int received = 0;
    while (auto ev = ctx.try_next_event()) {
        if (ev->tag == net::tags::GRIDLET_RETURN) {
            // Share recalibration uses the return's own arrival time, not the
            // (possibly later) processing time.
            core_->on_gridlet_return(std::any_cast<Gridlet>(ev->data), ev->time);
            ++received;
        }
        // Anything else at this stage carries no work for the broker.
    }
    return received;
}

void Broker::record_stat_(sim::Context& ctx, sim::EntityId stats, const std::string& user_name,
                          const std::string& metric, double value) {
    stats::StatRecord record;
    record.category = user_name + ".USER." + metric;
    record.value = value;
    out_.send(ctx, stats, net::tags::RECORD_STATISTICS, 0, std::move(record));
}

sim::Process Broker::body(sim::Context& ctx) {
    const sim::Event request = co_await ctx.wait_event(sim::match_tag(net::tags::EXPERIMENT));
    const sim::EntityId user = request.source;
    const std::string user_name = ctx.name_of(user);

    core_ = std::make_unique<BrokerCore>(std::any_cast<Experiment>(request.data),
                                         max_gridlets_per_pe_);
    Experiment& exp = core_->experiment();
    exp.start_time = ctx.now();
    exp.status = ExperimentStatus::InProgress;
    core_->set_owner(ctx.self());

    // Resource discovery.
    const sim::EntityId gis = ctx.lookup(gis_name_);
    out_.send(ctx, gis, net::tags::RESOURCE_LIST, 0);
    const sim::Event list_reply =
        co_await ctx.wait_event(sim::match_tag_from(net::tags::RESOURCE_LIST, gis));
    const auto resource_ids = std::any_cast<net::ResourceList>(list_reply.data);

    // Resource trading: static characteristics and cost, queried once.
    for (const sim::EntityId rid : resource_ids) {
        out_.send(ctx, rid, net::tags::RESOURCE_CHARACTERISTICS, 0);
        const sim::Event reply =
            co_await ctx.wait_event(sim::match_tag_from(net::tags::RESOURCE_CHARACTERISTICS, rid));
        auto chars = std::any_cast<res::CharacteristicsReply>(reply.data);
        core_->add_resource(rid, ctx.name_of(rid), std::move(chars.characteristics));
    }
    core_->finalize_resources();

    // Scheduling loop: advise, dispatch, receive; pause when idle. The pause
    // is a timed wait, so an arriving result resumes scheduling immediately
    // instead of sitting until the next poll.
    while (!core_->all_done()) {
        if (ctx.now() >= exp.deadline || core_->expenses() >= exp.budget) {
            break;
        }
        core_->schedule_advisor(ctx.now());
        const auto orders = core_->plan_dispatch(ctx.now());
        for (const auto& order : orders) {
            const Gridlet& g = core_->gridlet(order.gridlet_id);
            out_.send(ctx, order.resource, net::tags::GRIDLET_SUBMIT, g.input_size_bytes, g);
        }
        const int received = drain_returns_(ctx);
        if (orders.empty() && received == 0 && !core_->all_done()) {
            const double deadline_left = exp.deadline - ctx.now();
            const auto ev = co_await ctx.wait_event_until(
                sim::match_tag(net::tags::GRIDLET_RETURN), std::max(deadline_left * 0.01, 1.0));
            if (ev.has_value()) {
                core_->on_gridlet_return(std::any_cast<Gridlet>(ev->data), ev->time);
            }
        }
    }

    // Await work still on resources; completions past the deadline count.
    while (core_->total_in_flight() > 0) {
        const sim::Event ev = co_await ctx.wait_event(sim::match_tag(net::tags::GRIDLET_RETURN));
        core_->on_gridlet_return(std::any_cast<Gridlet>(ev.data), ev.time);
    }

    exp.end_time = ctx.now();
    exp.status = core_->all_done() ? ExperimentStatus::Completed
                                   : ExperimentStatus::ConstraintExhausted;

    if (!statistics_name_.empty()) {
        const sim::EntityId stats = ctx.lookup(statistics_name_);
        const double duration = exp.end_time - exp.start_time;
        const double window = exp.deadline - exp.start_time;
        const int total = static_cast<int>(exp.gridlets.size());
        record_stat_(ctx, stats, user_name, "TimeUtilization",
                     window > 0.0 ? duration / window : 0.0);
        record_stat_(ctx, stats, user_name, "GridletCompletionFactor",
                     total > 0 ? static_cast<double>(exp.completed_count()) / total : 1.0);
        record_stat_(ctx, stats, user_name, "BudgetUtilization",
                     exp.budget > 0.0 ? exp.expenses / exp.budget : 0.0);
    }

    out_.send(ctx, user, net::tags::EXPERIMENT, 0, exp);
}

}  // namespace gridsched::broker
