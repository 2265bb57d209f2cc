#include "gridsched/res/grid_resource.hpp"

#include <algorithm>
#include <cmath>

namespace gridsched::res {

using app::Gridlet;
using app::GridletStatus;

GridResource::GridResource(std::string name, ResourceCharacteristics characteristics,
                           ResourceCalendar calendar, double baud_rate, std::string gis_name,
                           bool return_uses_output_size)
    : Entity(std::move(name)),
      chars_(std::move(characteristics)),
      calendar_(calendar),
      out_(baud_rate),
      gis_name_(std::move(gis_name)),
      return_uses_output_size_(return_uses_output_size) {
    chars_.validate();
    calendar_.validate();
}

sim::Process GridResource::body(sim::Context& ctx) {
    if (!gis_name_.empty()) {
        out_.send(ctx, ctx.lookup(gis_name_), net::tags::REGISTER_RESOURCE, 0);
    }
    schedule_calendar_tick_(ctx);

    for (;;) {
        const sim::Event ev = co_await ctx.wait_event();
        switch (ev.tag) {
            case net::tags::GRIDLET_SUBMIT: {
                const Gridlet* gridlet = std::any_cast<Gridlet>(&ev.data);
                if (gridlet == nullptr) {
                    throw ProtocolError("GRIDLET_SUBMIT to " + name() +
                                        " does not carry a gridlet");
                }
                handle_submit_(ctx, *gridlet);
                break;
            }
            case net::tags::INTERNAL_COMPLETION:
                handle_completion_(ctx, std::any_cast<CompletionPayload>(ev.data));
                break;
            case net::tags::INTERNAL_CALENDAR_TICK:
                handle_calendar_tick_(ctx);
                break;
            case net::tags::RESOURCE_CHARACTERISTICS:
                out_.send(ctx, ev.source, net::tags::RESOURCE_CHARACTERISTICS, 0,
                          CharacteristicsReply{ctx.self(), chars_});
                break;
            case net::tags::RESOURCE_DYNAMICS:
                out_.send(ctx, ev.source, net::tags::RESOURCE_DYNAMICS, 0,
                          ResourceDynamics{static_cast<int>(exec_.size()),
                                           static_cast<int>(submission_queue_.size()),
                                           calendar_.load_at(ev.time)});
                break;
            case net::tags::GRIDLET_STATUS:
                reply_status_(ctx, ev.source, std::any_cast<GridletStatusQuery>(ev.data).gridlet_id);
                break;
            case net::tags::END_OF_SIMULATION:
                co_return;
            default:
                break;
        }
    }
}

void GridResource::handle_submit_(sim::Context& ctx, Gridlet gridlet) {
    if (!(gridlet.length_mi > 0.0)) {
        throw ProtocolError("gridlet " + std::to_string(gridlet.id) + " has non-positive length");
    }
    ++submits_received_;
    gridlet.arrival_time = ctx.now();
    if (chars_.policy == AllocationPolicy::TimeShared) {
        time_shared_submit_(ctx, std::move(gridlet));
    } else {
        space_shared_submit_(ctx, std::move(gridlet));
    }
}

void GridResource::handle_completion_(sim::Context& ctx, const CompletionPayload& payload) {
    if (chars_.policy == AllocationPolicy::TimeShared) {
        // Only the most recently scheduled forecast is live.
        if (payload.tag != latest_tag_) {
            return;
        }
        time_shared_completion_(ctx);
    } else {
        space_shared_completion_(ctx, payload.tag);
    }
}

double GridResource::current_effective_mips_(sim::SimTime now) const {
    return effective_mips(chars_.machines.front().pes.front(), calendar_, now);
}

std::vector<ExecEntry> GridResource::exec_entries_() const {
    std::vector<ExecEntry> entries;
    entries.reserve(exec_.size());
    for (const auto& r : exec_) {
        entries.push_back(ExecEntry{r.remaining_mi, r.arrival_seq});
    }
    return entries;
}

// --- time-shared ---

void GridResource::update_time_shared_progress_(sim::SimTime now) {
    const double dt = now - last_update_;
    if (dt > 0.0 && !exec_.empty()) {
        // The load regime is constant over the interval: regime edges arrive
        // as calendar ticks, so sampling at its start is exact.
        const auto rates =
            share_rates(exec_entries_(), chars_.total_pes(), current_effective_mips_(last_update_));
        for (std::size_t i = 0; i < exec_.size(); ++i) {
            exec_[i].remaining_mi = std::max(0.0, exec_[i].remaining_mi - rates[i] * dt);
            exec_[i].last_update = now;
        }
    }
    last_update_ = now;
}

void GridResource::reforecast_time_shared_(sim::Context& ctx) {
    if (exec_.empty()) {
        return;
    }
    const double dt = time_to_next_completion(exec_entries_(), chars_.total_pes(),
                                              current_effective_mips_(ctx.now()));
    ++latest_tag_;
    ctx.schedule_self(dt, net::tags::INTERNAL_COMPLETION, CompletionPayload{latest_tag_});
}

void GridResource::time_shared_submit_(sim::Context& ctx, Gridlet gridlet) {
    update_time_shared_progress_(ctx.now());
    ResidentGridlet resident;
    gridlet.status = GridletStatus::InExec;
    gridlet.exec_start_time = ctx.now();
    resident.remaining_mi = gridlet.length_mi;
    resident.arrival_time = ctx.now();
    resident.last_update = ctx.now();
    resident.arrival_seq = next_arrival_seq_++;
    resident.gridlet = std::move(gridlet);
    exec_.push_back(std::move(resident));
    reforecast_time_shared_(ctx);
}

void GridResource::time_shared_completion_(sim::Context& ctx) {
    update_time_shared_progress_(ctx.now());
    // All gridlets that hit zero complete on this one event.
    for (auto it = exec_.begin(); it != exec_.end();) {
        if (it->remaining_mi <= kMiCompletionTolerance) {
            return_gridlet_(ctx, *it, ctx.now());
            it = exec_.erase(it);
        } else {
            ++it;
        }
    }
    reforecast_time_shared_(ctx);
}

// --- space-shared ---

bool GridResource::has_free_pe_() const {
    for (const auto& machine : chars_.machines) {
        for (const auto& pe : machine.pes) {
            if (!pe.busy) {
                return true;
            }
        }
    }
    return false;
}

void GridResource::allocate_pe_to_gridlet_(sim::Context& ctx, ResidentGridlet resident) {
    Pe* chosen = nullptr;
    for (auto& machine : chars_.machines) {
        for (auto& pe : machine.pes) {
            if (!pe.busy) {
                resident.machine_id = machine.id;
                resident.pe_id = pe.id;
                chosen = &pe;
                break;
            }
        }
        if (chosen != nullptr) {
            break;
        }
    }
    if (chosen == nullptr) {
        throw NoFreePe("allocate_pe_to_gridlet: all PEs busy on " + name());
    }
    chosen->busy = true;
    resident.gridlet.status = GridletStatus::InExec;
    resident.gridlet.exec_start_time = ctx.now();
    resident.last_update = ctx.now();
    resident.completion_tag = ++latest_tag_;
    const double dt = resident.remaining_mi / effective_mips(*chosen, calendar_, ctx.now());
    ctx.schedule_self(dt, net::tags::INTERNAL_COMPLETION, CompletionPayload{resident.completion_tag});
    exec_.push_back(std::move(resident));
}

void GridResource::space_shared_submit_(sim::Context& ctx, Gridlet gridlet) {
    ResidentGridlet resident;
    resident.remaining_mi = gridlet.length_mi;
    resident.arrival_time = ctx.now();
    resident.arrival_seq = next_arrival_seq_++;
    resident.gridlet = std::move(gridlet);
    if (has_free_pe_()) {
        allocate_pe_to_gridlet_(ctx, std::move(resident));
    } else {
        resident.gridlet.status = GridletStatus::Queued;
        submission_queue_.push_back(std::move(resident));
    }
}

void GridResource::space_shared_completion_(sim::Context& ctx, std::uint64_t tag) {
    const auto it = std::find_if(exec_.begin(), exec_.end(), [&](const ResidentGridlet& r) {
        return r.completion_tag == tag;
    });
    if (it == exec_.end()) {
        return;  // stale: superseded by a calendar reschedule
    }
    it->remaining_mi = 0.0;
    chars_.machines[static_cast<std::size_t>(it->machine_id)]
        .pes[static_cast<std::size_t>(it->pe_id)]
        .busy = false;
    return_gridlet_(ctx, *it, ctx.now());
    exec_.erase(it);
    if (!submission_queue_.empty()) {
        ResidentGridlet next = std::move(submission_queue_.front());
        submission_queue_.pop_front();
        allocate_pe_to_gridlet_(ctx, std::move(next));
    }
}

// --- shared plumbing ---

void GridResource::return_gridlet_(sim::Context& ctx, ResidentGridlet& resident,
                                   sim::SimTime finish) {
    Gridlet& g = resident.gridlet;
    g.status = GridletStatus::Success;
    g.finish_time = finish;
    g.wall_clock = finish - resident.arrival_time;
    g.processing_cost = g.length_mi / chars_.pe_mips() * chars_.cost_per_pe_time_unit;
    g.executed_on = ctx.self();
    const std::uint64_t size = return_uses_output_size_ ? g.output_size_bytes : 0;
    out_.send(ctx, g.owner, net::tags::GRIDLET_RETURN, size, g);
    ++returns_sent_;
}

void GridResource::reply_status_(sim::Context& ctx, sim::EntityId requester, int gridlet_id) {
    GridletStatusReply reply;
    reply.gridlet_id = gridlet_id;
    for (const auto& r : exec_) {
        if (r.gridlet.id == gridlet_id) {
            reply.status = r.gridlet.status;
            reply.known = true;
        }
    }
    for (const auto& r : submission_queue_) {
        if (r.gridlet.id == gridlet_id) {
            reply.status = r.gridlet.status;
            reply.known = true;
        }
    }
    out_.send(ctx, requester, net::tags::GRIDLET_STATUS, 0, reply);
}

void GridResource::schedule_calendar_tick_(sim::Context& ctx) {
    const sim::SimTime next = calendar_.next_boundary_after(ctx.now());
    if (!std::isfinite(next)) {
        return;
    }
    ctx.schedule_self(next - ctx.now(), net::tags::INTERNAL_CALENDAR_TICK);
}

void GridResource::handle_calendar_tick_(sim::Context& ctx) {
    if (chars_.policy == AllocationPolicy::TimeShared) {
        update_time_shared_progress_(ctx.now());
        reforecast_time_shared_(ctx);
    } else {
        // Re-plan every running gridlet under the new regime; the old
        // completion events go stale via fresh tags.
        for (auto& r : exec_) {
            const double old_mips = chars_.pe_mips() * (1.0 - calendar_.load_at(r.last_update));
            r.remaining_mi =
                std::max(0.0, r.remaining_mi - old_mips * (ctx.now() - r.last_update));
            r.last_update = ctx.now();
            r.completion_tag = ++latest_tag_;
            const double mips_now = current_effective_mips_(ctx.now());
            ctx.schedule_self(r.remaining_mi / mips_now, net::tags::INTERNAL_COMPLETION,
                              CompletionPayload{r.completion_tag});
        }
    }
    schedule_calendar_tick_(ctx);
}

}  // namespace gridsched::res
