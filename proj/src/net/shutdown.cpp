#include "gridsched/net/shutdown.hpp"

namespace gridsched::net {

sim::Process ShutdownCoordinator::body(sim::Context& ctx) {
    for (int received = 0; received < user_count_; ++received) {
        co_await ctx.wait_event(sim::match_tag(tags::END_OF_SIMULATION));
    }

    if (!report_writer_name_.empty()) {
        const sim::EntityId writer = ctx.lookup(report_writer_name_);
        ctx.schedule(writer, 0.0, tags::END_OF_SIMULATION);
        co_await ctx.wait_event(sim::match_tag_from(tags::END_OF_SIMULATION, writer));
    }

    for (sim::EntityId id = 0; id < ctx.engine().entity_count(); ++id) {
        if (id != ctx.self()) {
            ctx.schedule(id, 0.0, tags::END_OF_SIMULATION);
        }
    }
    fired_ = true;
    fired_at_ = ctx.now();
}

}  // namespace gridsched::net
