#include "gridsched/broker/user.hpp"

#include <algorithm>

#include "gridsched/net/tags.hpp"
#include "gridsched/stats/statistics.hpp"

namespace gridsched::broker {

UserEntity::UserEntity(std::string name, std::string broker_name, std::string shutdown_name,
                       Experiment experiment, double baud_rate)
    : Entity(std::move(name)),
      broker_name_(std::move(broker_name)),
      shutdown_name_(std::move(shutdown_name)),
      experiment_(std::move(experiment)),
      out_(baud_rate) {}

sim::Process UserEntity::body(sim::Context& ctx) {
    const sim::EntityId broker = ctx.lookup(broker_name_);
    out_.send(ctx, broker, net::tags::EXPERIMENT, 0, std::move(experiment_));
    const sim::Event reply =
        co_await ctx.wait_event(sim::match_tag_from(net::tags::EXPERIMENT, broker));
    result_ = std::any_cast<Experiment>(reply.data);
    out_.send(ctx, ctx.lookup(shutdown_name_), net::tags::END_OF_SIMULATION, 0);
}

TraceUser::TraceUser(std::string name, std::string resource_name, std::string shutdown_name,
                     std::string statistics_name, std::vector<TraceItem> items, double baud_rate)
    : Entity(std::move(name)),
      resource_name_(std::move(resource_name)),
      shutdown_name_(std::move(shutdown_name)),
      statistics_name_(std::move(statistics_name)),
      items_(std::move(items)),
      out_(baud_rate) {
    std::stable_sort(items_.begin(), items_.end(),
                     [](const TraceItem& a, const TraceItem& b) { return a.submit_at < b.submit_at; });
}

sim::Process TraceUser::body(sim::Context& ctx) {
    const sim::EntityId resource = ctx.lookup(resource_name_);
    const sim::EntityId stats =
        statistics_name_.empty() ? sim::kNoEntity : ctx.lookup(statistics_name_);

    for (auto& item : items_) {
        if (item.submit_at > ctx.now()) {
            co_await ctx.hold(item.submit_at - ctx.now());
        }
        item.gridlet.owner = ctx.self();
        item.gridlet.status = app::GridletStatus::Submitted;
        item.gridlet.submission_time = ctx.now();
        out_.send(ctx, resource, net::tags::GRIDLET_SUBMIT, item.gridlet.input_size_bytes,
                  item.gridlet);
    }

    for (std::size_t i = 0; i < items_.size(); ++i) {
        const sim::Event ev = co_await ctx.wait_event(sim::match_tag(net::tags::GRIDLET_RETURN));
        auto g = std::any_cast<app::Gridlet>(ev.data);
        if (stats != sim::kNoEntity) {
            stats::StatRecord finish;
            finish.category = name() + ".GRIDLET.FinishTime";
            finish.value = g.finish_time;
            out_.send(ctx, stats, net::tags::RECORD_STATISTICS, 0, finish);
            stats::StatRecord elapsed;
            elapsed.category = name() + ".GRIDLET.ElapsedTime";
            elapsed.value = g.finish_time - g.arrival_time;
            out_.send(ctx, stats, net::tags::RECORD_STATISTICS, 0, elapsed);
        }
        returned_.push_back(std::move(g));
    }

    out_.send(ctx, ctx.lookup(shutdown_name_), net::tags::END_OF_SIMULATION, 0);
}

}  // namespace gridsched::broker
