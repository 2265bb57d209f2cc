#include "gridsched/net/info_service.hpp"

#include <algorithm>

namespace gridsched::net {

void InformationService::register_resource_(sim::EntityId resource, sim::SimTime at) {
    // Duplicate registration keeps one record and refreshes its timestamp,
    // moving the resource to the end of the registration order.
    const auto it = std::find_if(records_.begin(), records_.end(),
                                 [&](const DirectoryRecord& r) { return r.resource == resource; });
    if (it != records_.end()) {
        records_.erase(it);
    }
    records_.push_back(DirectoryRecord{resource, at});
}

sim::Process InformationService::body(sim::Context& ctx) {
    for (;;) {
        const sim::Event ev = co_await ctx.wait_event();
        switch (ev.tag) {
            case tags::REGISTER_RESOURCE:
                register_resource_(ev.source, ev.time);
                break;
            case tags::RESOURCE_LIST: {
                ResourceList list;
                list.reserve(records_.size());
                for (const auto& rec : records_) {
                    list.push_back(rec.resource);
                }
                if (bypass_network_) {
                    ctx.schedule(ev.source, 0.0, tags::RESOURCE_LIST, std::move(list));
                } else {
                    out_.send(ctx, ev.source, tags::RESOURCE_LIST, 0, std::move(list));
                }
                break;
            }
            case tags::END_OF_SIMULATION:
                co_return;
            default:
                break;  // unknown traffic is insignificant to the directory
        }
    }
}

}  // namespace gridsched::net
