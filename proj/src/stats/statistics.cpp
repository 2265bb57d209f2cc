#include "gridsched/stats/statistics.hpp"

#include <map>

namespace gridsched::stats {

bool category_matches(std::string_view pattern, std::string_view category) {
    auto next_segment = [](std::string_view& rest) {
        const auto dot = rest.find('.');
        std::string_view seg = rest.substr(0, dot);
        rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
        return seg;
    };
    std::string_view p = pattern;
    std::string_view c = category;
    while (!p.empty() || !c.empty()) {
        if (p.empty() || c.empty()) {
            return false;  // different segment counts
        }
        const std::string_view ps = next_segment(p);
        const std::string_view cs = next_segment(c);
        if (ps != "*" && ps != cs) {
            return false;
        }
    }
    return true;
}

std::vector<StatRecord> StatStore::filter(std::string_view pattern) const {
    std::vector<StatRecord> out;
    for (const auto& r : records_) {
        if (category_matches(pattern, r.category)) {
            out.push_back(r);
        }
    }
    return out;
}

std::vector<StatRecord> StatStore::filter_by_entity(sim::EntityId entity) const {
    std::vector<StatRecord> out;
    for (const auto& r : records_) {
        if (r.entity == entity) {
            out.push_back(r);
        }
    }
    return out;
}

std::vector<std::pair<std::string, AccumulatorSummary>> StatStore::accumulate_by_category(
    std::string_view pattern) const {
    std::vector<std::string> order;
    std::map<std::string, Accumulator> acc;
    for (const auto& r : records_) {
        if (!category_matches(pattern, r.category)) {
            continue;
        }
        if (acc.find(r.category) == acc.end()) {
            order.push_back(r.category);
        }
        acc[r.category].add(r.value);
    }
    std::vector<std::pair<std::string, AccumulatorSummary>> out;
    out.reserve(order.size());
    for (const auto& category : order) {
        out.emplace_back(category, acc[category].query());
    }
    return out;
}

sim::Process StatisticsEntity::body(sim::Context& ctx) {
    for (;;) {
        const sim::Event ev = co_await ctx.wait_event();
        switch (ev.tag) {
            case net::tags::RECORD_STATISTICS: {
                auto record = std::any_cast<StatRecord>(ev.data);
                record.time = ev.time;
                record.entity = ev.source;
                record.entity_name = ctx.name_of(ev.source);
                store_.add(std::move(record));
                break;
            }
            case net::tags::RETURN_STAT_LIST: {
                const auto query = std::any_cast<StatQuery>(ev.data);
                out_.send(ctx, ev.source, net::tags::RETURN_STAT_LIST, 0,
                          store_.filter(query.pattern));
                break;
            }
            case net::tags::RETURN_ACC_STATISTICS_BY_CATEGORY: {
                const auto query = std::any_cast<StatQuery>(ev.data);
                out_.send(ctx, ev.source, net::tags::RETURN_ACC_STATISTICS_BY_CATEGORY, 0,
                          store_.accumulate_by_category(query.pattern));
                break;
            }
            case net::tags::END_OF_SIMULATION:
                co_return;
            default:
                break;
        }
    }
}

}  // namespace gridsched::stats
