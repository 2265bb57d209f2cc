#pragma once

#include <string>
#include <vector>

#include "gridsched/net/port.hpp"
#include "gridsched/net/tags.hpp"
#include "gridsched/sim/engine.hpp"
#include "gridsched/stats/accumulator.hpp"

namespace gridsched::stats {

struct StatRecord {
    sim::SimTime time = 0.0;
    sim::EntityId entity = sim::kNoEntity;
    std::string entity_name;
    std::string category;
    double value = 0.0;
};

// '.'-separated category match where '*' stands for exactly one segment.
bool category_matches(std::string_view pattern, std::string_view category);

// Arrival-ordered store of category-tagged records.
class StatStore {
public:
    void add(StatRecord record) { records_.push_back(std::move(record)); }

    const std::vector<StatRecord>& records() const { return records_; }

    std::vector<StatRecord> filter(std::string_view pattern) const;
    std::vector<StatRecord> filter_by_entity(sim::EntityId entity) const;

    // Accumulator summaries per distinct category matching the pattern,
    // ordered by first appearance.
    std::vector<std::pair<std::string, AccumulatorSummary>> accumulate_by_category(
        std::string_view pattern) const;

private:
    std::vector<StatRecord> records_;
};

struct StatQuery {
    std::string pattern;
};

// Entity gathering RECORD_STATISTICS traffic and answering stat queries.
// The store stays readable after the run for report generation.
class StatisticsEntity final : public sim::Entity {
public:
    explicit StatisticsEntity(std::string name, double baud_rate = net::tags::DEFAULT_BAUD_RATE)
        : Entity(std::move(name)), out_(baud_rate) {}

    sim::Process body(sim::Context& ctx) override;

    const StatStore& store() const { return store_; }

private:
    net::OutputPort out_;
    StatStore store_;
};

}  // namespace gridsched::stats
