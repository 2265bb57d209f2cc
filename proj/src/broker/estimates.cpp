#include "gridsched/broker/estimates.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "gridsched/errors.hpp"

namespace gridsched::broker {

namespace {

double total_mi(const app::GridletBatch& batch) {
    return std::accumulate(batch.begin(), batch.end(), 0.0,
                           [](double acc, const app::Gridlet& g) { return acc + g.length_mi; });
}

void require_resources(const std::vector<res::ResourceCharacteristics>& resources) {
    if (resources.empty()) {
        throw NoResources("constraint derivation needs at least one resource");
    }
}

// Resource order by cost per MI, ties by original index.
std::vector<std::size_t> cost_order(const std::vector<res::ResourceCharacteristics>& resources,
                                    bool cheapest_first) {
    std::vector<std::size_t> order(resources.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ca = cost_per_mi(resources[a]);
        const double cb = cost_per_mi(resources[b]);
        return cheapest_first ? ca < cb : ca > cb;
    });
    return order;
}

double greedy_fill_cost(const app::GridletBatch& batch,
                        const std::vector<res::ResourceCharacteristics>& resources,
                        sim::SimTime deadline, bool cheapest_first) {
    require_resources(resources);
    const auto order = cost_order(resources, cheapest_first);
    std::vector<double> capacity_mi(resources.size());
    for (std::size_t i = 0; i < resources.size(); ++i) {
        capacity_mi[i] = resources[i].total_pes() * resources[i].pe_mips() * deadline;
    }
    double cost = 0.0;
    for (const auto& g : batch) {
        bool placed = false;
        for (const std::size_t r : order) {
            if (capacity_mi[r] + 1e-9 >= g.length_mi) {
                capacity_mi[r] -= g.length_mi;
                cost += g.length_mi * cost_per_mi(resources[r]);
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw InfeasibleDeadline("gridlet " + std::to_string(g.id) +
                                     " does not fit on any resource within the deadline");
        }
    }
    return cost;
}

}  // namespace

double cost_per_mi(const res::ResourceCharacteristics& r) {
    return r.cost_per_pe_time_unit / r.pe_mips();
}

sim::SimTime t_min(const app::GridletBatch& batch,
                   const std::vector<res::ResourceCharacteristics>& resources) {
    require_resources(resources);
    // One lane per PE, fastest first; jobs in batch order take the earliest
    // finishing lane.
    struct Lane {
        double mips;
        double available = 0.0;
    };
    std::vector<Lane> lanes;
    for (const auto& r : resources) {
        for (int p = 0; p < r.total_pes(); ++p) {
            lanes.push_back(Lane{r.pe_mips()});
        }
    }
    std::stable_sort(lanes.begin(), lanes.end(),
                     [](const Lane& a, const Lane& b) { return a.mips > b.mips; });
    double makespan = 0.0;
    for (const auto& g : batch) {
        std::size_t best = 0;
        double best_finish = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < lanes.size(); ++i) {
            const double finish = lanes[i].available + g.length_mi / lanes[i].mips;
            if (finish < best_finish) {
                best_finish = finish;
                best = i;
            }
        }
        lanes[best].available = best_finish;
        makespan = std::max(makespan, best_finish);
    }
    return makespan;
}

sim::SimTime t_max(const app::GridletBatch& batch,
                   const std::vector<res::ResourceCharacteristics>& resources) {
    require_resources(resources);
    double slowest = std::numeric_limits<double>::infinity();
    for (const auto& r : resources) {
        slowest = std::min(slowest, r.pe_mips());
    }
    return total_mi(batch) / slowest;
}

sim::SimTime compute_deadline(const app::GridletBatch& batch,
                              const std::vector<res::ResourceCharacteristics>& resources,
                              double d_factor) {
    const sim::SimTime lo = t_min(batch, resources);
    const sim::SimTime hi = t_max(batch, resources);
    return lo + d_factor * (hi - lo);
}

double c_min(const app::GridletBatch& batch,
             const std::vector<res::ResourceCharacteristics>& resources, sim::SimTime deadline) {
    return greedy_fill_cost(batch, resources, deadline, true);
}

double c_max(const app::GridletBatch& batch,
             const std::vector<res::ResourceCharacteristics>& resources, sim::SimTime deadline) {
    return greedy_fill_cost(batch, resources, deadline, false);
}

double compute_budget(const app::GridletBatch& batch,
                      const std::vector<res::ResourceCharacteristics>& resources, double b_factor,
                      sim::SimTime deadline) {
    const double lo = c_min(batch, resources, deadline);
    const double hi = c_max(batch, resources, deadline);
    return lo + b_factor * (hi - lo);
}

}  // namespace gridsched::broker
