#include "gridsched/broker/experiment.hpp"

#include <algorithm>
#include <set>

namespace gridsched::broker {

namespace {

void check_unique_ids(const app::GridletBatch& batch) {
    std::set<int> ids;
    for (const auto& g : batch) {
        if (!ids.insert(g.id).second) {
            throw SimError("experiment batch has duplicate gridlet id " + std::to_string(g.id));
        }
    }
}

}  // namespace

std::string to_string(ExperimentStatus status) {
    switch (status) {
        case ExperimentStatus::Created: return "created";
        case ExperimentStatus::InProgress: return "in_progress";
        case ExperimentStatus::Completed: return "completed";
        case ExperimentStatus::ConstraintExhausted: return "constraint_exhausted";
    }
    return "unknown";
}

Experiment Experiment::with_factors(app::GridletBatch batch, double d_factor, double b_factor) {
    if (!(d_factor >= 0.0) || !(b_factor >= 0.0)) {
        throw InvalidFactor("experiment D/B factors must be non-negative");
    }
    check_unique_ids(batch);
    Experiment exp;
    exp.gridlets = std::move(batch);
    exp.use_factors = true;
    exp.d_factor = d_factor;
    exp.b_factor = b_factor;
    return exp;
}

Experiment Experiment::with_absolutes(app::GridletBatch batch, sim::SimTime deadline,
                                      double budget) {
    if (!(deadline > 0.0)) {
        throw SimError("experiment deadline must be positive");
    }
    if (!(budget >= 0.0)) {
        throw SimError("experiment budget must be non-negative");
    }
    check_unique_ids(batch);
    Experiment exp;
    exp.gridlets = std::move(batch);
    exp.use_factors = false;
    exp.deadline = deadline;
    exp.budget = budget;
    return exp;
}

int Experiment::completed_count() const {
    return static_cast<int>(std::count_if(gridlets.begin(), gridlets.end(), [](const auto& g) {
        return g.status == app::GridletStatus::Success;
    }));
}

}  // namespace gridsched::broker
