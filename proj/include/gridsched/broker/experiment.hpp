#pragma once

#include <string>

#include "gridsched/app/gridlet.hpp"
#include "gridsched/errors.hpp"

namespace gridsched::broker {

enum class SchedulingPolicy { CostOpt };

enum class ExperimentStatus { Created, InProgress, Completed, ConstraintExhausted };

std::string to_string(ExperimentStatus status);

// A user's application batch plus its deadline/budget constraints, given
// either as relaxation factors (resolved against discovered resources) or as
// absolute values.
struct Experiment {
    app::GridletBatch gridlets;
    SchedulingPolicy policy = SchedulingPolicy::CostOpt;

    bool use_factors = false;
    double d_factor = 0.0;
    double b_factor = 0.0;
    sim::SimTime deadline = 0.0;  // absolute; derived from d_factor when use_factors
    double budget = 0.0;          // G$; derived from b_factor when use_factors

    sim::SimTime start_time = 0.0;
    sim::SimTime end_time = 0.0;
    ExperimentStatus status = ExperimentStatus::Created;
    double expenses = 0.0;

    static Experiment with_factors(app::GridletBatch batch, double d_factor, double b_factor);
    static Experiment with_absolutes(app::GridletBatch batch, sim::SimTime deadline,
                                     double budget);

    int completed_count() const;
};

}  // namespace gridsched::broker
