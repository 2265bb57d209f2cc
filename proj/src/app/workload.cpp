#include "gridsched/app/workload.hpp"

#include "gridsched/app/random.hpp"
#include "gridsched/errors.hpp"

namespace gridsched::app {

StandardPeRating::StandardPeRating(double mips) : mips_(mips) {
    if (!(mips > 0.0)) {
        throw InvalidRating("standard PE rating must be positive");
    }
}

GridletBatch synth_workload(const WorkloadSpec& spec) {
    if (spec.n_gridlets < 1) {
        throw SimError("synth_workload: need at least one gridlet");
    }
    if (!(spec.variation >= 0.0 && spec.variation <= 1.0)) {
        throw InvalidFactor("synth_workload: variation must be in [0, 1]");
    }
    UniformRng rng(spec.seed);
    const double base_mi = spec.base_time_units * spec.standard_pe.mips();
    GridletBatch batch;
    batch.reserve(static_cast<std::size_t>(spec.n_gridlets));
    for (int i = 0; i < spec.n_gridlets; ++i) {
        Gridlet g;
        g.id = i;
        g.length_mi = real_random(base_mi, 0.0, spec.variation, rng.next());
        g.input_size_bytes = spec.input_size_bytes;
        g.output_size_bytes = spec.output_size_bytes;
        batch.push_back(g);
    }
    return batch;
}

std::string to_string(GridletStatus status) {
    switch (status) {
        case GridletStatus::Created: return "CREATED";
        case GridletStatus::Submitted: return "SUBMITTED";
        case GridletStatus::Queued: return "QUEUED";
        case GridletStatus::InExec: return "INEXEC";
        case GridletStatus::Success: return "SUCCESS";
        case GridletStatus::Canceled: return "CANCELED";
    }
    return "UNKNOWN";
}

}  // namespace gridsched::app
