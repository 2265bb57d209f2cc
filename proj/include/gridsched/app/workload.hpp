#pragma once

#include <cstdint>

#include "gridsched/app/gridlet.hpp"

namespace gridsched::app {

inline constexpr double kDefaultStandardPeMips = 100.0;

// MIPS rating of the reference PE that job lengths are expressed against.
class StandardPeRating {
public:
    StandardPeRating() = default;
    explicit StandardPeRating(double mips);

    double mips() const { return mips_; }

private:
    double mips_ = kDefaultStandardPeMips;
};

struct WorkloadSpec {
    int n_gridlets = 0;
    double base_time_units = 0.0;  // job time on a standard PE
    double variation = 0.0;        // upward variation fraction in [0, 1]
    StandardPeRating standard_pe{};
    std::uint64_t seed = 0;
    std::uint64_t input_size_bytes = 0;
    std::uint64_t output_size_bytes = 0;
};

// Task-farming batch: n jobs of length base * standard_mips MI, each
// stretched upward by at most `variation`. Pure function of the spec.
GridletBatch synth_workload(const WorkloadSpec& spec);

}  // namespace gridsched::app
