#pragma once

#include <cstdint>
#include <vector>

#include "gridsched/sim/event.hpp"

namespace gridsched::res {

// MI shares handed to gridlets over one interval of a time-shared resource.
// When jobs outnumber PEs, PEs carry either m or m+1 jobs (m = floor(n/p)),
// giving two share levels; the n_max_share_gridlets smallest-remaining jobs
// get the larger share.
struct ShareTable {
    double max_share_mi = 0.0;
    double min_share_mi = 0.0;
    int n_max_share_gridlets = 0;
};

ShareTable pe_share_allocation(double duration, int n_gridlets_in_exec, int n_pes,
                               double mips_per_pe);

// One executing gridlet as seen by the share/forecast math.
struct ExecEntry {
    double remaining_mi = 0.0;
    std::uint64_t arrival_seq = 0;
};

// Per-gridlet MI rates for the current interval, aligned with exec order.
// Smaller-remaining gridlets receive the max share; ties break by arrival.
std::vector<double> share_rates(const std::vector<ExecEntry>& exec, int n_pes,
                                double mips_per_pe);

// Time until the earliest executing gridlet completes under the current
// share assignment. Throws NoWork on an empty set.
sim::SimTime time_to_next_completion(const std::vector<ExecEntry>& exec, int n_pes,
                                     double mips_per_pe);

// Absolute completion forecast: clock + time_to_next_completion.
sim::SimTime forecast_next_completion(const std::vector<ExecEntry>& exec, int n_pes,
                                      double mips_per_pe, sim::SimTime clock);

}  // namespace gridsched::res
