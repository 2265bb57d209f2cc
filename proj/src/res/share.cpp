#include "gridsched/res/share.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "gridsched/errors.hpp"

namespace gridsched::res {

ShareTable pe_share_allocation(double duration, int n_gridlets_in_exec, int n_pes,
                               double mips_per_pe) {
    if (n_pes < 1) {
        throw InvalidResource("pe_share_allocation: resource has no PEs");
    }
    if (n_gridlets_in_exec < 1 || !(duration >= 0.0) || !(mips_per_pe > 0.0)) {
        throw InvalidResource("pe_share_allocation: inputs must be positive");
    }
    const double total_mi_per_pe = mips_per_pe * duration;
    ShareTable table;
    if (n_gridlets_in_exec <= n_pes) {
        table.max_share_mi = total_mi_per_pe;
        table.min_share_mi = total_mi_per_pe;
        table.n_max_share_gridlets = n_gridlets_in_exec;
    } else {
        const int min_gridlets_per_pe = n_gridlets_in_exec / n_pes;
        const int pes_running_one_extra = n_gridlets_in_exec % n_pes;
        table.max_share_mi = total_mi_per_pe / min_gridlets_per_pe;
        table.min_share_mi = total_mi_per_pe / (min_gridlets_per_pe + 1);
        table.n_max_share_gridlets = (n_pes - pes_running_one_extra) * min_gridlets_per_pe;
    }
    return table;
}

namespace {

// Indices of `exec` ordered by (remaining, arrival) so share levels can be
// dealt out smallest-first.
std::vector<std::size_t> priority_order(const std::vector<ExecEntry>& exec) {
    std::vector<std::size_t> order(exec.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (exec[a].remaining_mi != exec[b].remaining_mi) {
            return exec[a].remaining_mi < exec[b].remaining_mi;
        }
        return exec[a].arrival_seq < exec[b].arrival_seq;
    });
    return order;
}

}  // namespace

std::vector<double> share_rates(const std::vector<ExecEntry>& exec, int n_pes,
                                double mips_per_pe) {
    const ShareTable table =
        pe_share_allocation(1.0, static_cast<int>(exec.size()), n_pes, mips_per_pe);
    const auto order = priority_order(exec);
    std::vector<double> rates(exec.size(), 0.0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const bool max_share = k < static_cast<std::size_t>(table.n_max_share_gridlets);
        rates[order[k]] = max_share ? table.max_share_mi : table.min_share_mi;
    }
    return rates;
}

sim::SimTime time_to_next_completion(const std::vector<ExecEntry>& exec, int n_pes,
                                     double mips_per_pe) {
    if (exec.empty()) {
        throw NoWork("time_to_next_completion: no gridlets in execution");
    }
    const auto rates = share_rates(exec, n_pes, mips_per_pe);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < exec.size(); ++i) {
        best = std::min(best, std::max(exec[i].remaining_mi, 0.0) / rates[i]);
    }
    return best;
}

sim::SimTime forecast_next_completion(const std::vector<ExecEntry>& exec, int n_pes,
                                      double mips_per_pe, sim::SimTime clock) {
    return clock + time_to_next_completion(exec, n_pes, mips_per_pe);
}

}  // namespace gridsched::res
