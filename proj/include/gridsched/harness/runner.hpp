#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridsched/harness/config.hpp"
#include "gridsched/sim/engine.hpp"
#include "gridsched/stats/statistics.hpp"

namespace gridsched::harness {

// One user's outcome in one run (one sweep cell). `per_resource_completion`
// covers every resource of the scenario in config order; the results CSV is
// this row in long form, one line per resource.
struct ResultRow {
    int user_count = 0;
    double deadline = 0.0;
    double budget = 0.0;
    int user_id = 0;
    int completed = 0;
    double time_utilized = 0.0;
    double budget_spent = 0.0;
    double termination_time = 0.0;
    std::vector<std::pair<std::string, int>> per_resource_completion;
    std::string status = "ok";  // programmatic only; failed cells emit FAILED lines

    bool operator==(const ResultRow&) const = default;
};

struct SingleRunOutput {
    std::vector<ResultRow> rows;  // one per user, in user order
    sim::SimulationReport report;
    stats::StatStore stats;
};

// Derived workload seed for user i, so multi-user workloads differ slightly.
std::uint64_t user_workload_seed(std::uint64_t base_seed, int user_index);

// Builds an engine for the scenario (GIS, statistics, shutdown, resources,
// then broker/user pairs), runs it, and reports one row per user.
SingleRunOutput run_single(const ScenarioConfig& config);

// Cartesian sweep over deadline x budget (x user_counts when present); each
// cell runs an independent engine. A failing cell yields FAILED rows and the
// sweep continues.
std::vector<ResultRow> run_sweep(const ScenarioConfig& config);

// Long-form results CSV:
// user_count,deadline,budget,user_id,completed,time_utilized,budget_spent,
// termination_time,resource,resource_completed
void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

std::string results_to_csv(const std::vector<ResultRow>& rows);

}  // namespace gridsched::harness
