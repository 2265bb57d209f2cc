#include "gridsched/harness/runner.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "gridsched/app/workload.hpp"
#include "gridsched/broker/broker.hpp"
#include "gridsched/broker/user.hpp"
#include "gridsched/net/info_service.hpp"
#include "gridsched/net/shutdown.hpp"
#include "gridsched/res/grid_resource.hpp"
#include "gridsched/stats/report.hpp"

namespace gridsched::harness {

namespace {

constexpr const char* kGisName = "GIS";
constexpr const char* kStatisticsName = "Statistics";
constexpr const char* kShutdownName = "Shutdown";

res::ResourceCalendar build_calendar(const ResourceConfig& rc) {
    res::ResourceCalendar cal;
    cal.time_zone_hours = rc.time_zone;
    cal.weekends = std::set<int>(rc.calendar.weekends.begin(), rc.calendar.weekends.end());
    cal.holidays = std::set<long>(rc.calendar.holidays.begin(), rc.calendar.holidays.end());
    cal.peak_load = rc.calendar.peak_load;
    cal.off_peak_load = rc.calendar.off_peak_load;
    cal.holiday_load = rc.calendar.holiday_load;
    cal.peak_start_hour = rc.calendar.peak_start_hour;
    cal.peak_end_hour = rc.calendar.peak_end_hour;
    return cal;
}

broker::Experiment build_experiment(const ScenarioConfig& cfg, const UserConfig& uc,
                                    int user_index) {
    app::GridletBatch batch;
    if (uc.n_gridlets > 0) {
        app::WorkloadSpec spec;
        spec.n_gridlets = uc.n_gridlets;
        spec.base_time_units = uc.base_time_units;
        spec.variation = uc.variation;
        spec.standard_pe = app::StandardPeRating(cfg.standard_pe_mips);
        spec.seed = user_workload_seed(cfg.seed, user_index);
        spec.input_size_bytes = uc.gridlet_input_bytes;
        spec.output_size_bytes = uc.gridlet_output_bytes;
        batch = app::synth_workload(spec);
    }
    if (uc.use_factors) {
        return broker::Experiment::with_factors(std::move(batch), uc.d_factor, uc.b_factor);
    }
    return broker::Experiment::with_absolutes(std::move(batch), uc.deadline, uc.budget);
}

std::vector<std::pair<std::string, int>> count_by_resource(const ScenarioConfig& cfg,
                                                           const app::GridletBatch& batch,
                                                           const sim::Engine& engine) {
    std::map<sim::EntityId, int> counts;
    for (const auto& g : batch) {
        if (g.status == app::GridletStatus::Success) {
            ++counts[g.executed_on];
        }
    }
    std::vector<std::pair<std::string, int>> out;
    out.reserve(cfg.resources.size());
    for (const auto& rc : cfg.resources) {
        const sim::EntityId id = engine.find_entity(rc.name);
        const auto it = counts.find(id);
        out.emplace_back(rc.name, it == counts.end() ? 0 : it->second);
    }
    return out;
}

}  // namespace

std::uint64_t user_workload_seed(std::uint64_t base_seed, int user_index) {
    return base_seed * 997 * (1 + static_cast<std::uint64_t>(user_index)) + 1;
}

SingleRunOutput run_single(const ScenarioConfig& config) {
    config.validate();
    if (config.sweep) {
        throw ConfigError("run_single: config has a sweep block; use run_sweep");
    }

    sim::Engine engine;
    auto baud = [&](double value) { return value > 0.0 ? value : config.default_baud_rate; };

    engine.make_entity<net::InformationService>(kGisName, config.default_baud_rate,
                                                config.gis_bypass_network);
    auto& statistics = engine.make_entity<stats::StatisticsEntity>(kStatisticsName,
                                                                   config.default_baud_rate);
    engine.make_entity<net::ShutdownCoordinator>(kShutdownName,
                                                 static_cast<int>(config.users.size()));

    for (const auto& rc : config.resources) {
        engine.make_entity<res::GridResource>(
            rc.name,
            res::make_characteristics(rc.n_machines, rc.pes_per_machine, rc.pe_mips, rc.policy,
                                      rc.price_per_pe_time_unit, rc.time_zone),
            build_calendar(rc), baud(rc.baud_rate), kGisName, config.return_uses_output_size);
    }

    std::vector<const broker::UserEntity*> experiment_users(config.users.size(), nullptr);
    std::vector<const broker::TraceUser*> trace_users(config.users.size(), nullptr);
    for (std::size_t i = 0; i < config.users.size(); ++i) {
        const auto& uc = config.users[i];
        const std::string user_name = "U" + std::to_string(i);
        if (uc.kind == UserConfig::Kind::Trace) {
            std::vector<broker::TraceUser::TraceItem> items;
            int next_id = 0;
            for (const auto& tg : uc.trace_gridlets) {
                broker::TraceUser::TraceItem item;
                item.gridlet.id = next_id++;
                item.gridlet.length_mi = tg.length_mi;
                item.gridlet.input_size_bytes = tg.input_size_bytes;
                item.gridlet.output_size_bytes = tg.output_size_bytes;
                item.submit_at = tg.arrival;
                items.push_back(std::move(item));
            }
            trace_users[i] = &engine.make_entity<broker::TraceUser>(
                user_name, uc.trace_resource, kShutdownName, kStatisticsName, std::move(items),
                baud(uc.baud_rate));
        } else {
            const std::string broker_name = "Broker_" + user_name;
            engine.make_entity<broker::Broker>(broker_name, kGisName, kStatisticsName,
                                               baud(uc.baud_rate), uc.max_gridlets_per_pe);
            experiment_users[i] = &engine.make_entity<broker::UserEntity>(
                user_name, broker_name, kShutdownName, build_experiment(config, uc, (int)i),
                baud(uc.baud_rate));
        }
    }

    SingleRunOutput out;
    out.report = engine.run();
    out.stats = statistics.store();

    for (std::size_t i = 0; i < config.users.size(); ++i) {
        ResultRow row;
        row.user_count = static_cast<int>(config.users.size());
        row.user_id = static_cast<int>(i);
        if (const auto* user = experiment_users[i]) {
            if (!user->result().has_value()) {
                throw SimError("user U" + std::to_string(i) + " never got its experiment back");
            }
            const broker::Experiment& exp = *user->result();
            row.deadline = exp.deadline;
            row.budget = exp.budget;
            row.completed = exp.completed_count();
            row.time_utilized = exp.end_time - exp.start_time;
            row.budget_spent = exp.expenses;
            row.termination_time = exp.end_time;
            row.per_resource_completion = count_by_resource(config, exp.gridlets, engine);
        } else {
            const auto* trace = trace_users[i];
            row.completed = static_cast<int>(trace->returned().size());
            double last_finish = 0.0;
            for (const auto& g : trace->returned()) {
                last_finish = std::max(last_finish, g.finish_time);
            }
            row.time_utilized = last_finish;
            row.termination_time = last_finish;
            row.per_resource_completion = count_by_resource(config, trace->returned(), engine);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::vector<ResultRow> run_sweep(const ScenarioConfig& config) {
    config.validate();
    if (!config.sweep) {
        throw ConfigError("run_sweep: config has no sweep block");
    }
    const SweepConfig sweep = *config.sweep;
    std::vector<int> user_counts = sweep.user_counts;
    if (user_counts.empty()) {
        user_counts.push_back(static_cast<int>(config.users.size()));
    }

    std::vector<ResultRow> rows;
    for (const int n_users : user_counts) {
        for (const double deadline : sweep.deadline_values) {
            for (const double budget : sweep.budget_values) {
                ScenarioConfig cell = config;
                cell.sweep.reset();
                if (!sweep.user_counts.empty()) {
                    cell.users.assign(static_cast<std::size_t>(n_users), config.users.front());
                }
                for (auto& uc : cell.users) {
                    uc.use_factors = false;
                    uc.deadline = deadline;
                    uc.budget = budget;
                }
                try {
                    auto out = run_single(cell);
                    for (auto& row : out.rows) {
                        rows.push_back(std::move(row));
                    }
                } catch (const std::exception& e) {
                    std::cerr << "sweep cell (users=" << n_users << ", deadline=" << deadline
                              << ", budget=" << budget << ") failed: " << e.what() << "\n";
                    for (int u = 0; u < n_users; ++u) {
                        ResultRow row;
                        row.user_count = n_users;
                        row.deadline = deadline;
                        row.budget = budget;
                        row.user_id = u;
                        row.status = std::string("error: ") + e.what();
                        rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    return rows;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
    std::vector<const ResultRow*> sorted;
    sorted.reserve(rows.size());
    for (const auto& row : rows) {
        sorted.push_back(&row);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const ResultRow* a, const ResultRow* b) {
        if (a->user_count != b->user_count) return a->user_count < b->user_count;
        if (a->deadline != b->deadline) return a->deadline < b->deadline;
        if (a->budget != b->budget) return a->budget < b->budget;
        return a->user_id < b->user_id;
    });

    std::ostringstream out;
    out << "user_count,deadline,budget,user_id,completed,time_utilized,budget_spent,"
           "termination_time,resource,resource_completed\n";
    const auto emit_line = [&](const ResultRow& row, const std::string& resource, int count) {
        out << row.user_count << ',' << stats::format_value(row.deadline) << ','
            << stats::format_value(row.budget) << ',' << row.user_id << ',' << row.completed
            << ',' << stats::format_value(row.time_utilized) << ','
            << stats::format_value(row.budget_spent) << ','
            << stats::format_value(row.termination_time) << ',' << resource << ',' << count
            << '\n';
    };
    for (const ResultRow* row : sorted) {
        if (row->status != "ok") {
            emit_line(*row, "FAILED", 0);
            continue;
        }
        for (const auto& [resource, count] : row->per_resource_completion) {
            emit_line(*row, resource, count);
        }
    }
    return out.str();
}

void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("emit_results: cannot open " + path.string());
    }
    out << results_to_csv(rows);
    if (!out) {
        throw IoError("emit_results: write failed for " + path.string());
    }
}

}  // namespace gridsched::harness
