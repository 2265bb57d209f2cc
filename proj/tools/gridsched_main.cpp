// Command-line experiment runner: single scenarios and deadline/budget
// sweeps over JSON configs or the built-in WWG preset.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gridsched/errors.hpp"
#include "gridsched/harness/preset.hpp"
#include "gridsched/harness/runner.hpp"
#include "gridsched/stats/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

gridsched::harness::ScenarioConfig resolve_config(const std::string& config_path,
                                                  const std::string& preset, bool seed_set,
                                                  std::uint64_t seed) {
    using namespace gridsched::harness;
    ScenarioConfig cfg;
    if (!preset.empty()) {
        if (preset != "wwg") {
            throw gridsched::ConfigError("unknown preset '" + preset + "' (available: wwg)");
        }
        cfg = wwg_preset();
        if (!config_path.empty()) {
            ScenarioConfig file_cfg = load_config(config_path);
            if (!file_cfg.resources.empty()) {
                throw gridsched::ConfigError(
                    "config defines resources but --preset was given; drop one of them");
            }
            cfg.users = file_cfg.users;
            cfg.sweep = file_cfg.sweep;
            cfg.seed = file_cfg.seed;
            cfg.standard_pe_mips = file_cfg.standard_pe_mips;
            cfg.default_baud_rate = file_cfg.default_baud_rate;
            cfg.gis_bypass_network = file_cfg.gis_bypass_network;
            cfg.return_uses_output_size = file_cfg.return_uses_output_size;
        }
    } else {
        if (config_path.empty()) {
            throw gridsched::ConfigError("either --config or --preset is required");
        }
        cfg = load_config(config_path);
    }
    if (seed_set) {
        cfg.seed = seed;
    }
    cfg.validate();
    return cfg;
}

void print_run_summary(const gridsched::harness::SingleRunOutput& out) {
    for (const auto& row : out.rows) {
        std::cout << "user " << row.user_id << ": completed=" << row.completed
                  << " time_utilized=" << gridsched::stats::format_value(row.time_utilized)
                  << " budget_spent=" << gridsched::stats::format_value(row.budget_spent)
                  << " termination_time="
                  << gridsched::stats::format_value(row.termination_time) << "\n";
        for (const auto& [resource, count] : row.per_resource_completion) {
            if (count > 0) {
                std::cout << "  " << resource << ": " << count << "\n";
            }
        }
    }
    std::cout << "final_clock=" << gridsched::stats::format_value(out.report.final_clock)
              << " events=" << out.report.total_delivered
              << " trace_digest=" << out.report.trace_digest << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridsched: deterministic grid scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_path;
    std::string stat_report_path;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config (JSON)");
        cmd->add_option("--preset", preset, "built-in scenario preset (wwg)");
        cmd->add_option("--seed", seed, "override the scenario seed")
            ->each([&](const std::string&) { seed_set = true; });
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run a single scenario");
    add_common(run_cmd);
    run_cmd->add_option("--out", out_path, "write the results CSV here");
    run_cmd->add_option("--stat-report", stat_report_path,
                        "write the recorded-statistics CSV here");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a deadline/budget sweep");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--out", out_path, "write the results CSV here")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = resolve_config(config_path, preset, seed_set, seed);
        if (run_cmd->parsed()) {
            if (cfg.sweep.has_value()) {
                throw gridsched::ConfigError(
                    "config has a sweep block; use the sweep subcommand");
            }
            const auto out = gridsched::harness::run_single(cfg);
            if (!out_path.empty()) {
                gridsched::harness::emit_results(out.rows, out_path);
            }
            if (!stat_report_path.empty()) {
                gridsched::stats::write_report(out.stats, {"*.USER.*", "*.GRIDLET.*"},
                                               stat_report_path);
            }
            print_run_summary(out);
        } else {
            if (!cfg.sweep.has_value()) {
                throw gridsched::ConfigError("sweep needs a config with a sweep block");
            }
            const auto rows = gridsched::harness::run_sweep(cfg);
            gridsched::harness::emit_results(rows, out_path);
            std::cout << "wrote " << rows.size() << " result rows to " << out_path << "\n";
        }
    } catch (const gridsched::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}
