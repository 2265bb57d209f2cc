#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridsched/res/characteristics.hpp"
#include "gridsched/sim/event.hpp"

namespace gridsched::harness {

struct CalendarConfig {
    std::vector<int> weekends = {5, 6};
    std::vector<long> holidays;
    double peak_load = 0.0;
    double off_peak_load = 0.0;
    double holiday_load = 0.0;
    int peak_start_hour = 9;
    int peak_end_hour = 17;

    bool operator==(const CalendarConfig&) const = default;
};

struct ResourceConfig {
    std::string name;
    int n_machines = 1;
    int pes_per_machine = 1;
    double pe_mips = 100.0;
    res::AllocationPolicy policy = res::AllocationPolicy::TimeShared;
    double price_per_pe_time_unit = 1.0;
    double time_zone = 0.0;
    CalendarConfig calendar;
    double baud_rate = 0.0;  // 0 = scenario default

    bool operator==(const ResourceConfig&) const = default;
};

struct TraceGridletConfig {
    double length_mi = 0.0;
    sim::SimTime arrival = 0.0;
    std::uint64_t input_size_bytes = 0;
    std::uint64_t output_size_bytes = 0;

    bool operator==(const TraceGridletConfig&) const = default;
};

struct UserConfig {
    enum class Kind { Experiment, Trace };

    Kind kind = Kind::Experiment;
    // experiment users
    int n_gridlets = 1;
    double base_time_units = 100.0;
    double variation = 0.0;
    bool use_factors = false;
    double d_factor = 0.0;
    double b_factor = 0.0;
    double deadline = 0.0;
    double budget = 0.0;
    std::string policy = "cost_opt";
    std::uint64_t gridlet_input_bytes = 0;
    std::uint64_t gridlet_output_bytes = 0;
    int max_gridlets_per_pe = 2;
    // trace users
    std::vector<TraceGridletConfig> trace_gridlets;
    std::string trace_resource;

    double baud_rate = 0.0;  // 0 = scenario default

    bool operator==(const UserConfig&) const = default;
};

struct SweepConfig {
    std::vector<double> deadline_values;
    std::vector<double> budget_values;
    std::vector<int> user_counts;

    bool operator==(const SweepConfig&) const = default;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    double standard_pe_mips = 100.0;
    double default_baud_rate = 28000.0;
    bool gis_bypass_network = false;
    bool return_uses_output_size = true;
    std::vector<ResourceConfig> resources;
    std::vector<UserConfig> users;
    std::optional<SweepConfig> sweep;

    bool operator==(const ScenarioConfig&) const = default;

    void validate() const;  // throws ConfigError naming the offending field
};

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);

}  // namespace gridsched::harness
