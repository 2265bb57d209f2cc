#include "gridsched/harness/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridsched/errors.hpp"

namespace gridsched::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

template <typename T>
T get_field(const json& obj, const std::string& where, const std::string& key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(where + "." + key, e.what());
    }
}

template <typename T>
T require_field(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) {
        fail(where, "missing required field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(where + "." + key, e.what());
    }
}

res::AllocationPolicy parse_policy(const std::string& where, const std::string& text) {
    if (text == "time_shared") return res::AllocationPolicy::TimeShared;
    if (text == "space_shared") return res::AllocationPolicy::SpaceShared;
    fail(where, "policy must be 'time_shared' or 'space_shared', got '" + text + "'");
}

CalendarConfig parse_calendar(const json& obj, const std::string& where) {
    CalendarConfig cal;
    cal.weekends = get_field<std::vector<int>>(obj, where, "weekends", cal.weekends);
    cal.holidays = get_field<std::vector<long>>(obj, where, "holidays", cal.holidays);
    cal.peak_load = get_field<double>(obj, where, "peak_load", cal.peak_load);
    cal.off_peak_load = get_field<double>(obj, where, "off_peak_load", cal.off_peak_load);
    cal.holiday_load = get_field<double>(obj, where, "holiday_load", cal.holiday_load);
    cal.peak_start_hour = get_field<int>(obj, where, "peak_start_hour", cal.peak_start_hour);
    cal.peak_end_hour = get_field<int>(obj, where, "peak_end_hour", cal.peak_end_hour);
    return cal;
}

ResourceConfig parse_resource(const json& obj, const std::string& where) {
    ResourceConfig rc;
    rc.name = require_field<std::string>(obj, where, "name");
    rc.n_machines = get_field<int>(obj, where, "n_machines", 1);
    rc.pes_per_machine = get_field<int>(obj, where, "pes_per_machine", 1);
    rc.pe_mips = require_field<double>(obj, where, "pe_mips");
    rc.policy = parse_policy(where + ".policy",
                             get_field<std::string>(obj, where, "policy", "time_shared"));
    rc.price_per_pe_time_unit = require_field<double>(obj, where, "price_per_pe_time_unit");
    rc.time_zone = get_field<double>(obj, where, "time_zone", 0.0);
    if (obj.contains("calendar")) {
        rc.calendar = parse_calendar(obj.at("calendar"), where + ".calendar");
    }
    rc.baud_rate = get_field<double>(obj, where, "baud_rate", 0.0);
    return rc;
}

UserConfig parse_user(const json& obj, const std::string& where) {
    UserConfig uc;
    const std::string kind = get_field<std::string>(obj, where, "type", "experiment");
    if (kind == "experiment") {
        uc.kind = UserConfig::Kind::Experiment;
    } else if (kind == "trace") {
        uc.kind = UserConfig::Kind::Trace;
    } else {
        fail(where + ".type", "must be 'experiment' or 'trace', got '" + kind + "'");
    }
    uc.baud_rate = get_field<double>(obj, where, "baud_rate", 0.0);

    if (uc.kind == UserConfig::Kind::Trace) {
        uc.trace_resource = require_field<std::string>(obj, where, "resource");
        if (!obj.contains("gridlets") || !obj.at("gridlets").is_array()) {
            fail(where, "trace user needs a 'gridlets' array");
        }
        int i = 0;
        for (const auto& item : obj.at("gridlets")) {
            const std::string gw = where + ".gridlets[" + std::to_string(i++) + "]";
            TraceGridletConfig tg;
            tg.length_mi = require_field<double>(item, gw, "length_mi");
            tg.arrival = get_field<double>(item, gw, "arrival", 0.0);
            tg.input_size_bytes = get_field<std::uint64_t>(item, gw, "input_size_bytes", 0);
            tg.output_size_bytes = get_field<std::uint64_t>(item, gw, "output_size_bytes", 0);
            uc.trace_gridlets.push_back(tg);
        }
        return uc;
    }

    uc.n_gridlets = require_field<int>(obj, where, "n_gridlets");
    uc.base_time_units = get_field<double>(obj, where, "base_time_units", 100.0);
    uc.variation = get_field<double>(obj, where, "variation", 0.0);
    uc.policy = get_field<std::string>(obj, where, "policy", "cost_opt");
    uc.gridlet_input_bytes = get_field<std::uint64_t>(obj, where, "gridlet_input_bytes", 0);
    uc.gridlet_output_bytes = get_field<std::uint64_t>(obj, where, "gridlet_output_bytes", 0);
    uc.max_gridlets_per_pe = get_field<int>(obj, where, "max_gridlets_per_pe", 2);

    const bool has_factors = obj.contains("d_factor") || obj.contains("b_factor");
    const bool has_absolutes = obj.contains("deadline") || obj.contains("budget");
    if (has_factors == has_absolutes) {
        fail(where, "give exactly one of {d_factor,b_factor} or {deadline,budget}");
    }
    if (has_factors) {
        uc.use_factors = true;
        uc.d_factor = require_field<double>(obj, where, "d_factor");
        uc.b_factor = require_field<double>(obj, where, "b_factor");
    } else {
        uc.deadline = require_field<double>(obj, where, "deadline");
        uc.budget = require_field<double>(obj, where, "budget");
    }
    return uc;
}

json calendar_to_json(const CalendarConfig& cal) {
    return json{{"weekends", cal.weekends},
                {"holidays", cal.holidays},
                {"peak_load", cal.peak_load},
                {"off_peak_load", cal.off_peak_load},
                {"holiday_load", cal.holiday_load},
                {"peak_start_hour", cal.peak_start_hour},
                {"peak_end_hour", cal.peak_end_hour}};
}

}  // namespace

void ScenarioConfig::validate() const {
    if (resources.empty()) {
        throw ConfigError("config: resources: need at least one resource");
    }
    if (users.empty()) {
        throw ConfigError("config: users: need at least one user");
    }
    if (!(standard_pe_mips > 0.0)) {
        throw ConfigError("config: standard_pe_mips: must be positive");
    }
    if (!(default_baud_rate > 0.0)) {
        throw ConfigError("config: default_baud_rate: must be positive");
    }
    for (std::size_t i = 0; i < resources.size(); ++i) {
        const auto& rc = resources[i];
        const std::string where = "resources[" + std::to_string(i) + "]";
        if (rc.name.empty()) throw ConfigError("config: " + where + ".name: empty");
        if (rc.n_machines < 1 || rc.pes_per_machine < 1) {
            throw ConfigError("config: " + where + ": machine/PE counts must be >= 1");
        }
        if (!(rc.pe_mips > 0.0)) throw ConfigError("config: " + where + ".pe_mips: must be positive");
        if (rc.price_per_pe_time_unit < 0.0) {
            throw ConfigError("config: " + where + ".price_per_pe_time_unit: must be >= 0");
        }
        if (rc.policy == res::AllocationPolicy::TimeShared && rc.n_machines != 1) {
            throw ConfigError("config: " + where + ": a time-shared resource has one machine");
        }
        for (const double load :
             {rc.calendar.peak_load, rc.calendar.off_peak_load, rc.calendar.holiday_load}) {
            if (!(load >= 0.0 && load < 1.0)) {
                throw ConfigError("config: " + where + ".calendar: loads must be in [0, 1)");
            }
        }
    }
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& uc = users[i];
        const std::string where = "users[" + std::to_string(i) + "]";
        if (uc.kind == UserConfig::Kind::Trace) {
            if (uc.trace_gridlets.empty()) {
                throw ConfigError("config: " + where + ".gridlets: trace user has no gridlets");
            }
            if (uc.trace_resource.empty()) {
                throw ConfigError("config: " + where + ".resource: missing trace target");
            }
            continue;
        }
        if (uc.n_gridlets < 0) throw ConfigError("config: " + where + ".n_gridlets: negative");
        if (!(uc.variation >= 0.0 && uc.variation <= 1.0)) {
            throw ConfigError("config: " + where + ".variation: must be in [0, 1]");
        }
        if (uc.policy != "cost_opt") {
            throw ConfigError("config: " + where + ".policy: only 'cost_opt' is supported");
        }
        if (uc.max_gridlets_per_pe < 1) {
            throw ConfigError("config: " + where + ".max_gridlets_per_pe: must be >= 1");
        }
        if (!uc.use_factors) {
            if (!(uc.deadline > 0.0)) {
                throw ConfigError("config: " + where + ".deadline: must be positive");
            }
            if (uc.budget < 0.0) {
                throw ConfigError("config: " + where + ".budget: must be >= 0");
            }
        } else if (uc.d_factor < 0.0 || uc.b_factor < 0.0) {
            throw ConfigError("config: " + where + ": factors must be >= 0");
        }
    }
    if (sweep) {
        if (sweep->deadline_values.empty() || sweep->budget_values.empty()) {
            throw ConfigError("config: sweep: deadline_values and budget_values must be non-empty");
        }
        if (!sweep->user_counts.empty()) {
            for (const int n : sweep->user_counts) {
                if (n < 1) throw ConfigError("config: sweep.user_counts: counts must be >= 1");
            }
            if (users.front().kind != UserConfig::Kind::Experiment) {
                throw ConfigError("config: sweep.user_counts: users[0] must be an experiment user");
            }
        }
        for (const auto& uc : users) {
            if (uc.kind == UserConfig::Kind::Trace) {
                throw ConfigError("config: sweep: trace users cannot be swept");
            }
        }
    }
}

ScenarioConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ScenarioConfig cfg;
    cfg.seed = get_field<std::uint64_t>(root, "$", "seed", 1);
    cfg.standard_pe_mips = get_field<double>(root, "$", "standard_pe_mips", 100.0);
    cfg.default_baud_rate = get_field<double>(root, "$", "default_baud_rate", 28000.0);
    cfg.gis_bypass_network = get_field<bool>(root, "$", "gis_bypass_network", false);
    cfg.return_uses_output_size = get_field<bool>(root, "$", "return_uses_output_size", true);

    if (!root.contains("resources") || !root.at("resources").is_array()) {
        fail("$", "missing 'resources' array");
    }
    int i = 0;
    for (const auto& item : root.at("resources")) {
        cfg.resources.push_back(parse_resource(item, "resources[" + std::to_string(i++) + "]"));
    }
    if (!root.contains("users") || !root.at("users").is_array()) {
        fail("$", "missing 'users' array");
    }
    i = 0;
    for (const auto& item : root.at("users")) {
        cfg.users.push_back(parse_user(item, "users[" + std::to_string(i++) + "]"));
    }
    if (root.contains("sweep")) {
        const auto& sw = root.at("sweep");
        SweepConfig sweep;
        sweep.deadline_values =
            get_field<std::vector<double>>(sw, "sweep", "deadline_values", {});
        sweep.budget_values = get_field<std::vector<double>>(sw, "sweep", "budget_values", {});
        sweep.user_counts = get_field<std::vector<int>>(sw, "sweep", "user_counts", {});
        cfg.sweep = std::move(sweep);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json root;
    root["seed"] = cfg.seed;
    root["standard_pe_mips"] = cfg.standard_pe_mips;
    root["default_baud_rate"] = cfg.default_baud_rate;
    root["gis_bypass_network"] = cfg.gis_bypass_network;
    root["return_uses_output_size"] = cfg.return_uses_output_size;

    root["resources"] = json::array();
    for (const auto& rc : cfg.resources) {
        root["resources"].push_back(json{{"name", rc.name},
                                         {"n_machines", rc.n_machines},
                                         {"pes_per_machine", rc.pes_per_machine},
                                         {"pe_mips", rc.pe_mips},
                                         {"policy", res::to_string(rc.policy)},
                                         {"price_per_pe_time_unit", rc.price_per_pe_time_unit},
                                         {"time_zone", rc.time_zone},
                                         {"calendar", calendar_to_json(rc.calendar)},
                                         {"baud_rate", rc.baud_rate}});
    }
    root["users"] = json::array();
    for (const auto& uc : cfg.users) {
        json u;
        if (uc.kind == UserConfig::Kind::Trace) {
            u["type"] = "trace";
            u["resource"] = uc.trace_resource;
            u["baud_rate"] = uc.baud_rate;
            u["gridlets"] = json::array();
            for (const auto& tg : uc.trace_gridlets) {
                u["gridlets"].push_back(json{{"length_mi", tg.length_mi},
                                             {"arrival", tg.arrival},
                                             {"input_size_bytes", tg.input_size_bytes},
                                             {"output_size_bytes", tg.output_size_bytes}});
            }
        } else {
            u["type"] = "experiment";
            u["n_gridlets"] = uc.n_gridlets;
            u["base_time_units"] = uc.base_time_units;
            u["variation"] = uc.variation;
            u["policy"] = uc.policy;
            u["baud_rate"] = uc.baud_rate;
            u["gridlet_input_bytes"] = uc.gridlet_input_bytes;
            u["gridlet_output_bytes"] = uc.gridlet_output_bytes;
            u["max_gridlets_per_pe"] = uc.max_gridlets_per_pe;
            if (uc.use_factors) {
                u["d_factor"] = uc.d_factor;
                u["b_factor"] = uc.b_factor;
            } else {
                u["deadline"] = uc.deadline;
                u["budget"] = uc.budget;
            }
        }
        root["users"].push_back(std::move(u));
    }
    if (cfg.sweep) {
        root["sweep"] = json{{"deadline_values", cfg.sweep->deadline_values},
                             {"budget_values", cfg.sweep->budget_values},
                             {"user_counts", cfg.sweep->user_counts}};
    }
    return root.dump(2) + "\n";
}

}  // namespace gridsched::harness
