#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridsched/stats/statistics.hpp"

namespace gridsched::stats {

// Deterministic double formatting used across all emitted CSV files
// (10 significant digits).
std::string format_value(double v);

// Writes `time,entity,category,value` rows for every record matching any of
// the category patterns, sorted by (time, entity name, category). Runs after
// the simulation has ended.
void write_report(const StatStore& store, const std::vector<std::string>& categories,
                  const std::filesystem::path& path);

}  // namespace gridsched::stats
