#include "gridsched/stats/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "gridsched/errors.hpp"

namespace gridsched::stats {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_report(const StatStore& store, const std::vector<std::string>& categories,
                  const std::filesystem::path& path) {
    struct IndexedRecord {
        const StatRecord* record;
        std::size_t arrival;
    };
    std::vector<IndexedRecord> rows;
    for (std::size_t i = 0; i < store.records().size(); ++i) {
        const StatRecord& r = store.records()[i];
        const bool matched = std::any_of(categories.begin(), categories.end(),
                                         [&](const std::string& pattern) {
                                             return category_matches(pattern, r.category);
                                         });
        if (matched) {
            rows.push_back({&r, i});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const IndexedRecord& a, const IndexedRecord& b) {
        if (a.record->time != b.record->time) return a.record->time < b.record->time;
        if (a.record->entity_name != b.record->entity_name) {
            return a.record->entity_name < b.record->entity_name;
        }
        if (a.record->category != b.record->category) return a.record->category < b.record->category;
        return a.arrival < b.arrival;
    });

    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) {
        throw IoError("write_report: cannot open " + path.string());
    }
    out << "time,entity,category,value\n";
    for (const auto& row : rows) {
        out << format_value(row.record->time) << ',' << row.record->entity_name << ','
            << row.record->category << ',' << format_value(row.record->value) << '\n';
    }
    if (!out) {
        throw IoError("write_report: write failed for " + path.string());
    }
}

}  // namespace gridsched::stats
