#pragma once

#include <set>

#include "gridsched/res/characteristics.hpp"
#include "gridsched/sim/event.hpp"

namespace gridsched::res {

// One simulation time unit is one second; day zero of local time is a Monday.
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;

// Calendar-driven local (non-grid) load. Load is a fraction in [0, 1) of the
// resource taken by local work; the grid sees rating * (1 - load).
struct ResourceCalendar {
    double time_zone_hours = 0.0;
    std::set<int> weekends = {5, 6};  // weekday indices, 0 = Monday
    std::set<long> holidays;          // local day numbers
    double peak_load = 0.0;
    double off_peak_load = 0.0;
    double holiday_load = 0.0;
    int peak_start_hour = 9;   // local peak window [start, end)
    int peak_end_hour = 17;

    void validate() const;  // loads must be < 1
    bool uniform() const {
        return peak_load == off_peak_load && peak_load == holiday_load;
    }

    double load_at(sim::SimTime now) const;
    // Next local hour at which the load regime may change; +inf when the
    // calendar is uniform and never changes.
    sim::SimTime next_boundary_after(sim::SimTime now) const;
};

double effective_mips(const Pe& pe, const ResourceCalendar& calendar, sim::SimTime now);

}  // namespace gridsched::res
