#include "gridsched/res/calendar.hpp"

#include <cmath>
#include <limits>

namespace gridsched::res {

namespace {

long floor_div_day(double local) {
    return static_cast<long>(std::floor(local / kSecondsPerDay));
}

}  // namespace

void ResourceCalendar::validate() const {
    for (const double load : {peak_load, off_peak_load, holiday_load}) {
        if (!(load >= 0.0 && load < 1.0)) {
            throw InvalidResource("calendar load fractions must be in [0, 1)");
        }
    }
    if (peak_start_hour < 0 || peak_end_hour > 24 || peak_start_hour > peak_end_hour) {
        throw InvalidResource("calendar peak window must satisfy 0 <= start <= end <= 24");
    }
}

double ResourceCalendar::load_at(sim::SimTime now) const {
    const double local = now + time_zone_hours * kSecondsPerHour;
    const long day = floor_div_day(local);
    const int weekday = static_cast<int>(((day % 7) + 7) % 7);
    if (weekends.count(weekday) != 0 || holidays.count(day) != 0) {
        return holiday_load;
    }
    const double hour = (local - static_cast<double>(day) * kSecondsPerDay) / kSecondsPerHour;
    const bool peak = hour >= peak_start_hour && hour < peak_end_hour;
    return peak ? peak_load : off_peak_load;
}

sim::SimTime ResourceCalendar::next_boundary_after(sim::SimTime now) const {
    if (uniform()) {
        return std::numeric_limits<double>::infinity();
    }
    const double local = now + time_zone_hours * kSecondsPerHour;
    const double day_start = static_cast<double>(floor_div_day(local)) * kSecondsPerDay;
    double next_local = std::numeric_limits<double>::infinity();
    // Candidate regime edges today and tomorrow: midnight and the peak window.
    for (int d = 0; d <= 1; ++d) {
        const double base = day_start + d * kSecondsPerDay;
        for (const double edge : {base, base + peak_start_hour * kSecondsPerHour,
                                  base + peak_end_hour * kSecondsPerHour}) {
            if (edge > local + 1e-9 && edge < next_local) {
                next_local = edge;
            }
        }
    }
    return next_local - time_zone_hours * kSecondsPerHour;
}

double effective_mips(const Pe& pe, const ResourceCalendar& calendar, sim::SimTime now) {
    return pe.mips_rating * (1.0 - calendar.load_at(now));
}

}  // namespace gridsched::res
