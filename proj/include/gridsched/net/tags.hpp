#pragma once

namespace gridsched::net::tags {

// Shared message-tag vocabulary. These values are part of the public event
// protocol and must not change.
inline constexpr int END_OF_SIMULATION = -1;
inline constexpr int INSIGNIFICANT = 0;
inline constexpr int EXPERIMENT = 1;                          // User <-> Broker
inline constexpr int REGISTER_RESOURCE = 2;                   // Resource -> GIS
inline constexpr int RESOURCE_LIST = 3;                       // GIS <-> Broker
inline constexpr int RESOURCE_CHARACTERISTICS = 4;            // Broker <-> Resource
inline constexpr int RESOURCE_DYNAMICS = 5;                   // Broker <-> Resource
inline constexpr int GRIDLET_SUBMIT = 6;                      // Broker -> Resource
inline constexpr int GRIDLET_RETURN = 7;                      // Broker <- Resource
inline constexpr int GRIDLET_STATUS = 8;                      // Broker <-> Resource
inline constexpr int RECORD_STATISTICS = 9;                   // Entity -> Statistics
inline constexpr int RETURN_STAT_LIST = 10;                   // Entity <- Statistics
inline constexpr int RETURN_ACC_STATISTICS_BY_CATEGORY = 11;  // Entity <- Statistics

inline constexpr int DEFAULT_BAUD_RATE = 9600;

// Internal (self-scheduled) event tags live outside the shared table.
inline constexpr int INTERNAL_COMPLETION = 100;    // resource completion forecast
inline constexpr int INTERNAL_CALENDAR_TICK = 101; // load-regime boundary

}  // namespace gridsched::net::tags
