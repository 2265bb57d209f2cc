#pragma once

#include "gridsched/harness/config.hpp"

namespace gridsched::harness {

// The 11-resource WWG testbed (R0..R10) with zero-load calendars, plus one
// default user running the 200-job task-farming application at a relaxed
// deadline (3100) and ample budget (22000).
ScenarioConfig wwg_preset();

}  // namespace gridsched::harness
