#pragma once

#include <string>
#include <vector>

#include "gridsched/errors.hpp"

namespace gridsched::res {

enum class AllocationPolicy { TimeShared, SpaceShared };

std::string to_string(AllocationPolicy policy);

struct Pe {
    int id = 0;
    double mips_rating = 0.0;
    bool busy = false;
};

struct Machine {
    int id = 0;
    std::vector<Pe> pes;
};

// Static properties of a grid resource. PEs within one resource are
// homogeneous; a time-shared resource is a single (multi-PE) machine while a
// space-shared resource may span several.
struct ResourceCharacteristics {
    std::string architecture = "unspecified";
    std::string os = "unspecified";
    std::vector<Machine> machines;
    AllocationPolicy policy = AllocationPolicy::TimeShared;
    double time_zone = 0.0;                // hours offset
    double cost_per_pe_time_unit = 0.0;    // G$ per PE per time unit

    int total_pes() const;
    double pe_mips() const;  // the common per-PE rating
    void validate() const;   // throws InvalidResource
};

// Builds an n_machines x pes_per_machine resource with a uniform rating.
ResourceCharacteristics make_characteristics(int n_machines, int pes_per_machine, double pe_mips,
                                             AllocationPolicy policy, double price_per_pe_time,
                                             double time_zone = 0.0);

}  // namespace gridsched::res
