#include "gridsched/res/characteristics.hpp"

namespace gridsched::res {

std::string to_string(AllocationPolicy policy) {
    return policy == AllocationPolicy::TimeShared ? "time_shared" : "space_shared";
}

int ResourceCharacteristics::total_pes() const {
    int n = 0;
    for (const auto& m : machines) {
        n += static_cast<int>(m.pes.size());
    }
    return n;
}

double ResourceCharacteristics::pe_mips() const {
    return machines.front().pes.front().mips_rating;
}

void ResourceCharacteristics::validate() const {
    if (machines.empty()) {
        throw InvalidResource("resource needs at least one machine");
    }
    for (const auto& m : machines) {
        if (m.pes.empty()) {
            throw InvalidResource("machine " + std::to_string(m.id) + " has no PEs");
        }
        for (const auto& pe : m.pes) {
            if (!(pe.mips_rating > 0.0)) {
                throw InvalidResource("PE MIPS rating must be positive");
            }
            if (pe.mips_rating != pe_mips()) {
                throw InvalidResource("PE ratings within a resource must be uniform");
            }
        }
    }
    if (cost_per_pe_time_unit < 0.0) {
        throw InvalidResource("cost per PE time unit must be non-negative");
    }
    if (policy == AllocationPolicy::TimeShared && machines.size() != 1) {
        throw InvalidResource("a time-shared resource is a single machine");
    }
}

ResourceCharacteristics make_characteristics(int n_machines, int pes_per_machine, double pe_mips,
                                             AllocationPolicy policy, double price_per_pe_time,
                                             double time_zone) {
    ResourceCharacteristics chars;
    chars.policy = policy;
    chars.cost_per_pe_time_unit = price_per_pe_time;
    chars.time_zone = time_zone;
    for (int m = 0; m < n_machines; ++m) {
        Machine machine;
        machine.id = m;
        for (int p = 0; p < pes_per_machine; ++p) {
            machine.pes.push_back(Pe{p, pe_mips, false});
        }
        chars.machines.push_back(std::move(machine));
    }
    chars.validate();
    return chars;
}

}  // namespace gridsched::res
