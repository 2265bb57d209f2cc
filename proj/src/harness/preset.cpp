#include "gridsched/harness/preset.hpp"

namespace gridsched::harness {

namespace {

ResourceConfig wwg_resource(const char* name, int n_pes, double mips,
                            res::AllocationPolicy policy, double price) {
    ResourceConfig rc;
    rc.name = name;
    rc.pe_mips = mips;
    rc.policy = policy;
    rc.price_per_pe_time_unit = price;
    if (policy == res::AllocationPolicy::TimeShared) {
        rc.n_machines = 1;
        rc.pes_per_machine = n_pes;
    } else {
        // Space-shared resources model clusters of uniprocessor nodes.
        rc.n_machines = n_pes;
        rc.pes_per_machine = 1;
    }
    return rc;
}

}  // namespace

ScenarioConfig wwg_preset() {
    using res::AllocationPolicy;
    ScenarioConfig cfg;
    cfg.seed = 1;
    cfg.resources = {
        wwg_resource("R0", 4, 515, AllocationPolicy::TimeShared, 8),
        wwg_resource("R1", 4, 377, AllocationPolicy::TimeShared, 4),
        wwg_resource("R2", 4, 377, AllocationPolicy::TimeShared, 3),
        wwg_resource("R3", 2, 377, AllocationPolicy::TimeShared, 3),
        wwg_resource("R4", 2, 380, AllocationPolicy::TimeShared, 2),
        wwg_resource("R5", 6, 410, AllocationPolicy::TimeShared, 5),
        wwg_resource("R6", 16, 410, AllocationPolicy::TimeShared, 5),
        wwg_resource("R7", 16, 410, AllocationPolicy::SpaceShared, 4),
        wwg_resource("R8", 2, 380, AllocationPolicy::TimeShared, 1),
        wwg_resource("R9", 4, 410, AllocationPolicy::TimeShared, 6),
        wwg_resource("R10", 8, 377, AllocationPolicy::TimeShared, 3),
    };
    UserConfig user;
    user.kind = UserConfig::Kind::Experiment;
    user.n_gridlets = 200;
    user.base_time_units = 100.0;
    user.variation = 0.1;
    user.use_factors = false;
    user.deadline = 3100.0;
    user.budget = 22000.0;
    cfg.users = {user};
    cfg.validate();
    return cfg;
}

}  // namespace gridsched::harness
