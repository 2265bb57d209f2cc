#include <doctest.h>

#include <cmath>

#include "gridsched/app/random.hpp"
#include "gridsched/broker/broker.hpp"
#include "gridsched/broker/estimates.hpp"
#include "gridsched/broker/user.hpp"
#include "gridsched/net/info_service.hpp"
#include "gridsched/net/shutdown.hpp"
#include "gridsched/res/grid_resource.hpp"
#include "gridsched/sim/engine.hpp"
#include "gridsched/stats/statistics.hpp"
#include "oracles.hpp"

using namespace gridsched;
using broker::BrokerCore;
using broker::Experiment;
using res::AllocationPolicy;

namespace {

app::GridletBatch jobs_of(const std::vector<double>& lengths) {
    app::GridletBatch batch;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        app::Gridlet g;
        g.id = static_cast<int>(i);
        g.length_mi = lengths[i];
        batch.push_back(g);
    }
    return batch;
}

res::ResourceCharacteristics one_pe(double mips, double price) {
    return res::make_characteristics(1, 1, mips, AllocationPolicy::TimeShared, price);
}

}  // namespace

TEST_CASE("cost per MI is the reciprocal of MIPS per G$") {
    const auto r0 = res::make_characteristics(1, 4, 515, AllocationPolicy::TimeShared, 8);
    CHECK(1.0 / broker::cost_per_mi(r0) == doctest::Approx(64.37).epsilon(0.0002));
    const auto r8 = res::make_characteristics(1, 2, 380, AllocationPolicy::TimeShared, 1);
    CHECK(1.0 / broker::cost_per_mi(r8) == doctest::Approx(380.0));
    const auto free_resource = one_pe(100, 0);
    CHECK(broker::cost_per_mi(free_resource) == 0.0);
}

TEST_CASE("deadline estimation hits both Eq. 1 boundaries") {
    const auto batch = jobs_of({100.0, 100.0});
    const std::vector<res::ResourceCharacteristics> resources = {one_pe(100, 1), one_pe(50, 1)};

    const double tmin = broker::t_min(batch, resources);
    const double tmax = broker::t_max(batch, resources);
    CHECK(tmin == doctest::Approx(2.0));
    CHECK(tmax == doctest::Approx(4.0));

    // Exhaustive assignment over the same PE lanes confirms the greedy T_MIN.
    CHECK(testing::exhaustive_min_makespan({100.0, 100.0}, {100.0, 50.0}) ==
          doctest::Approx(tmin));

    CHECK(broker::compute_deadline(batch, resources, 0.0) == doctest::Approx(tmin));
    CHECK(broker::compute_deadline(batch, resources, 1.0) == doctest::Approx(tmax));
    CHECK(broker::compute_deadline(batch, resources, 0.5) == doctest::Approx(3.0));
}

TEST_CASE("greedy T_MIN matches the exhaustive oracle on random tiny instances") {
    app::UniformRng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int n_jobs = rng.next_int(1, 5);
        const int n_res = rng.next_int(1, 3);
        std::vector<double> lengths;
        for (int i = 0; i < n_jobs; ++i) {
            lengths.push_back(10.0 + rng.next() * 90.0);
        }
        std::vector<res::ResourceCharacteristics> resources;
        std::vector<double> lanes;
        for (int i = 0; i < n_res; ++i) {
            const double mips = 10.0 + rng.next() * 90.0;
            resources.push_back(one_pe(mips, 1.0));
            lanes.push_back(mips);
        }
        const double greedy = broker::t_min(jobs_of(lengths), resources);
        const double best = testing::exhaustive_min_makespan(lengths, lanes);
        // Greedy earliest-finish is an estimator: never below the optimum,
        // and must coincide at the Eq. 1 lower boundary's spirit for these
        // small instances within a 2x band.
        CHECK(greedy >= best - 1e-9);
        CHECK(greedy <= 2.0 * best + 1e-9);
    }
}

TEST_CASE("budget estimation hits both Eq. 2 boundaries") {
    const auto batch = jobs_of({100.0, 100.0});
    const std::vector<res::ResourceCharacteristics> resources = {one_pe(100, 1), one_pe(100, 5)};
    const double deadline = 2.0;

    CHECK(broker::c_min(batch, resources, deadline) == doctest::Approx(2.0));
    CHECK(broker::c_max(batch, resources, deadline) == doctest::Approx(10.0));
    CHECK(broker::compute_budget(batch, resources, 0.0, deadline) == doctest::Approx(2.0));
    CHECK(broker::compute_budget(batch, resources, 1.0, deadline) == doctest::Approx(10.0));
    CHECK(broker::compute_budget(batch, resources, 0.5, deadline) == doctest::Approx(6.0));
}

TEST_CASE("infeasible deadlines are rejected during budget derivation") {
    const auto batch = jobs_of({1000.0});
    const std::vector<res::ResourceCharacteristics> resources = {one_pe(100, 1)};
    CHECK_THROWS_AS(broker::c_min(batch, resources, 0.5), InfeasibleDeadline);
}

TEST_CASE("constraint derivation without resources is an error") {
    const auto batch = jobs_of({100.0});
    CHECK_THROWS_AS(broker::compute_deadline(batch, {}, 0.5), NoResources);
    CHECK_THROWS_AS(broker::compute_budget(batch, {}, 0.5, 10.0), NoResources);
}

TEST_CASE("experiment constraints are exactly one of factors or absolutes") {
    CHECK_THROWS_AS(Experiment::with_factors(jobs_of({1.0}), -0.1, 0.5), InvalidFactor);
    CHECK_THROWS_AS(Experiment::with_absolutes(jobs_of({1.0}), 0.0, 10.0), SimError);
    CHECK_THROWS_AS(Experiment::with_absolutes(jobs_of({1.0}), 10.0, -1.0), SimError);
    auto batch = jobs_of({1.0});
    batch.push_back(batch.front());  // duplicate id
    CHECK_THROWS_AS(Experiment::with_absolutes(std::move(batch), 10.0, 10.0), SimError);
}

namespace {

// A core with one resource of the given shape, constraints as absolutes.
BrokerCore make_core(const std::vector<double>& lengths, double deadline, double budget,
                     std::vector<res::ResourceCharacteristics> resources,
                     int max_per_pe = 2) {
    BrokerCore core(Experiment::with_absolutes(jobs_of(lengths), deadline, budget), max_per_pe);
    for (std::size_t i = 0; i < resources.size(); ++i) {
        core.add_resource(static_cast<int>(100 + i), "R" + std::to_string(i),
                          std::move(resources[i]));
    }
    core.finalize_resources();
    return core;
}

app::Gridlet returned_copy(const BrokerCore& core, int id, sim::EntityId resource) {
    app::Gridlet g = core.gridlet(id);
    g.status = app::GridletStatus::Success;
    g.executed_on = resource;
    return g;
}

}  // namespace

TEST_CASE("advisor predicts jobs consumable from the measured share") {
    // share 100 MIPS, 10000-MI jobs, deadline - clock = 3100 -> 31 jobs.
    std::vector<double> lengths(40, 10000.0);
    auto core = make_core(lengths, 3100.0, 1e9, {one_pe(100, 1)});
    const auto plan = core.schedule_advisor(0.0);
    REQUIRE(plan.entries.size() == 1);
    CHECK(plan.entries[0].predicted_capacity == 31);
    CHECK(plan.entries[0].active_after == 31);
    CHECK(core.unassigned().size() == 9);
}

TEST_CASE("advisor returns an empty plan once the budget is spent") {
    auto core = make_core({100.0, 100.0}, 1000.0, 1.0, {one_pe(100, 1)});
    // Force expenses past the budget through a dispatched-and-returned job.
    core.schedule_advisor(0.0);
    core.plan_dispatch(0.0);
    core.on_gridlet_return(returned_copy(core, 0, 100), 1.0);
    CHECK(core.expenses() >= 1.0);
    const auto plan = core.schedule_advisor(2.0);
    CHECK(plan.entries.empty());
}

TEST_CASE("relaxed deadline sends every job to the cheapest resource") {
    std::vector<double> lengths(10, 100.0);
    auto core = make_core(lengths, 1e6, 1e9,
                          {one_pe(100, 5), one_pe(100, 1), one_pe(100, 3)});
    const auto plan = core.schedule_advisor(0.0);
    // Records are sorted cheapest-per-MI first.
    CHECK(core.records()[0].cost_per_mi == doctest::Approx(0.01));
    CHECK(plan.entries[0].active_after == 10);
    CHECK(plan.entries[1].active_after == 0);
    CHECK(plan.entries[2].active_after == 0);
}

TEST_CASE("cost sort breaks ties by discovery order") {
    auto core = make_core({100.0}, 100.0, 1e9, {one_pe(100, 3), one_pe(100, 3)});
    CHECK(core.records()[0].name == "R0");
    CHECK(core.records()[1].name == "R1");
}

TEST_CASE("dispatcher stages at most max_per_pe * n_pes minus in-flight") {
    SUBCASE("4 PEs, nothing in flight, plan 20 -> 8") {
        std::vector<double> lengths(20, 100.0);
        auto core = make_core(lengths, 1e6, 1e9,
                              {res::make_characteristics(1, 4, 100, AllocationPolicy::TimeShared,
                                                         1)});
        core.schedule_advisor(0.0);
        CHECK(core.plan_dispatch(0.0).size() == 8);
        SUBCASE("all staging slots full -> 0") {
            CHECK(core.plan_dispatch(0.0).empty());
        }
    }
    SUBCASE("1 PE, 1 in flight, plan 5 -> 1") {
        std::vector<double> lengths(5, 100.0);
        auto core = make_core(lengths, 1e6, 1e9, {one_pe(100, 1)});
        core.schedule_advisor(0.0);
        auto first = core.plan_dispatch(0.0);
        REQUIRE(first.size() == 2);  // fills both slots
        core.on_gridlet_return(returned_copy(core, first[0].gridlet_id, 100), 1.0);
        CHECK(core.plan_dispatch(1.0).size() == 1);
    }
}

TEST_CASE("receiver accounts cost and recalibrates the share") {
    // 10000-MI gridlet on a 380 MIPS / 1 G$ resource costs 26.32.
    auto core = make_core({10000.0, 10000.0}, 1e6, 1e9,
                          {res::make_characteristics(1, 2, 380, AllocationPolicy::TimeShared, 1)});
    core.schedule_advisor(0.0);
    const auto orders = core.plan_dispatch(0.0);
    REQUIRE(orders.size() == 2);

    core.on_gridlet_return(returned_copy(core, 0, 100), 50.0);
    CHECK(core.expenses() == doctest::Approx(26.32).epsilon(0.0002));
    // The returned job ran at 10000/50 MI per unit alongside one other job.
    CHECK(core.records()[0].measured_share_mips == doctest::Approx(2.0 * 10000.0 / 50.0));

    SUBCASE("double return is a protocol error") {
        CHECK_THROWS_AS(core.on_gridlet_return(returned_copy(core, 0, 100), 60.0),
                        ProtocolError);
    }
    SUBCASE("unknown gridlet is a protocol error") {
        auto ghost = returned_copy(core, 1, 100);
        ghost.id = 999;
        CHECK_THROWS_AS(core.on_gridlet_return(ghost, 60.0), ProtocolError);
    }
}

TEST_CASE("a lone in-flight gridlet recalibrates the share to length/t") {
    auto core = make_core({10000.0}, 1e6, 1e9, {one_pe(380, 1)});
    core.schedule_advisor(0.0);
    REQUIRE(core.plan_dispatch(0.0).size() == 1);
    core.on_gridlet_return(returned_copy(core, 0, 100), 40.0);
    CHECK(core.records()[0].measured_share_mips == doctest::Approx(10000.0 / 40.0));
}

TEST_CASE("initial share guess is the whole resource") {
    auto core = make_core({1.0}, 10.0, 10.0,
                          {res::make_characteristics(1, 4, 100, AllocationPolicy::TimeShared, 1)});
    CHECK(core.records()[0].measured_share_mips == doctest::Approx(400.0));
}

namespace {

struct BrokerScenario {
    sim::Engine engine;
    broker::Broker* broker = nullptr;
    broker::UserEntity* user = nullptr;
    res::GridResource* cheap = nullptr;
    stats::StatisticsEntity* statistics = nullptr;
};

// GIS + statistics + shutdown + two 1-PE resources (cheap and pricey) + one
// broker/user pair.
void build_broker_scenario(BrokerScenario& s, Experiment experiment, double cheap_price = 1.0,
                           double pricey_price = 5.0) {
    s.engine.make_entity<net::InformationService>("GIS");
    s.statistics = &s.engine.make_entity<stats::StatisticsEntity>("Statistics");
    s.engine.make_entity<net::ShutdownCoordinator>("Shutdown", 1);
    s.cheap = &s.engine.make_entity<res::GridResource>(
        "cheap", one_pe(100, cheap_price), res::ResourceCalendar{}, 9600.0, "GIS");
    s.engine.make_entity<res::GridResource>("pricey", one_pe(100, pricey_price),
                                            res::ResourceCalendar{}, 9600.0, "GIS");
    s.broker = &s.engine.make_entity<broker::Broker>("Broker_U0", "GIS", "Statistics", 9600.0);
    s.user = &s.engine.make_entity<broker::UserEntity>("U0", "Broker_U0", "Shutdown",
                                                       std::move(experiment), 9600.0);
}

}  // namespace

TEST_CASE("broker completes a small batch on the cheapest resource") {
    BrokerScenario s;
    build_broker_scenario(s,
                          Experiment::with_absolutes(jobs_of({100, 100, 100, 100}), 10.0, 100.0));
    s.engine.run();

    REQUIRE(s.user->result().has_value());
    const Experiment& result = *s.user->result();
    CHECK(result.status == broker::ExperimentStatus::Completed);
    CHECK(result.completed_count() == 4);
    CHECK(result.expenses == doctest::Approx(4.0));
    const auto cheap_id = s.engine.find_entity("cheap");
    for (const auto& g : result.gridlets) {
        CHECK(g.status == app::GridletStatus::Success);
        CHECK(g.executed_on == cheap_id);
    }
    CHECK(result.end_time <= 10.0);
    // Expense bookkeeping matches the per-resource tally.
    CHECK(s.broker->core()->records()[0].expenses == doctest::Approx(4.0));
}

TEST_CASE("broker records its user stat categories") {
    BrokerScenario s;
    build_broker_scenario(s, Experiment::with_absolutes(jobs_of({100, 100}), 10.0, 100.0));
    s.engine.run();
    const auto& store = s.statistics->store();
    CHECK(store.filter("U0.USER.TimeUtilization").size() == 1);
    CHECK(store.filter("U0.USER.GridletCompletionFactor").size() == 1);
    CHECK(store.filter("U0.USER.BudgetUtilization").size() == 1);
    CHECK(store.filter("*.USER.GridletCompletionFactor").front().value == doctest::Approx(1.0));
}

TEST_CASE("an empty experiment succeeds immediately with zero expenses") {
    BrokerScenario s;
    build_broker_scenario(s, Experiment::with_absolutes({}, 10.0, 100.0));
    s.engine.run();
    REQUIRE(s.user->result().has_value());
    CHECK(s.user->result()->status == broker::ExperimentStatus::Completed);
    CHECK(s.user->result()->expenses == 0.0);
    CHECK(s.user->result()->completed_count() == 0);
}

TEST_CASE("a tight deadline limits completions and dispatching stops at the deadline") {
    // 1-MIPS-per... two 100-MIPS resources; 10 jobs of 100 MI; deadline lets
    // only a few through.
    BrokerScenario s;
    std::vector<double> lengths(10, 100.0);
    build_broker_scenario(s, Experiment::with_absolutes(jobs_of(lengths), 3.0, 1e9));
    s.engine.run();
    REQUIRE(s.user->result().has_value());
    const Experiment& result = *s.user->result();
    CHECK(result.status == broker::ExperimentStatus::ConstraintExhausted);
    CHECK(result.completed_count() < 10);
    CHECK(result.completed_count() >= 1);
    // In-flight jobs are awaited, never cancelled: everything dispatched
    // eventually returned.
    CHECK(s.broker->core()->total_in_flight() == 0);
}

TEST_CASE("a tight budget blocks assignments past the committed cost") {
    BrokerScenario s;
    std::vector<double> lengths(5, 100.0);  // 1 G$ each on the cheap resource
    build_broker_scenario(s, Experiment::with_absolutes(jobs_of(lengths), 50.0, 2.0));
    s.engine.run();
    REQUIRE(s.user->result().has_value());
    const Experiment& result = *s.user->result();
    CHECK(result.completed_count() == 2);
    CHECK(result.expenses <= 2.0 + 1e-9);
    CHECK(result.status == broker::ExperimentStatus::ConstraintExhausted);
}

TEST_CASE("factor-based constraints derive the Eq. 1 / Eq. 2 values at runtime") {
    BrokerScenario s;
    build_broker_scenario(s, Experiment::with_factors(jobs_of({100.0, 100.0}), 0.5, 0.5), 1.0,
                          5.0);
    s.engine.run();
    REQUIRE(s.user->result().has_value());
    const Experiment& result = *s.user->result();
    // Both resources are 100 MIPS, 1 PE: T_MIN = 1 (parallel), T_MAX = 2.
    CHECK(result.deadline == doctest::Approx(1.5));
    CHECK(result.budget > 0.0);
    CHECK(result.use_factors);
}
