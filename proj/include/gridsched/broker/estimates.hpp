#pragma once

#include <vector>

#include "gridsched/app/gridlet.hpp"
#include "gridsched/res/characteristics.hpp"

namespace gridsched::broker {

// Relative processing cost of a resource: G$ per MI.
double cost_per_mi(const res::ResourceCharacteristics& r);

// Best-case makespan: greedy earliest-finish list scheduling of the batch
// over all PEs of all resources, PEs ordered fastest first.
sim::SimTime t_min(const app::GridletBatch& batch,
                   const std::vector<res::ResourceCharacteristics>& resources);

// Worst case: everything serial on one PE of the slowest resource.
sim::SimTime t_max(const app::GridletBatch& batch,
                   const std::vector<res::ResourceCharacteristics>& resources);

// Deadline = T_MIN + d_factor * (T_MAX - T_MIN).
sim::SimTime compute_deadline(const app::GridletBatch& batch,
                              const std::vector<res::ResourceCharacteristics>& resources,
                              double d_factor);

// Cheapest (cheapest-per-MI resources first) and costliest total processing
// cost of fitting the batch into per-resource capacity n_pes * mips * deadline.
double c_min(const app::GridletBatch& batch,
             const std::vector<res::ResourceCharacteristics>& resources, sim::SimTime deadline);
double c_max(const app::GridletBatch& batch,
             const std::vector<res::ResourceCharacteristics>& resources, sim::SimTime deadline);

// Budget = C_MIN + b_factor * (C_MAX - C_MIN).
double compute_budget(const app::GridletBatch& batch,
                      const std::vector<res::ResourceCharacteristics>& resources, double b_factor,
                      sim::SimTime deadline);

}  // namespace gridsched::broker
