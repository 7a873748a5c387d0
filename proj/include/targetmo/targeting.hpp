#pragma once

#include <cstdint>
#include <vector>

#include "targetmo/criteria.hpp"
#include "targetmo/geometry.hpp"
#include "targetmo/gp.hpp"
#include "targetmo/types.hpp"

namespace targetmo {

/// Pareto fronts of joint GP draws over a shared design discretization.
struct SimulatedFronts {
    std::vector<EmpiricalFront> fronts;
    std::vector<Design> sim_points;
};

struct FrontEstimates {
    ObjectiveVector ideal_hat;
    ObjectiveVector nadir_hat;
    ObjectiveVector center_hat;
};

/// n_sims possible Pareto fronts, each the non-dominated set of one joint
/// draw over a space-filling discretization (n_points LHS samples augmented
/// with all evaluated designs).
SimulatedFronts simulate_fronts(const MultiSurrogate& models, const BoxDomain& domain,
                                int n_sims, int n_points, std::uint64_t seed);

/// Componentwise medians of the per-front Ideal and Nadir samples.
std::pair<ObjectiveVector, ObjectiveVector> estimate_ideal_nadir(const SimulatedFronts& fronts);

/// Estimated Pareto front center: the crossing of the Ideal-Nadir segment
/// with the front's attainment staircase boundary when it exists, else the
/// clamped projection of the closest front point onto the segment.
ObjectiveVector estimate_center(const EmpiricalFront& front, const ObjectiveVector& ideal,
                                const ObjectiveVector& nadir);

/// Reference-point adaptation R -> R_hat on the broken line Ideal-R-Nadir.
/// The returned point is never strictly dominated by the front (repaired by
/// a binary search toward Ideal when needed).
ReferencePoint adapt_reference(const ReferencePoint& r, const EmpiricalFront& front,
                               const ObjectiveVector& ideal, const ObjectiveVector& nadir);

}  // namespace targetmo
