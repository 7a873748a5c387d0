#pragma once

#include <cstdint>
#include <vector>

#include "targetmo/types.hpp"

namespace targetmo {

/// Strict Pareto dominance: a_j <= b_j for all j with at least one strict
/// inequality. Irreflexive and transitive.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Weak dominance: a_j <= b_j for all j.
bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// True if some point of `front` strictly dominates y.
bool front_dominates(const EmpiricalFront& front, const ObjectiveVector& y);

/// True if some point of `front` weakly dominates y (y is attained).
bool front_weakly_dominates(const EmpiricalFront& front, const ObjectiveVector& y);

/// Non-dominated subset of `points`, in input order. Exact duplicates keep
/// the first occurrence. `designs` is either empty or parallel to `points`.
EmpiricalFront extract_front(const std::vector<ObjectiveVector>& points,
                             const std::vector<Design>& designs = {});

/// Indices into `points` of the non-dominated subset (same tie rule as
/// extract_front). For m=2 runs an O(n log n) sweep, otherwise O(n^2).
std::vector<std::size_t> non_dominated_indices(const std::vector<ObjectiveVector>& points);

/// Hypervolume dominated by `front` up to `ref`: volume of the union of the
/// boxes [y, ref] over front points y. Points that do not strictly dominate
/// ref contribute nothing. Exact sweep for m=2; Monte-Carlo (mc_samples
/// uniform draws in [front ideal, ref]) for m>2.
double hypervolume(const EmpiricalFront& front, const ObjectiveVector& ref,
                   std::int64_t mc_samples = 1000000, std::uint64_t mc_seed = 0);

/// Componentwise min (Ideal) and max (Nadir) over the front points.
std::pair<ObjectiveVector, ObjectiveVector> ideal_nadir(const EmpiricalFront& front);

}  // namespace targetmo
