#pragma once

#include <vector>

#include "targetmo/types.hpp"

namespace targetmo {

/// Polyline in objective space (2 or 3 vertices, consecutive vertices
/// distinct), parameterized by arc length from the first vertex.
struct BrokenLine {
    std::vector<ObjectiveVector> vertices;
    std::vector<double> cum_length;  // cum_length[0] = 0

    double total_length() const { return cum_length.back(); }

    /// Point at arc-length parameter t (clamped to [0, total_length]).
    ObjectiveVector point_at(double t) const;
};

/// Build a broken line through the given vertices, collapsing consecutive
/// duplicates. Throws GeometryError if fewer than 2 distinct vertices remain.
BrokenLine make_broken_line(const std::vector<ObjectiveVector>& vertices);

/// The line point minimizing the Euclidean distance to the nearest target,
/// together with its arc-length parameter and that distance. Projections are
/// computed per segment analytically; ties go to the smaller arc length.
struct LinePoint {
    ObjectiveVector point;
    double arc_length;
    double distance;
};
LinePoint closest_point_on_broken_line(const BrokenLine& line,
                                       const std::vector<ObjectiveVector>& targets);

}  // namespace targetmo
