#include "targetmo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace targetmo {

ObjectiveVector BrokenLine::point_at(double t) const {
    t = std::min(std::max(t, 0.0), total_length());
    for (std::size_t s = 0; s + 1 < vertices.size(); ++s) {
        if (t <= cum_length[s + 1] || s + 2 == vertices.size()) {
            const double seg_len = cum_length[s + 1] - cum_length[s];
            const double u = seg_len > 0 ? (t - cum_length[s]) / seg_len : 0.0;
            return vertices[s] + u * (vertices[s + 1] - vertices[s]);
        }
    }
    return vertices.back();
}

BrokenLine make_broken_line(const std::vector<ObjectiveVector>& vertices) {
    BrokenLine line;
    for (const auto& v : vertices) {
        if (!line.vertices.empty() && (line.vertices.back() - v).norm() == 0.0) continue;
        if (!line.vertices.empty() && line.vertices.back().size() != v.size())
            throw DimensionError("make_broken_line: vertex dimension mismatch");
        line.vertices.push_back(v);
    }
    if (line.vertices.size() < 2)
        throw GeometryError("make_broken_line: needs at least 2 distinct vertices");
    line.cum_length.resize(line.vertices.size());
    line.cum_length[0] = 0.0;
    for (std::size_t s = 1; s < line.vertices.size(); ++s)
        line.cum_length[s] =
            line.cum_length[s - 1] + (line.vertices[s] - line.vertices[s - 1]).norm();
    return line;
}

LinePoint closest_point_on_broken_line(const BrokenLine& line,
                                       const std::vector<ObjectiveVector>& targets) {
    if (targets.empty())
        throw EmptySetError("closest_point_on_broken_line: no targets");
    LinePoint best;
    best.distance = std::numeric_limits<double>::infinity();
    best.arc_length = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s + 1 < line.vertices.size(); ++s) {
        const ObjectiveVector& a = line.vertices[s];
        const Eigen::VectorXd dir = line.vertices[s + 1] - a;
        const double seg_len2 = dir.squaredNorm();
        for (const auto& tgt : targets) {
            if (tgt.size() != a.size())
                throw DimensionError("closest_point_on_broken_line: target dimension mismatch");
            double u = seg_len2 > 0 ? (tgt - a).dot(dir) / seg_len2 : 0.0;
            u = std::min(std::max(u, 0.0), 1.0);
            const ObjectiveVector p = a + u * dir;
            const double d = (p - tgt).norm();
            const double arc = line.cum_length[s] + u * std::sqrt(seg_len2);
            if (d < best.distance || (d == best.distance && arc < best.arc_length)) {
                best.point = p;
                best.arc_length = arc;
                best.distance = d;
            }
        }
    }
    return best;
}

}  // namespace targetmo
