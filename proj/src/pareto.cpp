#include "targetmo/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "targetmo/random.hpp"

namespace targetmo {

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw DimensionError("dominates: objective dimension mismatch");
    for (Eigen::Index j = 0; j < a.size(); ++j)
        if (a[j] > b[j]) return false;
    return true;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw DimensionError("dominates: objective dimension mismatch");
    bool strict = false;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strict = true;
    }
    return strict;
}

bool front_dominates(const EmpiricalFront& front, const ObjectiveVector& y) {
    for (const auto& p : front.points)
        if (dominates(p, y)) return true;
    return false;
}

bool front_weakly_dominates(const EmpiricalFront& front, const ObjectiveVector& y) {
    for (const auto& p : front.points)
        if (weakly_dominates(p, y)) return true;
    return false;
}

namespace {

// O(n log n) sweep for m=2: sort by (f1, f2, index), keep strictly
// decreasing f2. Duplicate vectors keep the smallest original index.
std::vector<std::size_t> non_dominated_indices_2d(const std::vector<ObjectiveVector>& pts) {
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
        if (pts[a][1] != pts[b][1]) return pts[a][1] < pts[b][1];
        return a < b;
    });
    std::vector<std::size_t> keep;
    double best_f2 = std::numeric_limits<double>::infinity();
    double prev_f1 = -std::numeric_limits<double>::infinity();
    double prev_f2 = std::numeric_limits<double>::infinity();
    for (std::size_t idx : order) {
        const double f1 = pts[idx][0], f2 = pts[idx][1];
        if (f1 == prev_f1 && f2 == prev_f2) continue;  // duplicate, first kept
        if (f2 < best_f2) {
            keep.push_back(idx);
            best_f2 = f2;
            prev_f1 = f1;
            prev_f2 = f2;
        }
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

}  // namespace

std::vector<std::size_t> non_dominated_indices(const std::vector<ObjectiveVector>& points) {
    if (points.empty())
        throw EmptySetError("extract_front: empty input");
    const Eigen::Index m = points.front().size();
    for (const auto& p : points)
        if (p.size() != m) throw DimensionError("extract_front: inconsistent objective dimensions");

    if (m == 2 && points.size() > 64) return non_dominated_indices_2d(points);

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool drop = false;
        for (std::size_t k = 0; k < points.size() && !drop; ++k) {
            if (k == i) continue;
            if (dominates(points[k], points[i])) drop = true;
            // exact duplicate: keep the first-evaluated one
            if (k < i && points[k] == points[i]) drop = true;
        }
        if (!drop) keep.push_back(i);
    }
    return keep;
}

EmpiricalFront extract_front(const std::vector<ObjectiveVector>& points,
                             const std::vector<Design>& designs) {
    if (!designs.empty() && designs.size() != points.size())
        throw DimensionError("extract_front: designs not parallel to points");
    EmpiricalFront front;
    for (std::size_t i : non_dominated_indices(points)) {
        front.points.push_back(points[i]);
        if (!designs.empty()) front.source_designs.push_back(designs[i]);
    }
    return front;
}

namespace {

double hypervolume_2d(const std::vector<ObjectiveVector>& pts, const ObjectiveVector& ref) {
    // contributing points strictly dominate ref in both coordinates
    std::vector<ObjectiveVector> box;
    for (const auto& p : pts)
        if (p[0] < ref[0] && p[1] < ref[1]) box.push_back(p);
    if (box.empty()) return 0.0;
    std::sort(box.begin(), box.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    // staircase sweep: over [y1_i, y1_next) the union height is ref2 - min f2 so far
    double hv = 0.0;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (box[i][1] >= best_f2) continue;
        best_f2 = box[i][1];
        double next_x = ref[0];
        for (std::size_t k = i + 1; k < box.size(); ++k) {
            if (box[k][1] < best_f2) {
                next_x = box[k][0];
                break;
            }
        }
        hv += (next_x - box[i][0]) * (ref[1] - best_f2);
    }
    return hv;
}

double hypervolume_mc(const std::vector<ObjectiveVector>& pts, const ObjectiveVector& ref,
                      std::int64_t n, std::uint64_t seed) {
    const Eigen::Index m = ref.size();
    std::vector<ObjectiveVector> box;
    for (const auto& p : pts) {
        bool in = true;
        for (Eigen::Index j = 0; j < m; ++j)
            if (!(p[j] < ref[j])) { in = false; break; }
        if (in) box.push_back(p);
    }
    if (box.empty()) return 0.0;
    ObjectiveVector lo = box.front();
    for (const auto& p : box) lo = lo.cwiseMin(p);
    double vol = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) vol *= ref[j] - lo[j];

    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::int64_t hits = 0;
    ObjectiveVector z(m);
    for (std::int64_t s = 0; s < n; ++s) {
        for (Eigen::Index j = 0; j < m; ++j) z[j] = lo[j] + unif(rng) * (ref[j] - lo[j]);
        for (const auto& p : box) {
            bool dom = true;
            for (Eigen::Index j = 0; j < m; ++j)
                if (p[j] > z[j]) { dom = false; break; }
            if (dom) { ++hits; break; }
        }
    }
    return vol * static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

double hypervolume(const EmpiricalFront& front, const ObjectiveVector& ref,
                   std::int64_t mc_samples, std::uint64_t mc_seed) {
    if (ref.size() < 2) throw DimensionError("hypervolume: needs m >= 2");
    if (!ref.allFinite()) throw DataError("hypervolume: reference point must be finite");
    for (const auto& p : front.points)
        if (p.size() != ref.size()) throw DimensionError("hypervolume: dimension mismatch");
    if (front.empty()) return 0.0;
    if (ref.size() == 2) return hypervolume_2d(front.points, ref);
    return hypervolume_mc(front.points, ref, mc_samples, mc_seed);
}

std::pair<ObjectiveVector, ObjectiveVector> ideal_nadir(const EmpiricalFront& front) {
    if (front.empty()) throw EmptySetError("ideal_nadir: empty front");
    ObjectiveVector ideal = front.points.front();
    ObjectiveVector nadir = front.points.front();
    for (const auto& p : front.points) {
        ideal = ideal.cwiseMin(p);
        nadir = nadir.cwiseMax(p);
    }
    return {ideal, nadir};
}

}  // namespace targetmo
