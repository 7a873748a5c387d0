#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace targetmo {

/// A point in the box input domain X ⊂ R^d.
using Design = Eigen::VectorXd;

/// A point y ∈ R^m in objective space (all objectives minimized).
using ObjectiveVector = Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

class EmptySetError : public std::invalid_argument {
public:
    explicit EmptySetError(const std::string& what) : std::invalid_argument(what) {}
};

class DataError : public std::invalid_argument {
public:
    explicit DataError(const std::string& what) : std::invalid_argument(what) {}
};

class GeometryError : public std::invalid_argument {
public:
    explicit GeometryError(const std::string& what) : std::invalid_argument(what) {}
};

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class CapabilityError : public std::invalid_argument {
public:
    explicit CapabilityError(const std::string& what) : std::invalid_argument(what) {}
};

/// Kernel/posterior matrix could not be factorized even after jitter escalation.
class ConditioningError : public std::runtime_error {
public:
    explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

/// Axis-aligned box domain with lower[i] < upper[i].
struct BoxDomain {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    BoxDomain() = default;
    BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd up) : lower(std::move(lo)), upper(std::move(up)) {
        if (lower.size() != upper.size())
            throw DimensionError("BoxDomain: lower/upper dimension mismatch");
        for (Eigen::Index i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw GeometryError("BoxDomain: lower[i] must be < upper[i]");
    }

    /// Unit cube [0,1]^d.
    static BoxDomain unit(int d) {
        return BoxDomain(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d));
    }

    int dim() const { return static_cast<int>(lower.size()); }
    Eigen::VectorXd width() const { return upper - lower; }

    bool contains(const Design& x, double tol = 0.0) const {
        if (x.size() != lower.size()) return false;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
        return true;
    }

    Design clamp(Design x) const {
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x[i] = std::min(std::max(x[i], lower[i]), upper[i]);
        return x;
    }
};

/// Non-dominated subset of evaluated objective vectors with the designs that
/// produced them. `source_designs` is either empty or parallel to `points`.
struct EmpiricalFront {
    std::vector<ObjectiveVector> points;
    std::vector<Design> source_designs;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    int objective_dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

}  // namespace targetmo
