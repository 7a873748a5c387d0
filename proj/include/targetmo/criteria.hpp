#pragma once

#include <cstdint>
#include <vector>

#include "targetmo/gp.hpp"
#include "targetmo/types.hpp"

namespace targetmo {

/// Aspiration/reference point in objective space.
struct ReferencePoint {
    ObjectiveVector values;
};

/// An ordered batch of q >= 1 candidate designs.
struct Batch {
    std::vector<Design> designs;

    int q() const { return static_cast<int>(designs.size()); }
};

/// Expected improvement below `threshold` of a Normal(mean, sd^2) variable:
/// E[(threshold - Y)+] = (threshold-mean) Phi(u) + sd phi(u), u = (threshold-mean)/sd.
/// Equals (threshold-mean)+ when sd == 0.
double ei(double mean, double sd, double threshold);

/// Product over objectives of the per-objective EIs below R_j.
double mei(const MultiSurrogate& models, const Design& x, const ReferencePoint& r);

/// Gradient of mei w.r.t. x (product rule through dEI/dmean and dEI/dsd).
Eigen::VectorXd mei_gradient(const MultiSurrogate& models, const Design& x,
                             const ReferencePoint& r);

/// Expected hypervolume improvement of the front up to r when adding Y(x).
/// Exact for m=2 via a cell decomposition of the non-dominated region below r
/// (per-cell closed-form Gaussian expectations); Monte-Carlo integration of
/// P(Y <= z) over that region otherwise.
double ehi(const MultiSurrogate& models, const Design& x, const ReferencePoint& r,
           const EmpiricalFront& front, int n_mc = 100000, std::uint64_t seed = 0);

/// Monte-Carlo q-mEI: E[max_i prod_j (R_j - Y_j(x_i))+] over joint posterior
/// draws at the batch points. Deterministic for a fixed seed; symmetric under
/// permutations of the batch (draws are assigned in a canonical point order).
double qmei_mc(const MultiSurrogate& models, const Batch& batch, const ReferencePoint& r,
               int n_mc = 10000, std::uint64_t seed = 0);

/// Monte-Carlo mq-EI: prod_j E[max_i (R_j - Y_j(x_i))+], the per-objective
/// batch maxima taken independently.
double mqei_mc(const MultiSurrogate& models, const Batch& batch, const ReferencePoint& r,
               int n_mc = 10000, std::uint64_t seed = 0);

/// Reusable batch-criterion evaluator holding one frozen set of standard
/// normal draws (common random numbers): the criterion is a deterministic,
/// batch-continuous function during an inner optimization.
class BatchCriterionSampler {
public:
    BatchCriterionSampler(const MultiSurrogate& models, ReferencePoint r, int q, int n_mc,
                          std::uint64_t seed);

    double qmei(const Batch& batch) const;
    double mqei(const Batch& batch) const;

private:
    struct Transformed {
        std::vector<Eigen::MatrixXd> draws;  // per objective: n_mc x q, canonical order
    };
    Transformed transform(const Batch& batch) const;

    const MultiSurrogate* models_;
    ReferencePoint r_;
    int q_;
    int n_mc_;
    std::vector<Eigen::MatrixXd> z_;  // per objective: n_mc x q standard normals
};

}  // namespace targetmo
