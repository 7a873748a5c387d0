#include "targetmo/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "targetmo/pareto.hpp"
#include "targetmo/random.hpp"

namespace targetmo {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double norm_cdf(double u) { return 0.5 * std::erfc(-u * kInvSqrt2); }
double norm_pdf(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

}  // namespace

double ei(double mean, double sd, double threshold) {
    if (sd < 0) throw DataError("ei: sd must be >= 0");
    const double delta = threshold - mean;
    if (sd == 0.0) return std::max(delta, 0.0);
    const double u = delta / sd;
    return std::max(0.0, delta * norm_cdf(u) + sd * norm_pdf(u));
}

double mei(const MultiSurrogate& models, const Design& x, const ReferencePoint& r) {
    if (r.values.size() != models.n_objectives())
        throw DimensionError("mei: reference dimension mismatch");
    double prod = 1.0;
    for (int j = 0; j < models.n_objectives(); ++j) {
        const auto p = models.models[j].predict(x);
        prod *= ei(p.mean, p.sd, r.values[j]);
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

Eigen::VectorXd mei_gradient(const MultiSurrogate& models, const Design& x,
                             const ReferencePoint& r) {
    const int m = models.n_objectives();
    const int d = models.input_dim();
    if (r.values.size() != m) throw DimensionError("mei_gradient: reference dimension mismatch");

    std::vector<double> values(m);
    std::vector<Eigen::VectorXd> grads(m);
    for (int j = 0; j < m; ++j) {
        const auto p = models.models[j].predict_with_gradient(x);
        const double delta = r.values[j] - p.mean;
        double cdf, pdf;
        if (p.sd > 0) {
            const double u = delta / p.sd;
            cdf = norm_cdf(u);
            pdf = norm_pdf(u);
            values[j] = std::max(0.0, delta * cdf + p.sd * pdf);
        } else {
            cdf = delta > 0 ? 1.0 : (delta < 0 ? 0.0 : 0.5);
            pdf = 0.0;
            values[j] = std::max(delta, 0.0);
        }
        // dEI = -Phi(u) dmean + phi(u) dsd
        grads[j] = -cdf * p.dmean + pdf * p.dsd;
    }
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < m; ++j) {
        double rest = 1.0;
        for (int k = 0; k < m; ++k)
            if (k != j) rest *= values[k];
        g += rest * grads[j];
    }
    return g;
}

namespace {

// E[(t - Y)+] for Y ~ N(mean, sd^2), with Psi(-inf) = 0: the antiderivative
// of P(Y <= z) used by the cell decomposition.
double gaussian_tail_mass(double mean, double sd, double t) {
    if (std::isinf(t) && t < 0) return 0.0;
    return ei(mean, sd, t);
}

double ehi_exact_2d(double m1, double s1, double m2, double s2, const ObjectiveVector& r,
                    const std::vector<ObjectiveVector>& front) {
    // points strictly inside the improvement box shape the staircase
    std::vector<ObjectiveVector> pts;
    for (const auto& p : front)
        if (p[0] < r[0] && p[1] < r[1]) pts.push_back(p);
    if (pts.empty()) return gaussian_tail_mass(m1, s1, r[0]) * gaussian_tail_mass(m2, s2, r[1]);

    std::sort(pts.begin(), pts.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
        return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    std::vector<ObjectiveVector> stair;
    for (const auto& p : pts)
        if (stair.empty() || p[1] < stair.back()[1]) stair.push_back(p);

    // EHI = integral over { z <= R, z not dominated } of P(Y1<=z1) P(Y2<=z2):
    // column i spans z1 in (c_i, c_{i+1}] with z2 < u_i, where u_0 = R2 and
    // u_i = f2 of the i-th staircase point.
    const double inf = std::numeric_limits<double>::infinity();
    double total = 0.0;
    double c_lo = -inf;
    double u = r[1];
    for (std::size_t i = 0; i <= stair.size(); ++i) {
        const double c_hi = i < stair.size() ? stair[i][0] : r[0];
        total += (gaussian_tail_mass(m1, s1, c_hi) - gaussian_tail_mass(m1, s1, c_lo)) *
                 gaussian_tail_mass(m2, s2, u);
        if (i < stair.size()) u = stair[i][1];
        c_lo = c_hi;
    }
    return std::max(0.0, total);
}

double ehi_mc(const std::vector<SurrogateModel::Prediction>& pred, const ObjectiveVector& r,
              const std::vector<ObjectiveVector>& front, int n_mc, std::uint64_t seed) {
    const int m = static_cast<int>(r.size());
    // integration box [L, R] covering essentially all of the integrand mass
    ObjectiveVector lo(m);
    for (int j = 0; j < m; ++j) {
        lo[j] = pred[j].mean - 8.5 * std::max(pred[j].sd, 1e-15);
        for (const auto& p : front) lo[j] = std::min(lo[j], p[j]);
        if (lo[j] >= r[j]) return 0.0;
    }
    double vol = 1.0;
    for (int j = 0; j < m; ++j) vol *= r[j] - lo[j];

    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ObjectiveVector z(m);
    double acc = 0.0;
    for (int s = 0; s < n_mc; ++s) {
        for (int j = 0; j < m; ++j) z[j] = lo[j] + unif(rng) * (r[j] - lo[j]);
        bool dominated = false;
        for (const auto& p : front) {
            bool dom = true;
            for (int j = 0; j < m && dom; ++j)
                if (p[j] > z[j]) dom = false;
            if (dom) { dominated = true; break; }
        }
        if (dominated) continue;
        double prob = 1.0;
        for (int j = 0; j < m; ++j) {
            prob *= pred[j].sd > 0 ? norm_cdf((z[j] - pred[j].mean) / pred[j].sd)
                                   : (pred[j].mean <= z[j] ? 1.0 : 0.0);
        }
        acc += prob;
    }
    return vol * acc / n_mc;
}

}  // namespace

double ehi(const MultiSurrogate& models, const Design& x, const ReferencePoint& r,
           const EmpiricalFront& front, int n_mc, std::uint64_t seed) {
    const int m = models.n_objectives();
    if (r.values.size() != m) throw DimensionError("ehi: reference dimension mismatch");
    const auto pred = models.predict(x);
    if (m == 2)
        return ehi_exact_2d(pred[0].mean, pred[0].sd, pred[1].mean, pred[1].sd, r.values,
                            front.points);
    return ehi_mc(pred, r.values, front.points, n_mc, seed);
}

BatchCriterionSampler::BatchCriterionSampler(const MultiSurrogate& models, ReferencePoint r,
                                             int q, int n_mc, std::uint64_t seed)
    : models_(&models), r_(std::move(r)), q_(q), n_mc_(n_mc) {
    if (q_ < 1) throw ConfigError("batch criterion: q must be >= 1");
    if (n_mc_ < 1) throw ConfigError("batch criterion: n_mc must be >= 1");
    if (r_.values.size() != models.n_objectives())
        throw DimensionError("batch criterion: reference dimension mismatch");
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    z_.resize(models.n_objectives());
    for (auto& zj : z_) zj.resize(n_mc_, q_);
    for (int k = 0; k < n_mc_; ++k)
        for (std::size_t j = 0; j < z_.size(); ++j)
            for (int i = 0; i < q_; ++i) z_[j](k, i) = normal(rng);
}

BatchCriterionSampler::Transformed BatchCriterionSampler::transform(const Batch& batch) const {
    if (batch.q() != q_) throw DimensionError("batch criterion: batch size mismatch");
    // canonical point order (lexicographic by coordinates) makes the draw
    // assignment independent of how the batch is ordered
    std::vector<int> order(q_);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Design& xa = batch.designs[a];
        const Design& xb = batch.designs[b];
        return std::lexicographical_compare(xa.data(), xa.data() + xa.size(), xb.data(),
                                            xb.data() + xb.size());
    });
    std::vector<Design> sorted(q_);
    for (int i = 0; i < q_; ++i) sorted[i] = batch.designs[order[i]];

    Transformed out;
    out.draws.resize(models_->n_objectives());
    for (int j = 0; j < models_->n_objectives(); ++j) {
        Eigen::VectorXd mean;
        Eigen::MatrixXd cov;
        models_->models[j].posterior_moments(sorted, mean, cov);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        if (es.info() != Eigen::Success)
            throw ConditioningError("batch criterion: covariance factorization failed");
        Eigen::VectorXd lam = es.eigenvalues();
        const double cutoff = std::max(0.0, lam.maxCoeff()) * 1e-14;
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            lam[i] = lam[i] > cutoff ? std::sqrt(lam[i]) : 0.0;
        const Eigen::MatrixXd A = es.eigenvectors() * lam.asDiagonal();
        // draws (n_mc x q), canonical order; row k = mean + A z_k
        out.draws[j] = (z_[j] * A.transpose()).rowwise() + mean.transpose();
    }
    return out;
}

double BatchCriterionSampler::qmei(const Batch& batch) const {
    const Transformed t = transform(batch);
    const int m = models_->n_objectives();
    double acc = 0.0;
    for (int k = 0; k < n_mc_; ++k) {
        double best = 0.0;
        for (int i = 0; i < q_; ++i) {
            double prod = 1.0;
            for (int j = 0; j < m; ++j) {
                const double imp = r_.values[j] - t.draws[j](k, i);
                if (imp <= 0.0) { prod = 0.0; break; }
                prod *= imp;
            }
            best = std::max(best, prod);
        }
        acc += best;
    }
    return acc / n_mc_;
}

double BatchCriterionSampler::mqei(const Batch& batch) const {
    const Transformed t = transform(batch);
    const int m = models_->n_objectives();
    double prod = 1.0;
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n_mc_; ++k) {
            double best = 0.0;
            for (int i = 0; i < q_; ++i)
                best = std::max(best, r_.values[j] - t.draws[j](k, i));
            acc += std::max(best, 0.0);
        }
        prod *= acc / n_mc_;
    }
    return prod;
}

double qmei_mc(const MultiSurrogate& models, const Batch& batch, const ReferencePoint& r,
               int n_mc, std::uint64_t seed) {
    return BatchCriterionSampler(models, r, batch.q(), n_mc, seed).qmei(batch);
}

double mqei_mc(const MultiSurrogate& models, const Batch& batch, const ReferencePoint& r,
               int n_mc, std::uint64_t seed) {
    return BatchCriterionSampler(models, r, batch.q(), n_mc, seed).mqei(batch);
}

}  // namespace targetmo
