#include "targetmo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "targetmo/random.hpp"

namespace targetmo {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964091736687747;
constexpr double kVarianceFloor = 1e-12;

Eigen::MatrixXd designs_to_matrix(const std::vector<Design>& xs) {
    if (xs.empty()) throw EmptySetError("gp: no training inputs");
    const Eigen::Index d = xs.front().size();
    Eigen::MatrixXd X(static_cast<Eigen::Index>(xs.size()), d);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != d) throw DimensionError("gp: inconsistent input dimensions");
        X.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
    }
    return X;
}

// Unit-variance correlation matrix C(X, X) for Matérn-5/2 with lengthscales ls.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& X, const Eigen::VectorXd& ls) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd C(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        C(i, i) = 1.0;
        for (Eigen::Index k = 0; k < i; ++k) {
            const double r = ((X.row(i) - X.row(k)).transpose().array() / ls.array())
                                 .matrix()
                                 .norm();
            C(i, k) = C(k, i) = matern52(r);
        }
    }
    return C;
}

// Cross-correlation c(x, X) as a column vector.
Eigen::VectorXd correlation_vector(const Eigen::MatrixXd& X, const Eigen::VectorXd& ls,
                                   const Design& x) {
    const Eigen::Index n = X.rows();
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r =
            ((x.transpose() - X.row(i)).transpose().array() / ls.array()).matrix().norm();
        c[i] = matern52(r);
    }
    return c;
}

struct ProfiledLikelihood {
    double log_lik = -std::numeric_limits<double>::infinity();
    double mean = 0.0;
    double variance = 0.0;  // profiled signal variance
    double rel_jitter = 0.0;
    bool ok = false;
    Eigen::LLT<Eigen::MatrixXd> llt;
};

// Cholesky of C + eta*I with x10 escalation of eta up to max_eta.
bool chol_with_escalation(const Eigen::MatrixXd& C, double eta0, double max_eta,
                          Eigen::LLT<Eigen::MatrixXd>& llt, double& eta_used) {
    double eta = eta0;
    while (true) {
        Eigen::MatrixXd Ct = C;
        Ct.diagonal().array() += eta;
        llt.compute(Ct);
        if (llt.info() == Eigen::Success) {
            // LLT can succeed on near-singular matrices; verify diagonal
            if (llt.matrixLLT().diagonal().minCoeff() > 0) {
                eta_used = eta;
                return true;
            }
        }
        if (eta == 0.0)
            eta = std::max(eta0, 1e-10);
        else
            eta *= 10.0;
        if (eta > max_eta) return false;
    }
}

// Concentrated Gaussian log-likelihood: mean and signal variance profiled out.
ProfiledLikelihood profiled_likelihood(const Eigen::MatrixXd& C, const Eigen::VectorXd& y,
                                       double eta0, double max_eta) {
    ProfiledLikelihood out;
    const Eigen::Index n = y.size();
    if (!chol_with_escalation(C, eta0, max_eta, out.llt, out.rel_jitter)) return out;

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd Ci1 = out.llt.solve(ones);
    const Eigen::VectorXd Ciy = out.llt.solve(y);
    const double denom = ones.dot(Ci1);
    if (!(denom > 0)) return out;
    out.mean = ones.dot(Ciy) / denom;
    const Eigen::VectorXd r = y - out.mean * ones;
    const double quad = r.dot(out.llt.solve(r));
    out.variance = std::max(quad / static_cast<double>(n), kVarianceFloor);
    const double log_det = 2.0 * out.llt.matrixLLT().diagonal().array().log().sum();
    out.log_lik = -0.5 * static_cast<double>(n) * std::log(out.variance) - 0.5 * log_det -
                  0.5 * static_cast<double>(n) * (1.0 + std::log(2.0 * M_PI));
    out.ok = std::isfinite(out.log_lik);
    return out;
}

// d C / d log(ls_i), elementwise: (5/3) (1 + sqrt5 r) exp(-sqrt5 r) * d_i^2 / ls_i^2.
Eigen::MatrixXd correlation_grad_log_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& ls,
                                        Eigen::Index dim) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < i; ++k) {
            const double r = ((X.row(i) - X.row(k)).transpose().array() / ls.array())
                                 .matrix()
                                 .norm();
            const double di = (X(i, dim) - X(k, dim)) / ls[dim];
            const double g =
                (5.0 / 3.0) * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r) * di * di;
            G(i, k) = G(k, i) = g;
        }
    }
    return G;
}

// Gradient of the concentrated log-likelihood w.r.t. log-lengthscales.
Eigen::VectorXd concentrated_ll_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& ls,
                                         const Eigen::VectorXd& y,
                                         const ProfiledLikelihood& pl) {
    const Eigen::Index n = y.size();
    const Eigen::Index d = ls.size();
    const Eigen::VectorXd r = y - pl.mean * Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd beta = pl.llt.solve(r);
    const double quad = r.dot(beta);
    const Eigen::MatrixXd Cinv = pl.llt.solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd grad(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const Eigen::MatrixXd dC = correlation_grad_log_ls(X, ls, j);
        const double quad_term = beta.dot(dC * beta);
        const double trace_term = (Cinv.array() * dC.array()).sum();
        grad[j] = 0.5 * static_cast<double>(n) * quad_term / quad - 0.5 * trace_term;
    }
    return grad;
}

}  // namespace

double matern52(double r) {
    const double a = kSqrt5 * r;
    return (1.0 + a + a * a / 3.0) * std::exp(-a);
}

SurrogateModel SurrogateModel::fit(const std::vector<Design>& xs, const std::vector<double>& ys,
                                   const FitConfig& config) {
    if (xs.size() != ys.size()) throw DimensionError("fit: xs/ys size mismatch");
    if (xs.size() < 2) throw DataError("fit: needs at least 2 training points");
    SurrogateModel model;
    model.X_ = designs_to_matrix(xs);
    model.y_ = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    const Eigen::Index n = model.X_.rows();
    const Eigen::Index d = model.X_.cols();

    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < i; ++k)
            if ((model.X_.row(i) - model.X_.row(k)).norm() == 0.0 &&
                model.y_[i] != model.y_[k])
                throw DataError("fit: duplicate inputs with conflicting outputs");

    // lengthscale search box, per dimension, from the domain (or data) width
    Eigen::VectorXd width(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        double w;
        if (config.domain)
            w = config.domain->upper[j] - config.domain->lower[j];
        else
            w = model.X_.col(j).maxCoeff() - model.X_.col(j).minCoeff();
        width[j] = w > 0 ? w : 1.0;
    }
    const Eigen::VectorXd lo = (config.ls_lower_factor * width.array()).log();
    const Eigen::VectorXd hi = (config.ls_upper_factor * width.array()).log();

    // multistart: log-uniform stratified draws over the lengthscale box
    Rng rng = make_rng(mix_seed(config.seed, 0x6C5ULL));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Eigen::VectorXd> starts;
    starts.push_back(0.5 * (lo + hi));  // center start
    for (int s = 1; s < std::max(1, config.n_starts); ++s) {
        Eigen::VectorXd theta(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            const double strat = (s - 1 + unif(rng)) / std::max(1, config.n_starts - 1);
            theta[j] = lo[j] + strat * (hi[j] - lo[j]);
        }
        starts.push_back(theta);
    }

    double best_ll = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_theta;
    ProfiledLikelihood best_pl;
    bool any_ok = false;

    auto eval = [&](const Eigen::VectorXd& theta) {
        return profiled_likelihood(correlation_matrix(model.X_, theta.array().exp()), model.y_,
                                   config.rel_jitter, config.max_rel_jitter);
    };

    for (auto theta : starts) {
        ProfiledLikelihood pl = eval(theta);
        if (!pl.ok) continue;
        // projected gradient ascent with backtracking on the concentrated LL
        double step = 0.5;
        for (int it = 0; it < config.max_refine_iters; ++it) {
            const Eigen::VectorXd g =
                concentrated_ll_gradient(model.X_, theta.array().exp(), model.y_, pl);
            if (!g.allFinite() || g.norm() < 1e-8) break;
            bool improved = false;
            for (int bt = 0; bt < 12; ++bt) {
                Eigen::VectorXd cand = theta + step * g;
                cand = cand.cwiseMax(lo).cwiseMin(hi);
                ProfiledLikelihood cl = eval(cand);
                if (cl.ok && cl.log_lik > pl.log_lik + 1e-12) {
                    theta = cand;
                    pl = std::move(cl);
                    improved = true;
                    step *= 1.6;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        any_ok = true;
        if (pl.log_lik > best_ll ||
            (pl.log_lik == best_ll && (!best_theta.size() ||
                                       std::lexicographical_compare(theta.data(), theta.data() + d,
                                                                    best_theta.data(),
                                                                    best_theta.data() + d)))) {
            best_ll = pl.log_lik;
            best_theta = theta;
            best_pl = std::move(pl);
        }
    }
    if (!any_ok)
        throw ConditioningError("fit: kernel matrix singular after nugget escalation");

    model.params_.lengthscales = best_theta.array().exp();
    model.params_.signal_variance = best_pl.variance;
    model.params_.constant_mean = best_pl.mean;
    model.params_.nugget = best_pl.rel_jitter * best_pl.variance;
    model.log_lik_ = best_ll;
    model.finalize();
    return model;
}

SurrogateModel SurrogateModel::condition(const std::vector<Design>& xs,
                                         const std::vector<double>& ys,
                                         const KernelParams& params) {
    if (xs.size() != ys.size()) throw DimensionError("condition: xs/ys size mismatch");
    SurrogateModel model;
    model.X_ = designs_to_matrix(xs);
    model.y_ = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    model.params_ = params;
    model.finalize();
    return model;
}

void SurrogateModel::finalize() {
    const Eigen::Index n = X_.rows();
    const double sv = params_.signal_variance;
    const double eta = params_.nugget / sv;
    Eigen::MatrixXd Ct = correlation_matrix(X_, params_.lengthscales);
    Ct.diagonal().array() += eta;
    Eigen::LLT<Eigen::MatrixXd> llt(Ct);
    double eta_used = eta;
    if (llt.info() != Eigen::Success || llt.matrixLLT().diagonal().minCoeff() <= 0) {
        // escalate once more from the stored nugget
        if (!chol_with_escalation(correlation_matrix(X_, params_.lengthscales),
                                  std::max(eta, 1e-10), 1e-4, llt, eta_used))
            throw ConditioningError("gp: kernel matrix singular after nugget escalation");
        params_.nugget = eta_used * sv;
    }
    alpha_ = llt.solve(y_ - params_.constant_mean * Eigen::VectorXd::Ones(n));
    L_ = std::sqrt(sv) * Eigen::MatrixXd(llt.matrixL());
}

SurrogateModel::Prediction SurrogateModel::predict(const Design& x) const {
    if (x.size() != X_.cols()) throw DimensionError("predict: input dimension mismatch");
    const Eigen::VectorXd c = correlation_vector(X_, params_.lengthscales, x);
    const double sv = params_.signal_variance;
    // K = L L^T with L = sqrt(sv) chol(C~); var = k(x,x) - ||L^{-1} k||^2
    const Eigen::VectorXd v = L_.triangularView<Eigen::Lower>().solve((sv * c).eval());
    const double var = std::max(0.0, sv - v.squaredNorm());
    return {params_.constant_mean + c.dot(alpha_), std::sqrt(var)};
}

SurrogateModel::PredictionWithGradient SurrogateModel::predict_with_gradient(
    const Design& x) const {
    if (x.size() != X_.cols()) throw DimensionError("predict: input dimension mismatch");
    const Eigen::Index n = X_.rows();
    const Eigen::Index d = X_.cols();
    const Eigen::VectorXd& ls = params_.lengthscales;
    const double sv = params_.signal_variance;

    Eigen::VectorXd c(n);
    Eigen::MatrixXd dc(n, d);  // d c_i / d x
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd diff = x - X_.row(i).transpose();
        const double r = (diff.array() / ls.array()).matrix().norm();
        c[i] = matern52(r);
        const double f = -(5.0 / 3.0) * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r);
        dc.row(i) = (f * diff.array() / ls.array().square()).transpose();
    }
    const Eigen::VectorXd v = L_.triangularView<Eigen::Lower>().solve((sv * c).eval());
    // w = K^{-1} k = C~^{-1} c
    const Eigen::VectorXd w = L_.transpose().triangularView<Eigen::Upper>().solve(v);

    PredictionWithGradient out;
    out.mean = params_.constant_mean + c.dot(alpha_);
    const double var = std::max(0.0, sv - v.squaredNorm());
    out.sd = std::sqrt(var);
    out.dmean = dc.transpose() * alpha_;
    // dvar/dx = -2 (dk)^T K^{-1} k = -2 sv dc^T w
    const Eigen::VectorXd dvar = -2.0 * sv * (dc.transpose() * w);
    out.dsd = out.sd > 1e-154 ? Eigen::VectorXd(dvar / (2.0 * out.sd))
                              : Eigen::VectorXd(Eigen::VectorXd::Zero(d));
    return out;
}

void SurrogateModel::posterior_moments(const std::vector<Design>& points, Eigen::VectorXd& mean,
                                       Eigen::MatrixXd& cov) const {
    if (points.empty()) throw EmptySetError("posterior_moments: no points");
    const Eigen::MatrixXd P = designs_to_matrix(points);
    if (P.cols() != X_.cols()) throw DimensionError("posterior_moments: dimension mismatch");
    const Eigen::Index np = P.rows();
    const Eigen::Index n = X_.rows();
    const Eigen::VectorXd& ls = params_.lengthscales;
    const double sv = params_.signal_variance;

    Eigen::MatrixXd Cx(n, np);  // correlations between training and new points
    for (Eigen::Index p = 0; p < np; ++p)
        Cx.col(p) = correlation_vector(X_, ls, P.row(p).transpose());
    Eigen::MatrixXd Cp(np, np);
    for (Eigen::Index i = 0; i < np; ++i) {
        Cp(i, i) = 1.0;
        for (Eigen::Index k = 0; k < i; ++k) {
            const double r =
                ((P.row(i) - P.row(k)).transpose().array() / ls.array()).matrix().norm();
            Cp(i, k) = Cp(k, i) = matern52(r);
        }
    }
    mean = params_.constant_mean * Eigen::VectorXd::Ones(np) + Cx.transpose() * alpha_;
    // cov = sv Cp - Kx^T K^{-1} Kx with Kx = sv Cx
    const Eigen::MatrixXd V = L_.triangularView<Eigen::Lower>().solve((sv * Cx).eval());
    cov = sv * Cp - V.transpose() * V;
}

Eigen::MatrixXd SurrogateModel::simulate_conditional(const std::vector<Design>& points,
                                                     int n_sims, std::uint64_t seed) const {
    if (n_sims < 1) throw ConfigError("simulate_conditional: n_sims must be >= 1");
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    posterior_moments(points, mean, cov);
    const Eigen::Index np = mean.size();
    const double scale = std::max(cov.diagonal().maxCoeff(), 0.0);

    // factor the (possibly singular) posterior covariance
    Eigen::MatrixXd A;
    bool have_factor = false;
    if (np > 64) {
        // fast path for the large simulation grids: Cholesky with escalation
        double delta = scale > 0 ? 1e-12 * scale : 0.0;
        for (int attempt = 0; attempt < 6 && !have_factor; ++attempt) {
            Eigen::MatrixXd S = cov;
            S.diagonal().array() += delta;
            Eigen::LLT<Eigen::MatrixXd> llt(S);
            if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 0) {
                A = llt.matrixL();
                have_factor = true;
            }
            delta = delta > 0 ? delta * 100.0 : 1e-12 * std::max(scale, 1e-30);
        }
    }
    if (!have_factor) {
        // exact handling of degenerate directions (duplicated points,
        // training points at zero nugget)
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        if (es.info() != Eigen::Success)
            throw ConditioningError("simulate_conditional: covariance factorization failed");
        Eigen::VectorXd lam = es.eigenvalues();
        const double cutoff = lam.size() ? std::max(0.0, lam.maxCoeff()) * 1e-14 : 0.0;
        for (Eigen::Index i = 0; i < lam.size(); ++i)
            lam[i] = lam[i] > cutoff ? std::sqrt(lam[i]) : 0.0;
        A = es.eigenvectors() * lam.asDiagonal();
    }

    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd draws(n_sims, np);
    Eigen::VectorXd z(np);
    for (int k = 0; k < n_sims; ++k) {
        for (Eigen::Index i = 0; i < np; ++i) z[i] = normal(rng);
        draws.row(k) = (mean + A * z).transpose();
    }
    return draws;
}

std::vector<SurrogateModel::Prediction> MultiSurrogate::predict(const Design& x) const {
    std::vector<SurrogateModel::Prediction> out;
    out.reserve(models.size());
    for (const auto& m : models) out.push_back(m.predict(x));
    return out;
}

MultiSurrogate fit_multi(const std::vector<Design>& xs, const std::vector<ObjectiveVector>& ys,
                         const FitConfig& config) {
    if (xs.size() != ys.size()) throw DimensionError("fit_multi: xs/ys size mismatch");
    if (ys.empty()) throw EmptySetError("fit_multi: no data");
    const Eigen::Index m = ys.front().size();
    MultiSurrogate out;
    for (Eigen::Index j = 0; j < m; ++j) {
        std::vector<double> col(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) {
            if (ys[i].size() != m) throw DimensionError("fit_multi: inconsistent objective dims");
            col[i] = ys[i][j];
        }
        FitConfig cfg = config;
        cfg.seed = mix_seed(config.seed, static_cast<std::uint64_t>(j) + 101);
        out.models.push_back(SurrogateModel::fit(xs, col, cfg));
    }
    return out;
}

}  // namespace targetmo
