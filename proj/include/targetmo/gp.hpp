#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "targetmo/types.hpp"

namespace targetmo {

/// Hyperparameters of one anisotropic Matérn-5/2 GP with constant mean.
struct KernelParams {
    Eigen::VectorXd lengthscales;  // one per input dimension, > 0
    double signal_variance = 1.0;  // > 0
    double nugget = 0.0;           // absolute variance added on the diagonal, >= 0
    double constant_mean = 0.0;
};

struct FitConfig {
    int n_starts = 10;              // multistart count for the likelihood search
    int max_refine_iters = 60;      // gradient-ascent iterations per start
    double rel_jitter = 1e-8;       // initial nugget relative to signal variance
    double max_rel_jitter = 1e-4;   // escalation cap (x10 steps)
    double ls_lower_factor = 0.01;  // lengthscale bounds as multiples of the
    double ls_upper_factor = 10.0;  // per-dimension data width
    std::uint64_t seed = 0;
    std::optional<BoxDomain> domain;  // used for lengthscale bounds when given
};

/// One fitted GP. Immutable after fit; predict/simulate are const and
/// safe to call concurrently.
class SurrogateModel {
public:
    /// Maximum-likelihood fit (multistart over log-lengthscales with
    /// gradient refinement; constant mean and signal variance profiled out).
    static SurrogateModel fit(const std::vector<Design>& xs, const std::vector<double>& ys,
                              const FitConfig& config = {});

    /// Fixed-hyperparameter conditioning (no likelihood search). The nugget
    /// of `params` is interpreted as an absolute variance.
    static SurrogateModel condition(const std::vector<Design>& xs, const std::vector<double>& ys,
                                    const KernelParams& params);

    struct Prediction {
        double mean;
        double sd;
    };
    Prediction predict(const Design& x) const;

    struct PredictionWithGradient {
        double mean;
        double sd;
        Eigen::VectorXd dmean;  // d mean / d x
        Eigen::VectorXd dsd;    // d sd / d x (0 where sd == 0)
    };
    PredictionWithGradient predict_with_gradient(const Design& x) const;

    /// Joint posterior mean and covariance of the latent function at `points`.
    void posterior_moments(const std::vector<Design>& points, Eigen::VectorXd& mean,
                           Eigen::MatrixXd& cov) const;

    /// n_sims independent draws from the joint posterior at `points`
    /// (rows = draws). Reproducible for a fixed seed.
    Eigen::MatrixXd simulate_conditional(const std::vector<Design>& points, int n_sims,
                                         std::uint64_t seed) const;

    const KernelParams& params() const { return params_; }
    const Eigen::MatrixXd& inputs() const { return X_; }            // n x d
    const Eigen::VectorXd& outputs() const { return y_; }
    const Eigen::MatrixXd& chol() const { return L_; }              // K = L L^T
    double log_likelihood() const { return log_lik_; }
    int input_dim() const { return static_cast<int>(X_.cols()); }
    int n_train() const { return static_cast<int>(X_.rows()); }

private:
    SurrogateModel() = default;
    void finalize();  // factorize and precompute solves

    Eigen::MatrixXd X_;      // n x d
    Eigen::VectorXd y_;      // n
    KernelParams params_;
    Eigen::MatrixXd L_;      // lower Cholesky factor of K = sv*(C + eta*I)
    Eigen::VectorXd alpha_;  // C_tilde^{-1} (y - mu)
    double log_lik_ = 0.0;
};

/// Independent per-objective surrogates sharing the same inputs.
struct MultiSurrogate {
    std::vector<SurrogateModel> models;

    int n_objectives() const { return static_cast<int>(models.size()); }
    int input_dim() const { return models.empty() ? 0 : models.front().input_dim(); }

    /// Per-objective posterior mean/sd at x.
    std::vector<SurrogateModel::Prediction> predict(const Design& x) const;
};

/// Fit one GP per column of `ys` (all sharing `xs`).
MultiSurrogate fit_multi(const std::vector<Design>& xs,
                         const std::vector<ObjectiveVector>& ys, const FitConfig& config = {});

/// Matérn-5/2 correlation of scaled distance r.
double matern52(double r);

}  // namespace targetmo
