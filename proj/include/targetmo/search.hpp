#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "targetmo/criteria.hpp"
#include "targetmo/types.hpp"

namespace targetmo {

struct OptimizerConfig {
    int n_raw = 0;          // raw space-filling candidates; 0 = 1000*d (500*q*d for batches)
    int n_starts = 0;       // candidates kept for local refinement; 0 = 10 (5 for batches)
    int local_budget = 200; // criterion evaluations per local refinement
    std::uint64_t seed = 0;

    // batch search only: points held fixed at the front of the batch while
    // the remaining q - fixed entries are optimized (asynchronous setting)
    std::vector<Design> fixed_points;
};

/// Latin hypercube design: n points, each margin has exactly one point per
/// equal-width stratum. Reproducible per seed.
std::vector<Design> lhs(int n, const BoxDomain& domain, std::uint64_t seed);

/// The raw candidate set maximize() starts from (exposed so baselines can use
/// the identical seed family).
std::vector<Design> raw_candidates(const BoxDomain& domain, const OptimizerConfig& config);

/// Multistart maximization over the box: raw LHS scan, then gradient ascent
/// (when a gradient is supplied) or Nelder-Mead refinement of the best starts.
/// Returns the best design found and its criterion value.
std::pair<Design, double> maximize(const std::function<double(const Design&)>& criterion,
                                   const std::function<Eigen::VectorXd(const Design&)>& gradient,
                                   const BoxDomain& domain, const OptimizerConfig& config);

inline std::pair<Design, double> maximize(const std::function<double(const Design&)>& criterion,
                                          const BoxDomain& domain,
                                          const OptimizerConfig& config) {
    return maximize(criterion, nullptr, domain, config);
}

/// Multistart derivative-free maximization of a batch criterion over X^q
/// (or over the free tail when config.fixed_points is nonempty).
std::pair<Batch, double> maximize_batch(const std::function<double(const Batch&)>& criterion,
                                        const BoxDomain& domain, int q,
                                        const OptimizerConfig& config);

}  // namespace targetmo
