#include "targetmo/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "targetmo/random.hpp"

namespace targetmo {

namespace {

bool lex_less(const Design& a, const Design& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
}

// Tracks the best point seen, breaking value ties toward the
// lexicographically smaller design so results are deterministic.
struct Best {
    Design x;
    double value = -std::numeric_limits<double>::infinity();

    void offer(const Design& cand, double v) {
        if (v > value || (v == value && (x.size() == 0 || lex_less(cand, x)))) {
            x = cand;
            value = v;
        }
    }
};

// Nelder-Mead ascent clamped to the box; spends at most `budget` evaluations.
void nelder_mead(const std::function<double(const Design&)>& f, const BoxDomain& domain,
                 int budget, Best& best, const Design& x0) {
    const int d = domain.dim();
    const Eigen::VectorXd width = domain.width();
    int evals = 0;
    auto eval = [&](const Design& x) {
        const Design c = domain.clamp(x);
        const double v = f(c);
        ++evals;
        best.offer(c, v);
        return v;
    };

    std::vector<Design> simplex;
    std::vector<double> val;
    simplex.push_back(domain.clamp(x0));
    val.push_back(eval(simplex[0]));
    for (int j = 0; j < d; ++j) {
        Design xj = simplex[0];
        const double h = 0.05 * width[j];
        xj[j] = xj[j] + h <= domain.upper[j] ? xj[j] + h : xj[j] - h;
        simplex.push_back(xj);
        val.push_back(eval(xj));
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    while (evals < budget) {
        std::vector<int> order(simplex.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] > val[b]; });
        std::vector<Design> s2;
        std::vector<double> v2;
        for (int i : order) {
            s2.push_back(simplex[i]);
            v2.push_back(val[i]);
        }
        simplex = std::move(s2);
        val = std::move(v2);

        double spread = 0.0;
        for (int j = 1; j <= d; ++j) spread = std::max(spread, (simplex[j] - simplex[0]).norm());
        if (spread < 1e-10) break;

        Design centroid = Eigen::VectorXd::Zero(d);
        for (int j = 0; j < d; ++j) centroid += simplex[j];
        centroid /= d;

        const Design xr = centroid + alpha * (centroid - simplex[d]);
        const double vr = eval(xr);
        if (vr > val[0]) {
            const Design xe = centroid + gamma * (centroid - simplex[d]);
            const double ve = eval(xe);
            if (ve > vr) {
                simplex[d] = xe;
                val[d] = ve;
            } else {
                simplex[d] = xr;
                val[d] = vr;
            }
        } else if (vr > val[d - 1]) {
            simplex[d] = xr;
            val[d] = vr;
        } else {
            const Design xc = centroid + rho * (simplex[d] - centroid);
            const double vc = eval(xc);
            if (vc > val[d]) {
                simplex[d] = xc;
                val[d] = vc;
            } else {
                for (int j = 1; j <= d; ++j) {
                    simplex[j] = simplex[0] + sigma * (simplex[j] - simplex[0]);
                    val[j] = eval(simplex[j]);
                    if (evals >= budget) break;
                }
            }
        }
    }
}

// Projected gradient ascent with backtracking line search.
void gradient_ascent(const std::function<double(const Design&)>& f,
                     const std::function<Eigen::VectorXd(const Design&)>& grad,
                     const BoxDomain& domain, int budget, Best& best, const Design& x0) {
    Design x = domain.clamp(x0);
    double v = f(x);
    best.offer(x, v);
    int evals = 1;
    const double wmin = domain.width().minCoeff();
    double step = 0.1 * wmin;
    while (evals < budget) {
        Eigen::VectorXd g = grad(x);
        const double gn = g.norm();
        if (!g.allFinite() || gn < 1e-14) break;
        g /= gn;
        bool improved = false;
        while (evals < budget) {
            const Design cand = domain.clamp(x + step * g);
            const double cv = f(cand);
            ++evals;
            best.offer(cand, cv);
            if (cv > v) {
                x = cand;
                v = cv;
                step *= 1.6;
                improved = true;
                break;
            }
            step *= 0.5;
            if (step < 1e-12 * wmin) break;
        }
        if (!improved) break;
    }
}

}  // namespace

std::vector<Design> lhs(int n, const BoxDomain& domain, std::uint64_t seed) {
    if (n < 1) throw ConfigError("lhs: n must be >= 1");
    const int d = domain.dim();
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<Design> pts(n, Design(d));
    std::vector<int> perm(n);
    for (int j = 0; j < d; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < n; ++i) {
            const double u = (perm[i] + unif(rng)) / n;
            pts[i][j] = domain.lower[j] + u * (domain.upper[j] - domain.lower[j]);
        }
    }
    return pts;
}

std::vector<Design> raw_candidates(const BoxDomain& domain, const OptimizerConfig& config) {
    const int n = config.n_raw > 0 ? config.n_raw : 1000 * domain.dim();
    return lhs(n, domain, mix_seed(config.seed, 0xA11ULL));
}

std::pair<Design, double> maximize(const std::function<double(const Design&)>& criterion,
                                   const std::function<Eigen::VectorXd(const Design&)>& gradient,
                                   const BoxDomain& domain, const OptimizerConfig& config) {
    const std::vector<Design> raw = raw_candidates(domain, config);
    std::vector<double> values(raw.size());
    Best best;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        values[i] = criterion(raw[i]);
        best.offer(raw[i], values[i]);
    }

    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] != values[b] ? values[a] > values[b] : lex_less(raw[a], raw[b]);
    });

    const int n_starts =
        std::min<int>(config.n_starts > 0 ? config.n_starts : 10, static_cast<int>(raw.size()));
    for (int s = 0; s < n_starts; ++s) {
        const Design& x0 = raw[order[static_cast<std::size_t>(s)]];
        if (gradient)
            gradient_ascent(criterion, gradient, domain, config.local_budget, best, x0);
        else
            nelder_mead(criterion, domain, config.local_budget, best, x0);
    }
    return {best.x, best.value};
}

std::pair<Batch, double> maximize_batch(const std::function<double(const Batch&)>& criterion,
                                        const BoxDomain& domain, int q,
                                        const OptimizerConfig& config) {
    if (q < 1) throw ConfigError("maximize_batch: q must be >= 1");
    const int n_fixed = static_cast<int>(config.fixed_points.size());
    if (n_fixed >= q)
        throw ConfigError("maximize_batch: fixed_points must leave at least one free point");
    const int q_free = q - n_fixed;
    const int d = domain.dim();

    auto to_batch = [&](const Design& flat) {
        Batch b;
        b.designs = config.fixed_points;
        for (int i = 0; i < q_free; ++i) b.designs.push_back(flat.segment(i * d, d));
        return b;
    };

    // product box over the free points
    Eigen::VectorXd lo(q_free * d), hi(q_free * d);
    for (int i = 0; i < q_free; ++i) {
        lo.segment(i * d, d) = domain.lower;
        hi.segment(i * d, d) = domain.upper;
    }
    const BoxDomain product(lo, hi);

    OptimizerConfig flat_cfg = config;
    flat_cfg.n_raw = config.n_raw > 0 ? config.n_raw : 500 * q * d;
    flat_cfg.n_starts = config.n_starts > 0 ? config.n_starts : 5;
    flat_cfg.fixed_points.clear();

    auto flat_criterion = [&](const Design& flat) { return criterion(to_batch(flat)); };
    auto [flat_best, value] = maximize(flat_criterion, nullptr, product, flat_cfg);
    return {to_batch(flat_best), value};
}

}  // namespace targetmo
