#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shapereg/basis.hpp"
#include "shapereg/circulant.hpp"
#include "shapereg/ess.hpp"
#include "shapereg/grid_kernel.hpp"
#include "shapereg/rng.hpp"
#include "shapereg/toeplitz.hpp"

namespace shapereg {

enum class Shape {
    monotone,             // nondecreasing
    monotone_decreasing,  // fit on the negated response, predictions negated back
    convex,
};

// Uniform box prior for (nu, ell) when hyperparameters are sampled.
struct HyperPrior {
    double nu_lo = 0.5, nu_hi = 1.0;
    double ell_lo = 0.1, ell_hi = 1.0;
};

struct FitConfig {
    Shape shape = Shape::monotone;
    int n_iter = 12000;
    int burn_in = 2000;
    int knots = 0;  // N; 0 means ceil(n/2)
    double eta = 50.0;
    bool update_hypers = false;
    HyperPrior prior;             // used when update_hypers
    double nu_fixed = 0.75;       // used when !update_hypers
    double ell_fixed = 0.0;       // 0 means default_lengthscale(x, nu_fixed)
    double mh_step_frac = 0.1;    // proposal sd as a fraction of support width
    std::uint64_t seed = 1;
    int max_shrinks = 100;
    int g_max = 20;

    void validate(std::size_t n_obs) const;  // throws InputError
};

struct IterationRecord {
    double xi0 = 0.0;
    double xi_star = 0.0;  // convex only; 0 otherwise
    double sigma2 = 1.0;
    double tau2 = 1.0;
    double nu = 0.75;
    double ell = 0.0;
    std::vector<double> xi;
};

struct Chain {
    FitConfig config;
    RegularGrid grid{1};
    bool negated = false;  // true when shape == monotone_decreasing
    std::vector<IterationRecord> draws;  // post burn-in
    std::uint64_t hyper_proposals = 0;
    std::uint64_t hyper_accepts = 0;
    std::uint64_t constraint_coord_count = 0;     // post burn-in (iter, coord) pairs
    std::uint64_t constraint_violation_count = 0; // of those, xi_j < -0.01
    std::vector<double> iter_seconds;

    double acceptance_rate() const {
        return hyper_proposals ? static_cast<double>(hyper_accepts) / hyper_proposals : 0.0;
    }
};

// --- individual conditional updates, exposed for unit testing ---

// xi0 | rest ~ N(mean(y_star), sigma2/n) where y_star is the response with
// every other model term subtracted.
double update_intercept(std::span<const double> y_star, double sigma2, RngStream& rng);

// Slope of the convex model: xi_star | rest ~ N(sum x y / sum x^2, sigma2/sum x^2).
double update_slope(std::span<const double> y_dstar, std::span<const double> x,
                    double sigma2, RngStream& rng);

// sigma2 | rest ~ InvGamma(n/2, RSS/2); the rate is floored at 1e-12 so an
// exact fit degrades gracefully instead of collapsing the chain.
double update_sigma2(std::span<const double> residual, RngStream& rng);

// tau2 | rest ~ InvGamma((N+1)/2, xi' K^{-1} xi / 2), same floor on the rate.
double update_tau2(const InverseCholesky& ic, std::span<const double> xi, RngStream& rng);

// log of the (nu, ell)-dependent part of the target:
// -0.5 log det K - xi' K^{-1} xi / (2 tau2), via the inverse Cholesky factor.
double hyper_log_target(const InverseCholesky& ic, std::span<const double> xi, double tau2);

// Reflects v into [lo, hi] by folding; symmetric, support-preserving.
double reflect_into(double v, double lo, double hi);

bool hyper_in_support(const MaternParams& p, const HyperPrior& prior);

struct HyperUpdateResult {
    MaternParams params{0.75, 0.5};
    bool accepted = false;
    std::optional<InverseCholesky> ichol;  // factor for `params`, engaged iff accepted
};

// Joint Metropolis move on (nu, ell): independent reflected Gaussian random
// walks with sd = step_frac * support width, accepted with the usual ratio.
// A ConditioningError while factoring the proposal rejects the move.
HyperUpdateResult update_hypers(const RegularGrid& grid, const MaternParams& cur,
                                const InverseCholesky& cur_ichol, std::span<const double> xi,
                                double tau2, const HyperPrior& prior, double step_frac,
                                RngStream& rng);

// Full blocked Gibbs sampler.  Covariates must already be rescaled to
// [0, 1].  Updates per iteration: xi (elliptical slice step on the relaxed
// target), xi0, xi_star (convex only), sigma2, tau2, then optionally
// (nu, ell).
Chain run_chain(std::span<const double> x, std::span<const double> y, const FitConfig& config);

Chain merge_chains(std::vector<Chain> chains);

// Posterior draws of f at the given (rescaled) covariates; rows = draws.
Matrix posterior_function_draws(const Chain& chain, std::span<const double> x_test);

struct Prediction {
    std::vector<double> x;  // rescaled scale, echo of the input
    std::vector<double> mean, lower, upper;
};

// Pointwise posterior mean and central 95% band (quantile convention: linear
// interpolation of order statistics, R type 7).
Prediction predict(const Chain& chain, std::span<const double> x_test);

// Quantile of a sample by the same pinned convention; q in [0, 1].
double sample_quantile(std::vector<double> values, double q);

}  // namespace shapereg
