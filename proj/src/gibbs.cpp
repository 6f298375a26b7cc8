#include "shapereg/gibbs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "shapereg/errors.hpp"

namespace shapereg {
namespace {

constexpr double kRateFloor = 1e-12;  // floor on RSS and quadratic forms

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void FitConfig::validate(std::size_t n_obs) const {
    if (n_obs < 3) throw InputError("fit: need at least 3 observations");
    if (n_iter <= 0) throw InputError("fit: n_iter must be positive");
    if (burn_in < 0 || burn_in >= n_iter) throw InputError("fit: need 0 <= burn_in < n_iter");
    if (knots != 0 && knots < 2) throw InputError("fit: knots must be >= 2 (or 0 for automatic)");
    if (!(eta > 0.0)) throw InputError("fit: eta must be positive");
    if (!(mh_step_frac > 0.0)) throw InputError("fit: mh_step_frac must be positive");
    if (max_shrinks < 1) throw InputError("fit: max_shrinks must be >= 1");
    if (g_max < 4 || g_max > 30) throw InputError("fit: g_max must be in [4, 30]");
    if (update_hypers) {
        if (!(prior.nu_lo > 0.0) || !(prior.nu_lo < prior.nu_hi))
            throw InputError("fit: invalid nu range");
        if (!(prior.ell_lo > 0.0) || !(prior.ell_lo < prior.ell_hi))
            throw InputError("fit: invalid ell range");
    } else {
        if (!(nu_fixed > 0.0)) throw InputError("fit: nu must be positive");
        if (ell_fixed != 0.0 && !(ell_fixed > 0.0)) throw InputError("fit: ell must be positive");
    }
}

double update_intercept(std::span<const double> y_star, double sigma2, RngStream& rng) {
    if (y_star.empty()) throw std::invalid_argument("update_intercept: empty response");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("update_intercept: sigma2 must be positive");
    const double n = static_cast<double>(y_star.size());
    return mean_of(y_star) + std::sqrt(sigma2 / n) * rng.normal();
}

double update_slope(std::span<const double> y_dstar, std::span<const double> x, double sigma2,
                    RngStream& rng) {
    if (y_dstar.size() != x.size() || x.empty())
        throw std::invalid_argument("update_slope: size mismatch");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("update_slope: sigma2 must be positive");
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y_dstar[i];
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("update_slope: covariate sum of squares is zero");
    return sxy / sxx + std::sqrt(sigma2 / sxx) * rng.normal();
}

double update_sigma2(std::span<const double> residual, RngStream& rng) {
    if (residual.empty()) throw std::invalid_argument("update_sigma2: empty residual");
    double rss = 0.0;
    for (double r : residual) rss += r * r;
    rss = std::max(rss, kRateFloor);  // exact fits degrade gracefully
    return rng.inverse_gamma(0.5 * static_cast<double>(residual.size()), 0.5 * rss);
}

double update_tau2(const InverseCholesky& ic, std::span<const double> xi, RngStream& rng) {
    const double q = std::max(quad_form(ic, xi), kRateFloor);
    return rng.inverse_gamma(0.5 * static_cast<double>(xi.size()), 0.5 * q);
}

double hyper_log_target(const InverseCholesky& ic, std::span<const double> xi, double tau2) {
    if (!(tau2 > 0.0)) throw std::invalid_argument("hyper_log_target: tau2 must be positive");
    return half_log_det_inv(ic) - 0.5 * quad_form(ic, xi) / tau2;
}

double reflect_into(double v, double lo, double hi) {
    const double w = hi - lo;
    if (!(w > 0.0)) throw std::invalid_argument("reflect_into: empty interval");
    double t = std::fmod(v - lo, 2.0 * w);
    if (t < 0.0) t += 2.0 * w;
    return lo + (t <= w ? t : 2.0 * w - t);
}

bool hyper_in_support(const MaternParams& p, const HyperPrior& prior) {
    return p.nu >= prior.nu_lo && p.nu <= prior.nu_hi && p.ell >= prior.ell_lo &&
           p.ell <= prior.ell_hi;
}

HyperUpdateResult update_hypers(const RegularGrid& grid, const MaternParams& cur,
                                const InverseCholesky& cur_ichol, std::span<const double> xi,
                                double tau2, const HyperPrior& prior, double step_frac,
                                RngStream& rng) {
    HyperUpdateResult out;
    out.params = cur;
    MaternParams prop;
    prop.nu = reflect_into(cur.nu + step_frac * (prior.nu_hi - prior.nu_lo) * rng.normal(),
                           prior.nu_lo, prior.nu_hi);
    prop.ell = reflect_into(cur.ell + step_frac * (prior.ell_hi - prior.ell_lo) * rng.normal(),
                            prior.ell_lo, prior.ell_hi);
    if (!hyper_in_support(prop, prior)) return out;  // unreachable via reflection; defensive

    InverseCholesky prop_ichol;
    try {
        prop_ichol = inverse_cholesky(kernel_first_row(grid, prop));
    } catch (const ConditioningError& e) {
        std::cerr << "warning: hyperparameter proposal (nu=" << prop.nu << ", ell=" << prop.ell
                  << ") rejected: " << e.what() << "\n";
        return out;
    }
    const double log_ratio =
        hyper_log_target(prop_ichol, xi, tau2) - hyper_log_target(cur_ichol, xi, tau2);
    if (std::log(rng.uniform_pos()) < log_ratio) {
        out.params = prop;
        out.accepted = true;
        out.ichol = std::move(prop_ichol);
    }
    return out;
}

Chain run_chain(std::span<const double> x, std::span<const double> y, const FitConfig& config) {
    if (x.size() != y.size()) throw InputError("fit: x and y lengths differ");
    config.validate(x.size());
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0))
            throw InputError("fit: covariates must be rescaled to [0, 1]");

    const std::size_t n = x.size();
    const int N = config.knots > 0 ? config.knots
                                   : static_cast<int>((n + 1) / 2);  // ceil(n/2)
    const RegularGrid grid(N);
    const std::size_t m = static_cast<std::size_t>(grid.size());  // N+1 coefficients

    const bool negated = config.shape == Shape::monotone_decreasing;
    const bool convex = config.shape == Shape::convex;
    std::vector<double> y_int(y.begin(), y.end());
    if (negated)
        for (auto& v : y_int) v = -v;

    const BasisDesign bd =
        design(x, grid, convex ? BasisKind::integrated_twice : BasisKind::integrated_once);

    RngStream rng(config.seed);

    MaternParams params{};
    if (config.update_hypers) {
        params.nu = 0.5 * (config.prior.nu_lo + config.prior.nu_hi);
        params.ell = 0.5 * (config.prior.ell_lo + config.prior.ell_hi);
    } else {
        params.nu = config.nu_fixed;
        params.ell = config.ell_fixed > 0.0 ? config.ell_fixed
                                            : default_lengthscale(x, config.nu_fixed);
    }

    InverseCholesky ichol = inverse_cholesky(kernel_first_row(grid, params));
    auto emb = std::make_shared<const CirculantEmbedding>(
        CirculantEmbedding::build(grid, params, config.g_max));
    PriorSampler sampler(emb);

    // initial state
    std::vector<double> xi(m, 1.0);
    double xi0 = mean_of(y_int);
    double xi_star = 0.0;
    double var_y = 0.0;
    for (double v : y_int) var_y += (v - xi0) * (v - xi0);
    var_y /= static_cast<double>(n - 1);
    double sigma2 = std::max(0.5 * var_y, 1e-8);
    double tau2 = 1.0;

    Chain chain;
    chain.config = config;
    chain.config.knots = N;
    if (!config.update_hypers) chain.config.ell_fixed = params.ell;  // echo resolved value
    chain.grid = grid;
    chain.negated = negated;
    chain.draws.reserve(static_cast<std::size_t>(config.n_iter - config.burn_in));
    chain.iter_seconds.reserve(static_cast<std::size_t>(config.n_iter));

    std::vector<double> residual_base(n), work(n);
    for (std::size_t i = 0; i < n; ++i) residual_base[i] = y_int[i] - xi0 - xi_star * x[i];

    RelaxedTarget target;
    target.design = &bd.matrix;
    target.eta = config.eta;

    for (int it = 0; it < config.n_iter; ++it) {
        const auto t0 = std::chrono::steady_clock::now();

        // xi | rest: elliptical slice step on the relaxed target
        target.residual_base = residual_base;
        target.sigma2 = sigma2;
        std::vector<double> nu_e = sampler.draw(tau2, rng);
        EssResult es = ess_step(target, xi, log_relaxed_likelihood(target, xi), nu_e, rng,
                                config.max_shrinks);
        xi = std::move(es.xi);
        const std::vector<double> bxi = matvec(bd.matrix, xi);

        // xi0 | rest
        for (std::size_t i = 0; i < n; ++i) work[i] = y_int[i] - bxi[i] - xi_star * x[i];
        xi0 = update_intercept(work, sigma2, rng);

        // xi_star | rest (convex model only)
        if (convex) {
            for (std::size_t i = 0; i < n; ++i) work[i] = y_int[i] - xi0 - bxi[i];
            xi_star = update_slope(work, x, sigma2, rng);
        }

        // sigma2 | rest
        for (std::size_t i = 0; i < n; ++i) work[i] = y_int[i] - xi0 - xi_star * x[i] - bxi[i];
        sigma2 = update_sigma2(work, rng);

        // tau2 | rest
        tau2 = update_tau2(ichol, xi, rng);

        // (nu, ell) | rest
        if (config.update_hypers) {
            HyperUpdateResult hu = update_hypers(grid, params, ichol, xi, tau2, config.prior,
                                                 config.mh_step_frac, rng);
            ++chain.hyper_proposals;
            if (hu.accepted) {
                ++chain.hyper_accepts;
                params = hu.params;
                ichol = std::move(*hu.ichol);
                emb = std::make_shared<const CirculantEmbedding>(
                    CirculantEmbedding::build(grid, params, config.g_max));
                sampler.reset(emb);
            }
        }

        for (std::size_t i = 0; i < n; ++i) residual_base[i] = y_int[i] - xi0 - xi_star * x[i];

        chain.iter_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

        if (it >= config.burn_in) {
            IterationRecord rec;
            rec.xi0 = xi0;
            rec.xi_star = xi_star;
            rec.sigma2 = sigma2;
            rec.tau2 = tau2;
            rec.nu = params.nu;
            rec.ell = params.ell;
            rec.xi = xi;
            chain.draws.push_back(std::move(rec));
            chain.constraint_coord_count += m;
            for (double v : xi)
                if (v < -0.01) ++chain.constraint_violation_count;
        }
    }
    return chain;
}

Chain merge_chains(std::vector<Chain> chains) {
    if (chains.empty()) throw std::invalid_argument("merge_chains: no chains");
    Chain out = std::move(chains.front());
    for (std::size_t c = 1; c < chains.size(); ++c) {
        Chain& ch = chains[c];
        if (ch.grid.num_spacings != out.grid.num_spacings || ch.negated != out.negated ||
            ch.config.shape != out.config.shape)
            throw std::invalid_argument("merge_chains: incompatible chains");
        out.draws.insert(out.draws.end(), std::make_move_iterator(ch.draws.begin()),
                         std::make_move_iterator(ch.draws.end()));
        out.hyper_proposals += ch.hyper_proposals;
        out.hyper_accepts += ch.hyper_accepts;
        out.constraint_coord_count += ch.constraint_coord_count;
        out.constraint_violation_count += ch.constraint_violation_count;
        out.iter_seconds.insert(out.iter_seconds.end(), ch.iter_seconds.begin(),
                                ch.iter_seconds.end());
    }
    return out;
}

Matrix posterior_function_draws(const Chain& chain, std::span<const double> x_test) {
    if (chain.draws.empty()) throw std::invalid_argument("posterior_function_draws: empty chain");
    const bool convex = chain.config.shape == Shape::convex;
    const BasisDesign bd = design(x_test, chain.grid,
                                  convex ? BasisKind::integrated_twice : BasisKind::integrated_once);
    Matrix out(chain.draws.size(), x_test.size());
    for (std::size_t r = 0; r < chain.draws.size(); ++r) {
        const IterationRecord& rec = chain.draws[r];
        const std::vector<double> bxi = matvec(bd.matrix, rec.xi);
        for (std::size_t i = 0; i < x_test.size(); ++i) {
            double f = rec.xi0 + bxi[i];
            if (convex) f += rec.xi_star * x_test[i];
            out(r, i) = chain.negated ? -f : f;
        }
    }
    return out;
}

double sample_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("sample_quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sample_quantile: q outside [0, 1]");
    std::sort(values.begin(), values.end());
    // linear interpolation of order statistics (R type 7)
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

Prediction predict(const Chain& chain, std::span<const double> x_test) {
    const Matrix draws = posterior_function_draws(chain, x_test);
    Prediction p;
    p.x.assign(x_test.begin(), x_test.end());
    p.mean.resize(x_test.size());
    p.lower.resize(x_test.size());
    p.upper.resize(x_test.size());
    std::vector<double> col(draws.rows());
    for (std::size_t i = 0; i < x_test.size(); ++i) {
        for (std::size_t r = 0; r < draws.rows(); ++r) col[r] = draws(r, i);
        p.mean[i] = mean_of(col);
        p.lower[i] = sample_quantile(col, 0.025);
        p.upper[i] = sample_quantile(col, 0.975);
    }
    return p;
}

}  // namespace shapereg
