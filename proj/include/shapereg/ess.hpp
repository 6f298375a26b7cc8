#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "shapereg/matrix.hpp"
#include "shapereg/rng.hpp"

namespace shapereg {

// Smooth relaxation of the nonnegativity-constrained Gaussian likelihood:
// the hard indicator prod_j 1{xi_j >= 0} is replaced by a product of
// sigmoids with sharpness eta, which keeps the target log-concave and lets
// elliptical slice sampling move through the constraint boundary.
struct RelaxedTarget {
    const Matrix* design = nullptr;     // n x (N+1)
    std::vector<double> residual_base;  // response minus the non-xi terms
    double sigma2 = 1.0;
    double eta = 50.0;
};

// log L(xi) = -||r - B xi||^2 / (2 sigma^2) + sum_j [eta xi_j - softplus(eta xi_j)].
// The penalty term equals sum_j log sigmoid(eta xi_j), evaluated without
// overflow for any magnitude of eta xi_j.
double log_relaxed_likelihood(const RelaxedTarget& t, std::span<const double> xi);

struct EssResult {
    std::vector<double> xi;
    double log_lik = 0.0;           // log likelihood at the accepted point
    double log_slice = 0.0;         // slice level: loglik(start) + log u
    std::vector<double> thetas;     // all proposed angles; back() was accepted
    int n_proposals() const { return static_cast<int>(thetas.size()); }
    double theta() const { return thetas.back(); }
};

inline std::vector<double> ellipse_point(std::span<const double> xi,
                                         std::span<const double> nu_e, double theta) {
    if (xi.size() != nu_e.size()) throw std::invalid_argument("ellipse_point: size mismatch");
    std::vector<double> out(xi.size());
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = nu_e[i] * s + xi[i] * c;
    return out;
}

// One elliptical slice sampling transition (Murray, Adams & MacKay 2010)
// for any log likelihood, generic so toy targets can exercise it directly.
// nu_e is the auxiliary prior draw defining the ellipse; the bracket starts
// at [theta - 2pi, theta] and shrinks toward 0 after each rejection.
template <typename LogLik>
EssResult ess_step_fn(LogLik&& loglik, std::span<const double> xi, double cur_log_lik,
                      std::span<const double> nu_e, RngStream& rng, int max_shrinks = 100) {
    if (xi.size() != nu_e.size()) throw std::invalid_argument("ess_step: size mismatch");
    EssResult res;
    res.log_slice = cur_log_lik + std::log(rng.uniform_pos());
    double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double theta_min = theta - 2.0 * std::numbers::pi;
    double theta_max = theta;
    for (int k = 0; k <= max_shrinks; ++k) {
        res.thetas.push_back(theta);
        std::vector<double> cand = ellipse_point(xi, nu_e, theta);
        const double ll = loglik(std::span<const double>(cand));
        if (ll > res.log_slice) {
            res.xi = std::move(cand);
            res.log_lik = ll;
            return res;
        }
        if (theta < 0.0)
            theta_min = theta;
        else
            theta_max = theta;
        theta = rng.uniform(theta_min, theta_max);
    }
    throw std::runtime_error("ess_step: bracket failed to find an acceptable point");
}

EssResult ess_step(const RelaxedTarget& t, std::span<const double> xi, double cur_log_lik,
                   std::span<const double> nu_e, RngStream& rng, int max_shrinks = 100);

}  // namespace shapereg
