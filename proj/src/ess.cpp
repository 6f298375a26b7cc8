#include "shapereg/ess.hpp"

#include <cmath>
#include <stdexcept>

namespace shapereg {
namespace {

// log sigmoid(z) = z - softplus(z), overflow-safe for any z.
inline double log_sigmoid(double z) {
    const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    return z - softplus;
}

}  // namespace

double log_relaxed_likelihood(const RelaxedTarget& t, std::span<const double> xi) {
    if (t.design == nullptr) throw std::invalid_argument("RelaxedTarget: missing design");
    const Matrix& b = *t.design;
    if (xi.size() != b.cols() || t.residual_base.size() != b.rows())
        throw std::invalid_argument("log_relaxed_likelihood: size mismatch");
    if (!(t.sigma2 > 0.0) || !(t.eta > 0.0))
        throw std::invalid_argument("log_relaxed_likelihood: sigma2 and eta must be positive");

    double ss = 0.0;
    for (std::size_t i = 0; i < b.rows(); ++i) {
        const double* row = b.data() + i * b.cols();
        double fit = 0.0;
        for (std::size_t j = 0; j < b.cols(); ++j) fit += row[j] * xi[j];
        const double r = t.residual_base[i] - fit;
        ss += r * r;
    }
    double penalty = 0.0;
    for (double v : xi) penalty += log_sigmoid(t.eta * v);
    return -0.5 * ss / t.sigma2 + penalty;
}

EssResult ess_step(const RelaxedTarget& t, std::span<const double> xi, double cur_log_lik,
                   std::span<const double> nu_e, RngStream& rng, int max_shrinks) {
    if (t.design == nullptr) throw std::invalid_argument("RelaxedTarget: missing design");
    const Matrix& b = *t.design;
    if (xi.size() != b.cols() || nu_e.size() != xi.size() ||
        t.residual_base.size() != b.rows())
        throw std::invalid_argument("ess_step: size mismatch");
    if (!(t.sigma2 > 0.0) || !(t.eta > 0.0))
        throw std::invalid_argument("ess_step: sigma2 and eta must be positive");

    // On the ellipse, B xi(theta) = cos(theta) (B xi) + sin(theta) (B nu_e);
    // precomputing the two products makes each angle proposal O(n + N)
    // instead of O(nN).
    const std::vector<double> bxi = matvec(b, xi);
    const std::vector<double> bnu = matvec(b, nu_e);
    const auto loglik_at = [&](double theta, std::span<const double> cand) {
        const double c = std::cos(theta), s = std::sin(theta);
        double ss = 0.0;
        for (std::size_t i = 0; i < b.rows(); ++i) {
            const double r = t.residual_base[i] - (c * bxi[i] + s * bnu[i]);
            ss += r * r;
        }
        double penalty = 0.0;
        for (double v : cand) penalty += log_sigmoid(t.eta * v);
        return -0.5 * ss / t.sigma2 + penalty;
    };

    EssResult res;
    res.log_slice = cur_log_lik + std::log(rng.uniform_pos());
    double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double theta_min = theta - 2.0 * std::numbers::pi;
    double theta_max = theta;
    for (int k = 0; k <= max_shrinks; ++k) {
        res.thetas.push_back(theta);
        std::vector<double> cand = ellipse_point(xi, nu_e, theta);
        const double ll = loglik_at(theta, cand);
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

}  // namespace shapereg
