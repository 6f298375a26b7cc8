#include "shapereg/grid_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shapereg/errors.hpp"

namespace shapereg {
namespace {

constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kSeriesEps = 1e-16;
constexpr int kMaxIter = 20000;

// Gamma1(mu) = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu), with the small-mu
// series (coefficient = gamma^3/6 - gamma pi^2/12 + zeta(3)/3) to dodge the
// cancellation near mu = 0.
double gam1(double mu) {
    if (std::abs(mu) < 1e-3) {
        constexpr double a3 = -0.04200263503409523553;
        return -(kEulerGamma + a3 * mu * mu);
    }
    return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
}

double gam2(double mu) {
    return 0.5 * (1.0 / std::tgamma(1.0 - mu) + 1.0 / std::tgamma(1.0 + mu));
}

struct KPair {
    double kmu;
    double kmu1;
};

// Temme's series for K_mu(x), K_{mu+1}(x); x <= 2, |mu| <= 1/2.
KPair k_temme(double x, double mu) {
    const double x1 = 0.5 * x;
    const double d = x1 * x1;
    const double lg = std::log(2.0 / x);
    const double sigma = mu * lg;
    const double fact =
        std::abs(mu) < 1e-15 ? 1.0 : std::numbers::pi_v<double> * mu / std::sin(std::numbers::pi_v<double> * mu);
    const double sinhc = std::abs(sigma) < 1e-10 ? 1.0 + sigma * sigma / 6.0
                                                 : std::sinh(sigma) / sigma;
    double f = fact * (gam1(mu) * std::cosh(sigma) + gam2(mu) * lg * sinhc);
    double p = 0.5 * std::pow(x1, -mu) * std::tgamma(1.0 + mu);
    double q = 0.5 * std::pow(x1, mu) * std::tgamma(1.0 - mu);
    double c = 1.0;
    double s0 = f;
    double s1 = p;
    for (int i = 1; i <= kMaxIter; ++i) {
        f = (i * f + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del0 = c * f;
        s0 += del0;
        s1 += c * (p - i * f);
        if (std::abs(del0) < std::abs(s0) * kSeriesEps) break;
    }
    return {s0, (2.0 / x) * s1};
}

// Steed's continued fraction CF2 with Thompson-Barnett sums for
// K_mu(x), K_{mu+1}(x); x > 2, |mu| <= 1/2.
KPair k_cf2(double x, double mu) {
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kSeriesEps) break;
    }
    h = a1 * h;
    const double e = x < 700.0 ? std::exp(-x) : 0.0;
    const double kmu = std::sqrt(std::numbers::pi_v<double> / (2.0 * x)) * e / s;
    const double k1 = kmu * (mu + x + 0.5 - h) / x;
    return {kmu, k1};
}

}  // namespace

double bessel_kv(double nu, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel_kv: x must be positive");
    if (!(nu >= 0.0)) throw std::invalid_argument("bessel_kv: nu must be nonnegative");
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;  // in [-1/2, 1/2]
    KPair k = x <= 2.0 ? k_temme(x, mu) : k_cf2(x, mu);
    for (int j = 1; j <= nl; ++j) {
        const double next = k.kmu1 * 2.0 * (mu + j) / x + k.kmu;
        k.kmu = k.kmu1;
        k.kmu1 = next;
    }
    return k.kmu;
}

double matern(double r, const MaternParams& p) {
    if (!(r >= 0.0)) throw std::invalid_argument("matern: r must be nonnegative");
    if (!(p.nu > 0.0)) throw std::invalid_argument("matern: nu must be positive");
    if (!(p.ell > 0.0)) throw std::invalid_argument("matern: ell must be positive");
    if (r == 0.0) return 1.0;
    const double z = std::sqrt(2.0 * p.nu) * r / p.ell;
    return std::pow(2.0, 1.0 - p.nu) / std::tgamma(p.nu) * std::pow(z, p.nu) * bessel_kv(p.nu, z);
}

RegularGrid::RegularGrid(int num_spacings_) : num_spacings(num_spacings_) {
    if (num_spacings < 1) throw std::invalid_argument("RegularGrid: need at least 1 spacing");
    spacing = 1.0 / num_spacings;
    knots.resize(num_spacings + 1);
    for (int j = 0; j <= num_spacings; ++j)
        knots[j] = static_cast<double>(j) / num_spacings;
}

ToeplitzSpd kernel_first_row(const RegularGrid& grid, const MaternParams& p) {
    std::vector<double> row(grid.size());
    for (int j = 0; j < grid.size(); ++j) row[j] = matern(j * grid.spacing, p);
    return ToeplitzSpd(std::move(row));
}

double default_lengthscale(std::span<const double> x, double nu) {
    if (x.size() < 2) throw InputError("default_lengthscale: need at least 2 covariates");
    double lo_x = x[0], hi_x = x[0];
    for (double v : x) {
        lo_x = std::min(lo_x, v);
        hi_x = std::max(hi_x, v);
    }
    const double s = hi_x - lo_x;
    if (!(s > 0.0)) throw InputError("default_lengthscale: covariate span is zero");

    const auto corr = [&](double ell) { return matern(s, {nu, ell}); };
    constexpr double target = 0.05;
    double lo = 1e-12;
    double hi = s;
    int guard = 0;
    while (corr(hi) < target) {
        hi *= 2.0;
        if (++guard > 200) throw InputError("default_lengthscale: no bracket found");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (corr(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace shapereg
