#include "shapereg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace shapereg {

EssEstimate effective_sample_size(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 10) throw std::invalid_argument("effective_sample_size: need at least 10 points");
    const double nn = static_cast<double>(n);
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / nn;

    // biased autocovariance at a given lag (1/n normalization)
    const auto gamma_at = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i)
            s += (series[i] - mean) * (series[i + lag] - mean);
        return s / nn;
    };

    // A constant series has variance at the rounding floor (~eps^2 * mean^2),
    // not exactly zero; compare against a scale-aware threshold.
    const double g0 = gamma_at(0);
    if (!(g0 > 1e-20 * (1.0 + mean * mean))) return {nn, true};  // constant: report n, flag it

    // Geyer's initial positive sequence: accumulate rho_{2m} + rho_{2m+1}
    // while the pairs stay positive.
    double tau = 0.0;
    bool any_pair = false;
    for (std::size_t mpair = 0; 2 * mpair + 1 < n; ++mpair) {
        const double pair = (gamma_at(2 * mpair) + gamma_at(2 * mpair + 1)) / g0;
        if (pair <= 0.0) break;
        tau += pair;
        any_pair = true;
    }
    if (!any_pair) return {nn, false};  // immediate negative pair: no correlation evidence
    tau = 2.0 * tau - 1.0;
    double ess = nn / tau;
    ess = std::clamp(ess, 1.0, nn);
    return {ess, false};
}

double mspe(std::span<const double> predicted, std::span<const double> observed) {
    if (predicted.size() != observed.size() || predicted.empty())
        throw std::invalid_argument("mspe: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - observed[i];
        s += d * d;
    }
    return s / static_cast<double>(predicted.size());
}

std::vector<double> function_value_ess(const Chain& chain, std::span<const double> x_test) {
    const Matrix draws = posterior_function_draws(chain, x_test);
    std::vector<double> out(x_test.size());
    std::vector<double> col(draws.rows());
    for (std::size_t i = 0; i < x_test.size(); ++i) {
        for (std::size_t r = 0; r < draws.rows(); ++r) col[r] = draws(r, i);
        out[i] = effective_sample_size(col).ess;
    }
    return out;
}

}  // namespace shapereg
