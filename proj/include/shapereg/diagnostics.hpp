#pragma once

#include <span>
#include <vector>

#include "shapereg/gibbs.hpp"

namespace shapereg {

struct EssEstimate {
    double ess = 0.0;
    bool constant_series = false;  // degenerate input; ess reported as n
};

// Effective sample size by Geyer's initial positive sequence: biased
// autocovariances are paired (rho_{2m} + rho_{2m+1}), summed while the pairs
// stay positive, tau = 2 * sum - 1, ESS = n / tau clamped to (0, n].
// Requires at least 10 points.
EssEstimate effective_sample_size(std::span<const double> series);

// Mean squared prediction error.
double mspe(std::span<const double> predicted, std::span<const double> observed);

// ESS of the posterior function values f(x) at each test point.
std::vector<double> function_value_ess(const Chain& chain, std::span<const double> x_test);

}  // namespace shapereg
