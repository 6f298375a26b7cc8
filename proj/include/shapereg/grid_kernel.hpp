#pragma once

#include <span>
#include <vector>

#include "shapereg/toeplitz.hpp"

namespace shapereg {

// Regular knot grid u_j = j/N on [0, 1], j = 0..N.
struct RegularGrid {
    explicit RegularGrid(int num_spacings);

    int num_spacings;           // N
    double spacing;             // 1/N
    std::vector<double> knots;  // length N+1

    int size() const { return num_spacings + 1; }
};

// Matern smoothness/lengthscale pair; the kernel has unit variance.
struct MaternParams {
    double nu;
    double ell;
};

// Modified Bessel function of the second kind K_nu(x) for nu >= 0, x > 0.
// Temme's series for x <= 2, Steed/Thompson-Barnett continued fraction for
// x > 2, forward recurrence in the order.  Exposed for testing.
double bessel_kv(double nu, double x);

// Unit-variance Matern correlation at distance r >= 0.
double matern(double r, const MaternParams& p);

// First row of the (N+1)x(N+1) kernel matrix over the grid: k(j/N), j=0..N.
ToeplitzSpd kernel_first_row(const RegularGrid& grid, const MaternParams& p);

// Lengthscale at which the correlation over the covariate span s drops to
// 0.05: solves matern(s, nu, ell) = 0.05 for ell by bisection to 1e-10.
double default_lengthscale(std::span<const double> x, double nu = 0.75);

}  // namespace shapereg
