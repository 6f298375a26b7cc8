#pragma once

#include <span>

#include "shapereg/grid_kernel.hpp"
#include "shapereg/matrix.hpp"

namespace shapereg {

// Hat-function basis on the regular grid and its running integrals
// (Maatouk & Bay 2017).  A nondecreasing function is modeled as a
// combination of once-integrated hats, a convex one via twice-integrated
// hats; the coefficients then carry the shape constraint as plain
// nonnegativity.
enum class BasisKind {
    interpolation,     // h_j(x): hat functions
    integrated_once,   // psi_j(x) = int_0^x h_j
    integrated_twice,  // phi_j(x) = int_0^x int_0^t h_j
};

// Hat centered at u_j with half-width = grid spacing, clipped to [0, 1].
double hat(double x, int j, const RegularGrid& grid);

// Closed-form piecewise-quadratic running integral of hat().
double psi(double x, int j, const RegularGrid& grid);

// Closed-form piecewise-cubic second running integral of hat().
double phi(double x, int j, const RegularGrid& grid);

struct BasisDesign {
    RegularGrid grid;
    BasisKind kind;
    Matrix matrix;  // n x (N+1)
};

// Evaluates the chosen family at each covariate; covariates must lie in
// [0, 1] (throws std::invalid_argument otherwise).
BasisDesign design(std::span<const double> x, const RegularGrid& grid, BasisKind kind);

}  // namespace shapereg
