#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shapereg/matrix.hpp"

namespace shapereg {

// Symmetric positive definite Toeplitz matrix represented by its first row.
// The stationary kernels used here have unit variance, so r[0] must be 1.
struct ToeplitzSpd {
    std::vector<double> first_row;

    explicit ToeplitzSpd(std::vector<double> r);
    std::size_t order() const { return first_row.size(); }
};

// Solves T_h u = -(r_1, ..., r_h) by Durbin's recursion (Golub & Van Loan,
// Matrix Computations, Alg. 4.7.1).  O(h^2).  Throws ConditioningError when
// a prediction-error variance falls below 1e-14.
std::vector<double> durbin_solve(const ToeplitzSpd& t, std::size_t h);

// Upper-triangular S with S S^T = T^{-1}.  Column k holds the order-k
// Durbin solution (reversed) over 1, scaled by the inverse prediction-error
// standard deviation, so all columns come out of one Durbin sweep.  O(M^2).
struct InverseCholesky {
    Matrix s;
    std::size_t order() const { return s.rows(); }
};

InverseCholesky inverse_cholesky(const ToeplitzSpd& t);

// xi^T T^{-1} xi = ||S^T xi||^2.
double quad_form(const InverseCholesky& ic, std::span<const double> xi);

// log det(T^{-1/2}) = sum_j log S_jj = -0.5 log det(T).
double half_log_det_inv(const InverseCholesky& ic);

}  // namespace shapereg
