#include "shapereg/toeplitz.hpp"

#include <cmath>
#include <stdexcept>

#include "shapereg/errors.hpp"

namespace shapereg {
namespace {

constexpr double kBreakdownFloor = 1e-14;

// Runs Durbin's recursion (Golub & Van Loan Alg. 4.7.1) to order h_max,
// invoking visit(k, y, beta) after completing order k, where y[0..k-1]
// solves T_k y = -(r_1..r_k) and beta is the order-k prediction error
// variance prod (1 - alpha_i^2).
template <typename Visit>
void durbin_sweep(const ToeplitzSpd& t, std::size_t h_max, Visit&& visit) {
    const auto& r = t.first_row;
    if (h_max >= r.size())
        throw std::invalid_argument("durbin: order exceeds available lags");
    std::vector<double> y(h_max, 0.0);
    if (h_max == 0) return;
    double beta = 1.0;
    double alpha = -r[1];
    y[0] = alpha;
    beta *= 1.0 - alpha * alpha;
    if (beta <= kBreakdownFloor)
        throw ConditioningError("durbin: prediction error variance collapsed at order 1");
    visit(std::size_t{1}, y, beta);
    for (std::size_t k = 1; k < h_max; ++k) {
        double num = r[k + 1];
        for (std::size_t i = 0; i < k; ++i) num += r[k - i] * y[i];
        alpha = -num / beta;
        // y_new = y + alpha * reverse(y), done in place from both ends
        std::size_t i = 0, j = k - 1;
        while (i < j) {
            const double yi = y[i], yj = y[j];
            y[i] = yi + alpha * yj;
            y[j] = yj + alpha * yi;
            ++i;
            --j;
        }
        if (i == j) y[i] += alpha * y[i];
        y[k] = alpha;
        beta *= 1.0 - alpha * alpha;
        if (beta <= kBreakdownFloor)
            throw ConditioningError("durbin: prediction error variance collapsed");
        visit(k + 1, y, beta);
    }
}

}  // namespace

ToeplitzSpd::ToeplitzSpd(std::vector<double> r) : first_row(std::move(r)) {
    if (first_row.empty()) throw std::invalid_argument("ToeplitzSpd: empty first row");
    if (std::abs(first_row[0] - 1.0) > 1e-12)
        throw std::invalid_argument("ToeplitzSpd: first_row[0] must be 1 (unit variance)");
}

std::vector<double> durbin_solve(const ToeplitzSpd& t, std::size_t h) {
    std::vector<double> out;
    durbin_sweep(t, h, [&](std::size_t k, const std::vector<double>& y, double) {
        if (k == h) out.assign(y.begin(), y.begin() + h);
    });
    return out;
}

InverseCholesky inverse_cholesky(const ToeplitzSpd& t) {
    const std::size_t m = t.order();
    InverseCholesky ic;
    ic.s = Matrix(m, m, 0.0);
    ic.s(0, 0) = 1.0;  // r_0 = 1
    durbin_sweep(t, m - 1, [&](std::size_t k, const std::vector<double>& y, double beta) {
        // column k of S: (y_{k-1}, ..., y_0, 1) / sqrt(beta_k)
        const double inv_sd = 1.0 / std::sqrt(beta);
        for (std::size_t i = 0; i < k; ++i) ic.s(i, k) = y[k - 1 - i] * inv_sd;
        ic.s(k, k) = inv_sd;
    });
    return ic;
}

double quad_form(const InverseCholesky& ic, std::span<const double> xi) {
    const std::size_t m = ic.order();
    if (xi.size() != m) throw std::invalid_argument("quad_form: size mismatch");
    // Accumulate (S^T xi) by sweeping rows of the row-major factor, so memory
    // is streamed sequentially; row i touches columns i..m-1.
    std::vector<double> acc(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double v = xi[i];
        const auto row = ic.s.row(i);
        for (std::size_t k = i; k < m; ++k) acc[k] += row[k] * v;
    }
    double total = 0.0;
    for (double s : acc) total += s * s;
    return total;
}

double half_log_det_inv(const InverseCholesky& ic) {
    double s = 0.0;
    for (std::size_t j = 0; j < ic.order(); ++j) s += std::log(ic.s(j, j));
    return s;
}

}  // namespace shapereg
