#include "shapereg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapereg {
namespace {

double clamp01(double s) { return std::min(s, 1.0); }

}  // namespace

double hat(double x, int j, const RegularGrid& grid) {
    if (j < 0 || j > grid.num_spacings) throw std::invalid_argument("hat: knot index out of range");
    const double t = std::abs(x - grid.knots[j]) / grid.spacing;
    return t >= 1.0 ? 0.0 : 1.0 - t;
}

// The running integral accumulates per branch: the rising half contributes
// delta s^2/2 and the falling half delta (s - s^2/2), s the within-branch
// offset in units of the spacing.  Boundary hats keep only the half inside
// [0, 1].
double psi(double x, int j, const RegularGrid& grid) {
    if (j < 0 || j > grid.num_spacings) throw std::invalid_argument("psi: knot index out of range");
    const double d = grid.spacing;
    double acc = 0.0;
    if (j >= 1 && x > grid.knots[j - 1]) {
        const double s = clamp01((x - grid.knots[j - 1]) / d);
        acc += d * 0.5 * s * s;
    }
    if (j <= grid.num_spacings - 1 && x > grid.knots[j]) {
        const double s = clamp01((x - grid.knots[j]) / d);
        acc += d * (s - 0.5 * s * s);
    }
    return acc;
}

double phi(double x, int j, const RegularGrid& grid) {
    if (j < 0 || j > grid.num_spacings) throw std::invalid_argument("phi: knot index out of range");
    const double d = grid.spacing;
    const int N = grid.num_spacings;
    double acc = 0.0;
    double head = 0.0;  // psi value entering the falling branch
    if (j >= 1) {
        if (x > grid.knots[j - 1]) {
            const double s = clamp01((x - grid.knots[j - 1]) / d);
            acc += d * d * s * s * s / 6.0;
        }
        head = 0.5 * d;
    }
    if (j <= N - 1 && x > grid.knots[j]) {
        const double s = clamp01((x - grid.knots[j]) / d);
        acc += head * d * s + d * d * (0.5 * s * s - s * s * s / 6.0);
        if (x > grid.knots[j + 1]) {
            const double total = head + 0.5 * d;  // psi_j at and beyond u_{j+1}
            acc += total * (x - grid.knots[j + 1]);
        }
    }
    return acc;
}

BasisDesign design(std::span<const double> x, const RegularGrid& grid, BasisKind kind) {
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("design: covariates must lie in [0, 1]");
    const int m = grid.size();
    BasisDesign out{grid, kind, Matrix(x.size(), static_cast<std::size_t>(m))};
    double (*eval)(double, int, const RegularGrid&) =
        kind == BasisKind::interpolation ? hat : (kind == BasisKind::integrated_once ? psi : phi);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (int j = 0; j < m; ++j) out.matrix(i, j) = eval(x[i], j, grid);
    return out;
}

}  // namespace shapereg
