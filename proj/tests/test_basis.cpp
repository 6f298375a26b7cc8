#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracle.hpp"
#include "shapereg/basis.hpp"

using namespace shapereg;

TEST_CASE("hat function shape") {
    const RegularGrid g(4);
    CHECK(hat(0.25, 1, g) == 1.0);
    CHECK(hat(0.0, 1, g) == 0.0);
    CHECK(hat(0.5, 1, g) == 0.0);
    CHECK(hat(0.375, 1, g) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(hat(0.0, 0, g) == 1.0);  // boundary hat keeps its inner half
    CHECK(hat(1.0, 4, g) == 1.0);
    CHECK_THROWS_AS(hat(0.5, 5, g), std::invalid_argument);
}

TEST_CASE("hats form a partition of unity") {
    const RegularGrid g(7);
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double x = ux(gen);
        double s = 0.0;
        for (int j = 0; j < g.size(); ++j) s += hat(x, j, g);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("psi endpoint values") {
    const RegularGrid g(4);  // spacing 0.25
    for (int j = 0; j < g.size(); ++j) CHECK(psi(0.0, j, g) == 0.0);
    CHECK(psi(1.0, 0, g) == doctest::Approx(0.125).epsilon(1e-14));   // half hat
    CHECK(psi(1.0, 2, g) == doctest::Approx(0.25).epsilon(1e-14));    // full hat
    CHECK(psi(1.0, 4, g) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("psi is nondecreasing and saturates past the support") {
    const RegularGrid g(5);
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int j = 0; j < g.size(); ++j) {
        for (int t = 0; t < 100; ++t) {
            double a = ux(gen), b = ux(gen);
            if (a > b) std::swap(a, b);
            CHECK(psi(b, j, g) >= psi(a, j, g) - 1e-15);
        }
        if (j + 1 < g.size())
            CHECK(psi(1.0, j, g) == doctest::Approx(psi(g.knots[j + 1], j, g)).epsilon(1e-13));
    }
}

TEST_CASE("phi starts flat at zero") {
    const RegularGrid g(4);
    for (int j = 0; j < g.size(); ++j) {
        CHECK(phi(0.0, j, g) == 0.0);
        if (j >= 2) CHECK(phi(g.knots[j - 1], j, g) == 0.0);  // zero before the support
    }
    // right derivative at 0 vanishes for every phi_j with support away from 0
    const double h = 1e-6;
    CHECK(phi(h, 2, g) == 0.0);
    CHECK(phi(h, 1, g) <= h * h);  // integrand itself is O(h)
}

TEST_CASE("derivative consistency: psi' = hat and phi' = psi") {
    const RegularGrid g(6);
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> ux(0.01, 0.99);
    const double h = 1e-6;
    for (int t = 0; t < 50; ++t) {
        const double x = ux(gen);
        for (int j = 0; j < g.size(); ++j) {
            const double dpsi = (psi(x + h, j, g) - psi(x - h, j, g)) / (2.0 * h);
            CHECK(std::abs(dpsi - hat(x, j, g)) <= 1e-5);
            const double dphi = (phi(x + h, j, g) - phi(x - h, j, g)) / (2.0 * h);
            CHECK(std::abs(dphi - psi(x, j, g)) <= 1e-5);
        }
    }
}

TEST_CASE("closed forms match adaptive quadrature") {
    const RegularGrid g(5);
    // Integrate piecewise between knots: the integrands are only piecewise
    // smooth, and a kink inside a Simpson panel can fool the refinement test.
    const auto quad_to = [&](const std::function<double(double)>& f, double x) {
        double acc = 0.0, a = 0.0;
        for (double u : g.knots) {
            if (u <= 0.0 || u >= x) continue;
            acc += oracle::adaptive_simpson(f, a, u, 1e-13);
            a = u;
        }
        return acc + oracle::adaptive_simpson(f, a, x, 1e-13);
    };
    std::mt19937_64 gen(24);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const double x = ux(gen);
        const int j = static_cast<int>(gen() % static_cast<std::uint64_t>(g.size()));
        const double psi_quad = quad_to([&](double u) { return hat(u, j, g); }, x);
        CHECK(std::abs(psi(x, j, g) - psi_quad) <= 1e-9);
        const double phi_quad = quad_to([&](double u) { return psi(u, j, g); }, x);
        CHECK(std::abs(phi(x, j, g) - phi_quad) <= 1e-9);
    }
}

TEST_CASE("design matrix entries and errors") {
    const RegularGrid g(4);
    SUBCASE("interpolation rows at knots are indicators") {
        const std::vector<double> x{g.knots[3]};
        const BasisDesign d = design(x, g, BasisKind::interpolation);
        for (int j = 0; j < g.size(); ++j)
            CHECK(d.matrix(0, j) == doctest::Approx(j == 3 ? 1.0 : 0.0).epsilon(1e-14));
    }
    SUBCASE("integrated-once row at x=1 gives the hat masses") {
        const std::vector<double> x{1.0};
        const BasisDesign d = design(x, g, BasisKind::integrated_once);
        CHECK(d.matrix(0, 0) == doctest::Approx(0.125).epsilon(1e-14));
        for (int j = 1; j < 4; ++j) CHECK(d.matrix(0, j) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(d.matrix(0, 4) == doctest::Approx(0.125).epsilon(1e-14));
    }
    SUBCASE("integrated-twice row at x=0 is zero") {
        const std::vector<double> x{0.0};
        const BasisDesign d = design(x, g, BasisKind::integrated_twice);
        for (int j = 0; j < g.size(); ++j) CHECK(d.matrix(0, j) == 0.0);
    }
    SUBCASE("entry ranges") {
        std::mt19937_64 gen(25);
        std::uniform_real_distribution<double> ux(0.0, 1.0);
        std::vector<double> x(40);
        for (auto& v : x) v = ux(gen);
        const BasisDesign dh = design(x, g, BasisKind::interpolation);
        const BasisDesign dp = design(x, g, BasisKind::integrated_once);
        const BasisDesign df = design(x, g, BasisKind::integrated_twice);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (int j = 0; j < g.size(); ++j) {
                CHECK(dh.matrix(i, j) >= 0.0);
                CHECK(dh.matrix(i, j) <= 1.0);
                CHECK(dp.matrix(i, j) >= 0.0);
                CHECK(dp.matrix(i, j) <= g.spacing + 1e-15);
                CHECK(df.matrix(i, j) >= 0.0);
            }
    }
    SUBCASE("covariates outside the unit interval are rejected") {
        CHECK_THROWS_AS(design(std::vector<double>{-0.1}, g, BasisKind::interpolation),
                        std::invalid_argument);
        CHECK_THROWS_AS(design(std::vector<double>{1.1}, g, BasisKind::integrated_once),
                        std::invalid_argument);
    }
}

TEST_CASE("nonnegative coefficients produce the advertised shapes") {
    const RegularGrid g(8);
    std::mt19937_64 gen(26);
    std::uniform_real_distribution<double> uc(0.0, 2.0);
    std::vector<double> fine(201);
    for (std::size_t k = 0; k < fine.size(); ++k)
        fine[k] = static_cast<double>(k) / static_cast<double>(fine.size() - 1);

    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> coef(static_cast<std::size_t>(g.size()));
        for (auto& c : coef) c = uc(gen);

        // monotone: f = sum_j coef_j psi_j is nondecreasing
        double prev = -1e300;
        for (double x : fine) {
            double f = 0.0;
            for (int j = 0; j < g.size(); ++j) f += coef[static_cast<std::size_t>(j)] * psi(x, j, g);
            CHECK(f >= prev - 1e-12);
            prev = f;
        }

        // convex: second differences of sum_j coef_j phi_j are nonnegative
        const double h = fine[1] - fine[0];
        const auto eval_convex = [&](double x) {
            double f = 0.0;
            for (int j = 0; j < g.size(); ++j) f += coef[static_cast<std::size_t>(j)] * phi(x, j, g);
            return f;
        };
        for (std::size_t k = 1; k + 1 < fine.size(); ++k) {
            const double d2 =
                eval_convex(fine[k + 1]) - 2.0 * eval_convex(fine[k]) + eval_convex(fine[k - 1]);
            CHECK(d2 >= -1e-12 * h * h - 1e-15);
        }
    }

    // a clearly negative coefficient breaks monotonicity somewhere
    std::vector<double> bad(static_cast<std::size_t>(g.size()), 1.0);
    bad[4] = -3.0;
    bool decreased = false;
    double prev = -1e300;
    for (double x : fine) {
        double f = 0.0;
        for (int j = 0; j < g.size(); ++j) f += bad[static_cast<std::size_t>(j)] * psi(x, j, g);
        if (f < prev - 1e-12) decreased = true;
        prev = f;
    }
    CHECK(decreased);
}
