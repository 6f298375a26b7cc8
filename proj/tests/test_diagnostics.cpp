#include <cmath>
#include <vector>

#include <doctest.h>

#include "shapereg/diagnostics.hpp"
#include "shapereg/rng.hpp"

using namespace shapereg;

TEST_CASE("ess of an iid series is close to its length") {
    RngStream rng(127);
    std::vector<double> v(10000);
    for (auto& z : v) z = rng.normal();
    const auto e = effective_sample_size(v);
    CHECK_FALSE(e.constant_series);
    CHECK(e.ess >= 8000.0);
    CHECK(e.ess <= 10000.0);
}

TEST_CASE("ess of an AR(1) chain matches the analytic factor") {
    // rho = 0.9: asymptotic ESS is n (1-rho)/(1+rho) = n/19
    RngStream rng(131);
    const double rho = 0.9;
    const std::size_t n = 100000;
    std::vector<double> v(n);
    v[0] = rng.normal();
    const double innov = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 1; i < n; ++i) v[i] = rho * v[i - 1] + innov * rng.normal();
    const auto e = effective_sample_size(v);
    const double expected = static_cast<double>(n) / 19.0;
    CHECK(e.ess >= 0.8 * expected);
    CHECK(e.ess <= 1.2 * expected);
}

TEST_CASE("ess of an antithetic series clamps at n") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? 1.0 : -1.0;
    const auto e = effective_sample_size(v);
    CHECK(e.ess == 1000.0);
    CHECK_FALSE(e.constant_series);
}

TEST_CASE("ess flags constant series") {
    const std::vector<double> v(500, 3.14);
    const auto e = effective_sample_size(v);
    CHECK(e.constant_series);
    CHECK(e.ess == 500.0);
}

TEST_CASE("ess requires a minimum length") {
    const std::vector<double> v(9, 1.0);
    CHECK_THROWS_AS(effective_sample_size(v), std::invalid_argument);
}

TEST_CASE("mspe") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(mspe(a, a) == 0.0);
    const std::vector<double> b{2.0, 2.0, 5.0};
    CHECK(mspe(a, b) == doctest::Approx((1.0 + 0.0 + 4.0) / 3.0).epsilon(1e-15));
    const std::vector<double> onev{1.0};
    const std::vector<double> twov{1.0, 2.0};
    CHECK_THROWS_AS(mspe(onev, twov), std::invalid_argument);

    RngStream rng(137);
    std::vector<double> p(50), o(50);
    for (std::size_t i = 0; i < 50; ++i) {
        p[i] = rng.normal();
        o[i] = rng.normal();
    }
    double direct = 0.0;
    for (std::size_t i = 0; i < 50; ++i) direct += (p[i] - o[i]) * (p[i] - o[i]);
    direct /= 50.0;
    CHECK(mspe(p, o) == doctest::Approx(direct).epsilon(1e-15));
}

TEST_CASE("function_value_ess returns a positive estimate per test point") {
    RngStream gen(139);
    const int n = 20;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
        y[static_cast<std::size_t>(i)] =
            std::log(20.0 * x[static_cast<std::size_t>(i)] + 1.0) + 0.1 * gen.normal();
    }
    FitConfig cfg;
    cfg.n_iter = 400;
    cfg.burn_in = 100;
    cfg.seed = 31;
    const Chain chain = run_chain(x, y, cfg);
    const std::vector<double> grid_x{0.1, 0.5, 0.9};
    const auto ess = function_value_ess(chain, grid_x);
    REQUIRE(ess.size() == 3);
    for (double e : ess) {
        CHECK(e > 0.0);
        CHECK(e <= 300.0);
    }
}
