#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "oracle.hpp"
#include "shapereg/circulant.hpp"
#include "shapereg/errors.hpp"
#include "shapereg/grid_kernel.hpp"
#include "shapereg/rng.hpp"

using namespace shapereg;

using cvec = std::vector<std::complex<double>>;

TEST_CASE("fft basics") {
    SUBCASE("impulse transforms to all ones") {
        cvec a{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
        fft(a, false);
        for (const auto& z : a) {
            CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(z.imag()) <= 1e-14);
        }
    }
    SUBCASE("constant transforms to a single spike") {
        cvec a(8, {2.0, 0.0});
        fft(a, false);
        CHECK(a[0].real() == doctest::Approx(16.0).epsilon(1e-14));
        for (std::size_t k = 1; k < a.size(); ++k) CHECK(std::abs(a[k]) <= 1e-12);
    }
    SUBCASE("forward then inverse is the identity") {
        RngStream rng(100);
        cvec a(64);
        for (auto& z : a) z = {rng.normal(), rng.normal()};
        cvec b = a;
        fft(b, false);
        fft(b, true);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12);
    }
    SUBCASE("matches the naive DFT") {
        RngStream rng(101);
        for (std::size_t n : {2u, 8u, 32u, 128u}) {
            cvec a(n);
            for (auto& z : a) z = {rng.normal(), rng.normal()};
            cvec b = a;
            fft(b, false);
            const cvec ref = oracle::naive_dft(a, false);
            for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(b[k] - ref[k]) <= 1e-10);
            cvec c = a;
            fft(c, true);
            const cvec ref_inv = oracle::naive_dft(a, true);
            for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(c[k] - ref_inv[k]) <= 1e-10);
        }
    }
    SUBCASE("non-power-of-two length is rejected") {
        cvec a(12);
        CHECK_THROWS_AS(fft(a, false), std::invalid_argument);
    }
}

TEST_CASE("embedding of a 2-point grid") {
    const ToeplitzSpd t({1.0, 0.6});
    const auto e = CirculantEmbedding::build(t, [](std::size_t) { return 0.0; });
    CHECK(e.grid_size() == 2);
    CHECK(e.embed_order() == 2);
    REQUIRE(e.base_row().size() == 2);
    CHECK(e.base_row()[0] == 1.0);
    CHECK(e.base_row()[1] == 0.6);
    REQUIRE(e.eigenvalues().size() == 2);
    CHECK(e.eigenvalues()[0] == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(e.eigenvalues()[1] == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("base row keeps original lags and mirrors the extension") {
    const RegularGrid g(2);  // 3 points, d = 4
    const MaternParams p{0.75, 0.5};
    const auto e = CirculantEmbedding::build(g, p);
    CHECK(e.embed_order() == 4);
    const auto& row = e.base_row();
    const ToeplitzSpd t = kernel_first_row(g, p);
    CHECK(row[0] == t.first_row[0]);
    CHECK(row[1] == t.first_row[1]);
    CHECK(row[2] == t.first_row[2]);
    CHECK(row[3] == row[1]);  // mirror
}

TEST_CASE("embedding is exact: inverse transform returns the base row") {
    for (int N : {15, 63}) {
        const RegularGrid g(N);
        const MaternParams p{0.75, 0.3};
        const auto e = CirculantEmbedding::build(g, p);
        const ToeplitzSpd t = kernel_first_row(g, p);

        cvec spec(e.embed_order());
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] = {e.eigenvalues()[k], 0.0};
        fft(spec, true);
        for (std::size_t j = 0; j < t.order(); ++j)
            CHECK(std::abs(spec[j].real() - t.first_row[j]) <= 1e-12);
    }
}

TEST_CASE("eigenvalues are nonnegative and sampling hits the target covariance") {
    const ToeplitzSpd white({1.0, 0.0, 0.0, 0.0});
    const auto e = CirculantEmbedding::build(white, [](std::size_t) { return 0.0; });
    for (double lam : e.eigenvalues()) CHECK(lam >= 0.0);

    RngStream rng(2024);
    const std::size_t m = e.grid_size();
    const int pairs = 25000;
    Matrix cov(m, m, 0.0);
    for (int t = 0; t < pairs; ++t) {
        const auto [a, b] = e.sample_pair(rng);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                cov(i, j) += a[i] * a[j] + b[i] * b[j];
    }
    const double n_draws = 2.0 * pairs;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double target = i == j ? 1.0 : 0.0;
            CHECK(std::abs(cov(i, j) / n_draws - target) <= 0.05);
        }
}

TEST_CASE("the two draws of a pair are uncorrelated") {
    const RegularGrid g(7);
    const auto e = CirculantEmbedding::build(g, {0.5, 0.2});
    RngStream rng(77);
    const std::size_t m = e.grid_size();
    const int n = 100000;
    std::vector<double> cross(m, 0.0);
    for (int t = 0; t < n; ++t) {
        const auto [a, b] = e.sample_pair(rng);
        for (std::size_t i = 0; i < m; ++i) cross[i] += a[i] * b[i];
    }
    for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(cross[i] / n) <= 0.02);
}

TEST_CASE("tau2 scales the sampled process") {
    const RegularGrid g(5);
    const auto e = CirculantEmbedding::build(g, {0.75, 0.4});
    RngStream rng1(5), rng2(5);
    const auto [a1, b1] = e.sample_pair(rng1, 1.0);
    const auto [a4, b4] = e.sample_pair(rng2, 4.0);
    for (std::size_t i = 0; i < a1.size(); ++i) {
        CHECK(a4[i] == doctest::Approx(2.0 * a1[i]).epsilon(1e-12));
        CHECK(b4[i] == doctest::Approx(2.0 * b1[i]).epsilon(1e-12));
    }
}

TEST_CASE("same seed reproduces draws exactly") {
    const RegularGrid g(9);
    const auto e = CirculantEmbedding::build(g, {0.9, 0.25});
    RngStream r1(31), r2(31);
    const auto [a1, b1] = e.sample_pair(r1);
    const auto [a2, b2] = e.sample_pair(r2);
    CHECK(a1 == a2);
    CHECK(b1 == b2);
}

TEST_CASE("enlargement budget failure raises EmbeddingError") {
    // Very smooth, long lengthscale: the first power of two is not
    // nonnegative, and a tight budget forbids doubling far enough.
    const RegularGrid g(63);
    CHECK_THROWS_AS(CirculantEmbedding::build(g, {1.0, 1.0}, 7), EmbeddingError);
}

TEST_CASE("prior sampler caches one draw and invalidates on reset") {
    const RegularGrid g(6);
    auto e = std::make_shared<const CirculantEmbedding>(CirculantEmbedding::build(g, {0.75, 0.4}));
    PriorSampler sampler(e);
    RngStream rng(64), rng_ref(64);

    // draws 1 and 2 come from one synthesis: they must match sample_pair
    const auto d1 = sampler.draw(1.0, rng);
    const auto d2 = sampler.draw(1.0, rng);
    const auto [p1, p2] = e->sample_pair(rng_ref, 1.0);
    CHECK(d1 == p1);
    CHECK(d2 == p2);

    // tau2 applied at consumption: cached unit draw is scaled
    const auto d3 = sampler.draw(9.0, rng);  // new synthesis, first of pair
    const auto d4 = sampler.draw(4.0, rng);  // cached second, different tau2
    const auto [q1, q2] = e->sample_pair(rng_ref, 1.0);
    for (std::size_t i = 0; i < d3.size(); ++i) {
        CHECK(d3[i] == doctest::Approx(3.0 * q1[i]).epsilon(1e-12));
        CHECK(d4[i] == doctest::Approx(2.0 * q2[i]).epsilon(1e-12));
    }

    // reset drops the cache: the next draw starts a fresh synthesis
    sampler.draw(1.0, rng);  // fills cache
    sampler.reset(e);
    RngStream probe(999);
    const auto d5 = sampler.draw(1.0, probe);
    RngStream probe_ref(999);
    const auto [r1, r2] = e->sample_pair(probe_ref, 1.0);
    CHECK(d5 == r1);
}
