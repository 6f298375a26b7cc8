#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace shapereg {

// Deterministic random stream with hand-rolled variate transforms.
// std::mt19937_64 gives a portable bit stream for a given seed; the
// transforms below (53-bit uniform, polar-method normal, Marsaglia-Tsang
// gamma) are implemented here rather than via std::*_distribution so the
// generated sequences are identical across standard libraries.  Seed replay
// must reproduce runs byte for byte.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_raw() { return eng_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform on (0, 1); safe to pass through log().
    double uniform_pos() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return u;
    }

    // Standard normal via Marsaglia's polar method; caches the spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Gamma(shape, scale) by Marsaglia & Tsang (2000) squeeze; shape < 1
    // handled with the standard boost u^{1/shape}.
    double gamma(double shape, double scale) {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw std::invalid_argument("gamma: shape and scale must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    // Inverse-gamma with given shape and rate: if X ~ Gamma(shape, 1/rate)
    // then 1/X ~ InvGamma(shape, rate).
    double inverse_gamma(double shape, double rate) {
        if (!(rate > 0.0))
            throw std::invalid_argument("inverse_gamma: rate must be positive");
        return 1.0 / gamma(shape, 1.0 / rate);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace shapereg
