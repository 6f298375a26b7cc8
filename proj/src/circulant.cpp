#include "shapereg/circulant.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shapereg/errors.hpp"

namespace shapereg {
namespace {

constexpr double kEigSlack = 1e-9;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t d = 1;
    while (d < n) d <<= 1;
    return d;
}

}  // namespace

void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi_v<double> / static_cast<double>(len) *
                           (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv_n;
    }
}

CirculantEmbedding CirculantEmbedding::build(
    const ToeplitzSpd& t, const std::function<double(std::size_t)>& extended_lag, int g_max) {
    const std::size_t m = t.order();
    if (m < 2) throw std::invalid_argument("CirculantEmbedding: need m >= 2");

    std::size_t d = next_pow2(2 * (m - 1));
    for (;;) {
        if (d > (std::size_t{1} << g_max))
            throw EmbeddingError("circulant embedding not nonnegative within enlargement budget (d > 2^" +
                                 std::to_string(g_max) + ")");
        // Base row: original lags verbatim, exact kernel values out to d/2,
        // then the mirror image (the circulant must be symmetric).
        std::vector<double> row(d);
        for (std::size_t j = 0; j <= d / 2; ++j)
            row[j] = j < m ? t.first_row[j] : extended_lag(j);
        for (std::size_t j = d / 2 + 1; j < d; ++j) row[j] = row[d - j];

        std::vector<std::complex<double>> spec(row.begin(), row.end());
        fft(spec, false);
        bool ok = true;
        std::vector<double> eig(d);
        for (std::size_t k = 0; k < d; ++k) {
            const double lam = spec[k].real();
            if (lam < -kEigSlack) {
                ok = false;
                break;
            }
            eig[k] = lam < 0.0 ? 0.0 : lam;
        }
        if (ok) {
            CirculantEmbedding e;
            e.m_ = m;
            e.d_ = d;
            e.base_row_ = std::move(row);
            e.eigenvalues_ = std::move(eig);
            return e;
        }
        d <<= 1;
    }
}

CirculantEmbedding CirculantEmbedding::build(const RegularGrid& grid, const MaternParams& p,
                                             int g_max) {
    return build(kernel_first_row(grid, p),
                 [&grid, p](std::size_t j) { return matern(j * grid.spacing, p); }, g_max);
}

std::pair<std::vector<double>, std::vector<double>> CirculantEmbedding::sample_pair(
    RngStream& rng, double tau2) const {
    if (!(tau2 > 0.0)) throw std::invalid_argument("sample_pair: tau2 must be positive");
    const std::size_t d = d_;
    std::vector<std::complex<double>> z(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double scale = std::sqrt(eigenvalues_[k]);
        z[k] = {scale * rng.normal(), scale * rng.normal()};
    }
    // y_j = d^{-1/2} sum_k sqrt(lambda_k) zeta_k e^{+2 pi i j k / d}:
    // the inverse transform supplies e^{+...}/d, so multiply by d/sqrt(d).
    fft(z, true);
    const double s = std::sqrt(static_cast<double>(d) * tau2);
    std::vector<double> re(m_), im(m_);
    for (std::size_t j = 0; j < m_; ++j) {
        re[j] = s * z[j].real();
        im[j] = s * z[j].imag();
    }
    return {std::move(re), std::move(im)};
}

std::vector<double> PriorSampler::draw(double tau2, RngStream& rng) {
    if (!(tau2 > 0.0)) throw std::invalid_argument("PriorSampler::draw: tau2 must be positive");
    const double s = std::sqrt(tau2);
    if (cached_unit_) {
        std::vector<double> out = std::move(*cached_unit_);
        cached_unit_.reset();
        for (auto& v : out) v *= s;
        return out;
    }
    auto [first, second] = emb_->sample_pair(rng, 1.0);
    cached_unit_ = std::move(second);
    for (auto& v : first) v *= s;
    return first;
}

}  // namespace shapereg
