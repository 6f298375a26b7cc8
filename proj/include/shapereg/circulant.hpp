#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "shapereg/grid_kernel.hpp"
#include "shapereg/rng.hpp"
#include "shapereg/toeplitz.hpp"

namespace shapereg {

// In-place iterative radix-2 Cooley-Tukey transform.  forward computes
// X_k = sum_j x_j e^{-2 pi i j k / d} (unnormalized); inverse includes the
// 1/d factor.  Throws std::invalid_argument unless the length is a power
// of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

// Nonnegative circulant embedding of an SPD Toeplitz matrix, following
// Wood & Chan (1994).  The base row keeps the m original lags verbatim,
// extends with exact kernel values out to d/2 and mirrors the rest, so the
// top-left m x m block of the circulant equals the target matrix exactly.
class CirculantEmbedding {
  public:
    // extended_lag(j) must return the covariance at lag j for j in
    // [m, d/2]; lags below m always come from t.first_row.
    static CirculantEmbedding build(const ToeplitzSpd& t,
                                    const std::function<double(std::size_t)>& extended_lag,
                                    int g_max = 20);

    // Convenience: lags are j * grid.spacing under the Matern kernel.
    static CirculantEmbedding build(const RegularGrid& grid, const MaternParams& p,
                                    int g_max = 20);

    std::size_t grid_size() const { return m_; }      // m
    std::size_t embed_order() const { return d_; }    // d, power of two
    const std::vector<double>& base_row() const { return base_row_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    // One complex synthesis yields two independent N_m(0, tau2 * K) draws
    // (real and imaginary parts).  Consumes 2d standard normals.
    std::pair<std::vector<double>, std::vector<double>> sample_pair(RngStream& rng,
                                                                    double tau2 = 1.0) const;

  private:
    CirculantEmbedding() = default;

    std::size_t m_ = 0;
    std::size_t d_ = 0;
    std::vector<double> base_row_;
    std::vector<double> eigenvalues_;  // clamped to >= 0
};

// Hands out one prior draw at a time, caching the second draw of each
// synthesized pair.  The cache stores unit-variance draws and is scaled by
// sqrt(tau2) at consumption, so tau2 may change between calls; reset() must
// be called when the kernel hyperparameters change.
class PriorSampler {
  public:
    explicit PriorSampler(std::shared_ptr<const CirculantEmbedding> emb)
        : emb_(std::move(emb)) {}

    std::vector<double> draw(double tau2, RngStream& rng);

    void reset(std::shared_ptr<const CirculantEmbedding> emb) {
        emb_ = std::move(emb);
        cached_unit_.reset();
    }

    const CirculantEmbedding& embedding() const { return *emb_; }

  private:
    std::shared_ptr<const CirculantEmbedding> emb_;
    std::optional<std::vector<double>> cached_unit_;
};

}  // namespace shapereg
