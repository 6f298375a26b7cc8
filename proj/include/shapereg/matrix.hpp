#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace shapereg {

// Dense row-major matrix.  Deliberately minimal: storage, indexing and the
// few products the samplers need.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    std::span<const double> row(std::size_t i) const {
        return {a_.data() + i * cols_, cols_};
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

inline std::vector<double> matvec(const Matrix& m, std::span<const double> v) {
    if (v.size() != m.cols()) throw std::invalid_argument("matvec: size mismatch");
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.data() + i * m.cols();
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

}  // namespace shapereg
