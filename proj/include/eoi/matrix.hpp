#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace eoi {

/// Dense column-major matrix of doubles. Small sizes only (up to a few
/// thousand); value semantics throughout.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    double* col(std::size_t c) { return data_.data() + c * rows_; }
    const double* col(std::size_t c) const { return data_.data() + c * rows_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t c = 0; c < cols_; ++c)
            for (std::size_t r = 0; r < rows_; ++r)
                t(c, r) = (*this)(r, c);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// C = A * B, accumulated column by column so access stays contiguous.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c.col(j);
        for (std::size_t l = 0; l < k; ++l) {
            const double blj = b(l, j);
            if (blj == 0.0) continue;
            const double* al = a.col(l);
            for (std::size_t i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
    return c;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        const double xc = x[c];
        if (xc == 0.0) continue;
        const double* ac = a.col(c);
        for (std::size_t r = 0; r < a.rows(); ++r) y[r] += ac[r] * xc;
    }
    return y;
}

/// A^T * A (cols x cols), symmetric; only the upper triangle is computed
/// and mirrored.
inline Matrix gram_of_columns(const Matrix& a) {
    const std::size_t n = a.cols(), m = a.rows();
    Matrix g(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double* aj = a.col(j);
        for (std::size_t i = 0; i <= j; ++i) {
            const double* ai = a.col(i);
            double s = 0.0;
            for (std::size_t r = 0; r < m; ++r) s += ai[r] * aj[r];
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

} // namespace eoi
