#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "eoi/givens.hpp"
#include "eoi/matrix.hpp"
#include "eoi/rng.hpp"

namespace eoi {

/// Sparse matrix with exactly tracked structural support. Values are held
/// densely in column-major order; `support` marks the positions that are
/// nonzero with probability 1 under the rotation union rule. Positions
/// outside the support hold the exact value 0.0. Sampling always works in
/// the wide canonical form (rows <= cols); tall matrices come out of
/// transposed(), after which the columns are the orthonormal family.
class SparseOrthoMatrix {
public:
    SparseOrthoMatrix() = default;

    /// Identity embedded in rows x cols, rows <= cols: [I | 0].
    static SparseOrthoMatrix embedded_identity(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("SparseOrthoMatrix: empty shape");
        if (rows > cols) throw std::invalid_argument("SparseOrthoMatrix: canonical form needs rows <= cols");
        SparseOrthoMatrix a;
        a.rows_ = rows;
        a.cols_ = cols;
        a.values_.assign(rows * cols, 0.0);
        a.support_.assign(rows * cols, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            a.values_[i * rows + i] = 1.0;
            a.support_[i * rows + i] = 1;
        }
        a.nnz_ = rows;
        return a;
    }

    /// Rebuild from an explicit structural triplet list (file ingestion).
    static SparseOrthoMatrix from_triplets(
        std::size_t rows, std::size_t cols,
        const std::vector<std::tuple<std::size_t, std::size_t, double>>& entries) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("SparseOrthoMatrix: empty shape");
        SparseOrthoMatrix a;
        a.rows_ = rows;
        a.cols_ = cols;
        a.values_.assign(rows * cols, 0.0);
        a.support_.assign(rows * cols, 0);
        for (const auto& [r, c, v] : entries) {
            if (r >= rows || c >= cols) throw std::invalid_argument("SparseOrthoMatrix: triplet out of range");
            const std::size_t at = c * rows + r;
            if (a.support_[at]) throw std::invalid_argument("SparseOrthoMatrix: duplicate triplet");
            a.support_[at] = 1;
            a.values_[at] = v;
            ++a.nnz_;
        }
        return a;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return nnz_; }
    double sigma_w() const { return sigma_w_; }

    double value(std::size_t r, std::size_t c) const { return values_[c * rows_ + r]; }
    bool in_support(std::size_t r, std::size_t c) const { return support_[c * rows_ + r] != 0; }

    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint8_t>& support() const { return support_; }

    double density() const {
        return static_cast<double>(nnz_) / (static_cast<double>(rows_) * static_cast<double>(cols_));
    }

    /// Right-compose with a Givens rotation: only columns g.i and g.j
    /// change, their new support is the row-wise union of the old two, and
    /// the nnz counter is updated in place. O(rows) work.
    void apply_rotation_right(const GivensRotation& g) {
        if (g.n != cols_) throw std::invalid_argument("apply_rotation_right: rotation size must equal cols");
        const double c = g.cos_phi();
        const double s = g.sin_phi();
        double* ci = values_.data() + static_cast<std::size_t>(g.i) * rows_;
        double* cj = values_.data() + static_cast<std::size_t>(g.j) * rows_;
        std::uint8_t* si = support_.data() + static_cast<std::size_t>(g.i) * rows_;
        std::uint8_t* sj = support_.data() + static_cast<std::size_t>(g.j) * rows_;
        for (std::size_t r = 0; r < rows_; ++r) {
            const double vi = ci[r];
            const double vj = cj[r];
            ci[r] = vi * c + vj * s;
            cj[r] = -vi * s + vj * c;
            const std::uint8_t u = si[r] | sj[r];
            nnz_ += static_cast<std::size_t>(u - si[r]) + static_cast<std::size_t>(u - sj[r]);
            si[r] = u;
            sj[r] = u;
        }
    }

    /// Multiply every value by factor > 0; support is untouched and the
    /// cumulative scale is recorded.
    void scale(double factor) {
        if (!(factor > 0.0)) throw std::domain_error("scale: sigma_w must be positive");
        for (double& v : values_) v *= factor;
        sigma_w_ *= factor;
    }

    SparseOrthoMatrix transposed() const {
        SparseOrthoMatrix t;
        t.rows_ = cols_;
        t.cols_ = rows_;
        t.nnz_ = nnz_;
        t.sigma_w_ = sigma_w_;
        t.values_.assign(values_.size(), 0.0);
        t.support_.assign(support_.size(), 0);
        for (std::size_t c = 0; c < cols_; ++c)
            for (std::size_t r = 0; r < rows_; ++r) {
                t.values_[r * t.rows_ + c] = values_[c * rows_ + r];
                t.support_[r * t.rows_ + c] = support_[c * rows_ + r];
            }
        return t;
    }

    Matrix to_dense() const {
        Matrix m(rows_, cols_);
        m.data() = values_;
        return m;
    }

    bool operator==(const SparseOrthoMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;        // column-major
    std::vector<std::uint8_t> support_; // column-major, 0/1
    std::size_t nnz_ = 0;
    double sigma_w_ = 1.0;
};

inline double density(const SparseOrthoMatrix& a) { return a.density(); }

/// Gram matrix of the shorter side (rows for wide, columns for tall), built
/// from the structural nonzeros only so sparse inputs stay cheap.
inline Matrix short_side_gram(const SparseOrthoMatrix& a) {
    const bool wide = a.rows() <= a.cols();
    const std::size_t dim = wide ? a.rows() : a.cols();
    const std::size_t other = wide ? a.cols() : a.rows();
    Matrix g(dim, dim);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    for (std::size_t o = 0; o < other; ++o) {
        idx.clear();
        val.clear();
        for (std::size_t d = 0; d < dim; ++d) {
            const std::size_t r = wide ? d : o;
            const std::size_t c = wide ? o : d;
            if (a.in_support(r, c)) {
                idx.push_back(d);
                val.push_back(a.value(r, c));
            }
        }
        for (std::size_t x = 0; x < idx.size(); ++x)
            for (std::size_t y = x; y < idx.size(); ++y) g(idx[x], idx[y]) += val[x] * val[y];
    }
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = 0; y < x; ++y) g(x, y) = g(y, x);
    return g;
}

/// Frobenius norm of (Gram - I), with the Gram taken over the shorter side
/// so an exactly row- or column-orthonormal matrix scores 0.
inline double orthogonality_score(const SparseOrthoMatrix& a) {
    Matrix g = short_side_gram(a);
    double s = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c)
        for (std::size_t r = 0; r < g.rows(); ++r) {
            const double d = g(r, c) - (r == c ? 1.0 : 0.0);
            s += d * d;
        }
    return std::sqrt(s);
}

/// Same score for a plain dense matrix (used for masked baselines).
inline double orthogonality_score(const Matrix& a) {
    const Matrix m = a.rows() <= a.cols() ? a.transposed() : a;
    Matrix g = gram_of_columns(m);
    double s = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c)
        for (std::size_t r = 0; r < g.rows(); ++r) {
            const double d = g(r, c) - (r == c ? 1.0 : 0.0);
            s += d * d;
        }
    return std::sqrt(s);
}

inline SparseOrthoMatrix scale_weights(SparseOrthoMatrix a, double sigma_w) {
    a.scale(sigma_w);
    return a;
}

/// i.i.d. Normal(0, sigma_b^2) biases; sigma_b = 0 yields exact zeros and
/// consumes no generator state.
inline std::vector<double> sample_biases(std::size_t len, double sigma_b, Rng& rng) {
    if (sigma_b < 0.0) throw std::domain_error("sample_biases: sigma_b must be nonnegative");
    std::vector<double> b(len, 0.0);
    if (sigma_b == 0.0) return b;
    for (double& v : b) v = sigma_b * rng.normal();
    return b;
}

} // namespace eoi
