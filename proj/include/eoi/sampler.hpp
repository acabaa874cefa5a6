#pragma once

#include <cstdint>
#include <stdexcept>

#include "eoi/givens.hpp"
#include "eoi/rng.hpp"
#include "eoi/sparse_ortho.hpp"

namespace eoi {

/// Bookkeeping for one sampling run.
struct SampleStats {
    std::size_t rotations = 0;
    /// Target density was below the identity floor 1/n (or 1/cols); the
    /// sparsest orthogonal matrix was returned instead.
    bool floor_warning = false;
};

namespace detail {

/// Core of Algorithm 1 on the wide canonical form [I | 0]: compose random
/// rotations of size `cols` until the structural density reaches d.
inline SparseOrthoMatrix sample_wide(std::size_t rows, std::size_t cols, double d,
                                     const AngleMode& mode, Rng& rng, SampleStats* stats) {
    if (!(d >= 0.0 && d <= 1.0)) throw std::domain_error("sample: density must lie in [0, 1]");
    SparseOrthoMatrix a = SparseOrthoMatrix::embedded_identity(rows, cols);
    SampleStats local;
    local.floor_warning = d < a.density();
    if (cols >= 2) {
        while (a.density() < d) {
            a.apply_rotation_right(random_rotation(static_cast<std::uint32_t>(cols), mode, rng));
            ++local.rotations;
        }
    }
    if (stats) *stats = local;
    return a;
}

} // namespace detail

/// Random n x n orthogonal matrix of target density d, built by composing
/// uniformly drawn Givens rotations. The structural density lands in
/// [max(d, 1/n), max(d, 1/n) + 1/n]: the loop stops at the first rotation
/// reaching the target and each rotation adds at most one nonzero per row.
/// n = 1 returns the 1x1 identity.
inline SparseOrthoMatrix sample_square(std::size_t n, double d, const AngleMode& mode, Rng& rng,
                                       SampleStats* stats = nullptr) {
    if (n == 0) throw std::invalid_argument("sample_square: n must be positive");
    return detail::sample_wide(n, n, d, mode, rng, stats);
}

/// Random rows x cols matrix, orthonormal along the shorter side. Wide
/// shapes start from [I | 0] and rotate in dimension cols; tall shapes are
/// the transpose of a wide sample, so their columns are orthonormal.
inline SparseOrthoMatrix sample_rectangular(std::size_t rows, std::size_t cols, double d,
                                            const AngleMode& mode, Rng& rng,
                                            SampleStats* stats = nullptr) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("sample_rectangular: shape must be positive");
    if (rows <= cols) return detail::sample_wide(rows, cols, d, mode, rng, stats);
    return detail::sample_wide(cols, rows, d, mode, rng, stats).transposed();
}

} // namespace eoi
