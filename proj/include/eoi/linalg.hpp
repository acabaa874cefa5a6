#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eoi/matrix.hpp"
#include "eoi/rng.hpp"

namespace eoi {

/// Eigenvalues of a symmetric matrix by the classical two-sided cyclic
/// Jacobi scheme. Returns them sorted in descending order.
inline std::vector<double> symmetric_eigenvalues(Matrix s, int max_sweeps = 64) {
    if (s.rows() != s.cols()) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
    const std::size_t n = s.rows();
    if (n == 0) return {};

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
        if (std::sqrt(2.0 * off) <= 1e-15 * (1.0 + s.frobenius_norm())) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double app = s(p, p), aqq = s(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = s(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

/// Singular values by one-sided cyclic Jacobi (Hestenes): column pairs are
/// rotated until mutually orthogonal, which diagonalizes A^T A implicitly.
/// Returns the largest min(rows, cols) values in descending order.
inline std::vector<double> singular_values_jacobi(Matrix a, int max_sweeps = 64) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m == 0 || n == 0) return {};

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* cp = a.col(p);
                double* cq = a.col(q);
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t r = 0; r < m; ++r) {
                    app += cp[r] * cp[r];
                    aqq += cq[r] * cq[r];
                    apq += cp[r] * cq[r];
                }
                if (std::abs(apq) <= 1e-16 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                double t = 1.0 / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                if (zeta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t r = 0; r < m; ++r) {
                    const double vp = cp[r], vq = cq[r];
                    cp[r] = c * vp - sn * vq;
                    cq[r] = sn * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        const double* cj = a.col(j);
        for (std::size_t r = 0; r < m; ++r) s += cj[r] * cj[r];
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    sv.resize(std::min(m, n));
    return sv;
}

/// Haar-distributed orthogonal matrix: Householder QR of a Gaussian matrix
/// with the Q columns sign-corrected by the R diagonal (Mezzadri 2007).
inline Matrix haar_orthogonal(std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("haar_orthogonal: n must be positive");
    Matrix a(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) a(r, c) = rng.normal();

    Matrix q = Matrix::identity(n);
    std::vector<double> v(n);
    std::vector<double> rdiag(n, 1.0);

    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t r = k; r < n; ++r) norm += a(r, k) * a(r, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) { rdiag[k] = 0.0; continue; }

        const double alpha = a(k, k) >= 0.0 ? -norm : norm;
        rdiag[k] = alpha;
        double vnorm2 = 0.0;
        for (std::size_t r = k; r < n; ++r) {
            v[r] = a(r, k);
            if (r == k) v[r] -= alpha;
            vnorm2 += v[r] * v[r];
        }
        if (vnorm2 == 0.0) continue;

        // Reflect the trailing block of A and accumulate the product in Q.
        for (std::size_t c = k; c < n; ++c) {
            double dot = 0.0;
            for (std::size_t r = k; r < n; ++r) dot += v[r] * a(r, c);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t r = k; r < n; ++r) a(r, c) -= f * v[r];
        }
        for (std::size_t c = 0; c < n; ++c) {
            double dot = 0.0;
            for (std::size_t r = k; r < n; ++r) dot += v[r] * q(c, r);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t r = k; r < n; ++r) q(c, r) -= f * v[r];
        }
    }

    for (std::size_t c = 0; c < n; ++c) {
        if (rdiag[c] < 0.0)
            for (std::size_t r = 0; r < n; ++r) q(r, c) = -q(r, c);
    }
    return q;
}

} // namespace eoi
