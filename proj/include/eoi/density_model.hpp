#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "eoi/givens.hpp"
#include "eoi/rng.hpp"
#include "eoi/sampler.hpp"

namespace eoi {

/// Distribution of the structural nonzero count of one fixed row after t
/// random rotations: probs[k-1] = p(t, k) for k = 1..n.
struct RowNnzDistribution {
    std::size_t n = 0;
    std::size_t t = 0;
    std::vector<double> probs;

    double prob(std::size_t k) const {
        if (k < 1 || k > n) throw std::invalid_argument("RowNnzDistribution::prob: k out of range");
        return probs[k - 1];
    }
};

namespace detail {

inline double choose2(double x) { return x * (x - 1.0) / 2.0; }

/// One step of the recurrence
///   p(t+1, k+1) = p(t, k+1) * [C(k+1,2) + C(n-k-1,2)] / C(n,2)
///               + p(t, k)   *  k * (n-k)              / C(n,2)
/// applied in place; p is 1-based in k with p[0] unused.
inline void recurrence_step(std::vector<double>& p, std::size_t n) {
    const double pairs = choose2(static_cast<double>(n));
    std::vector<double> next(p.size(), 0.0);
    for (std::size_t k1 = 1; k1 <= n; ++k1) {
        const double k = static_cast<double>(k1 - 1);
        const double stay = (choose2(k + 1.0) + choose2(static_cast<double>(n) - k - 1.0)) / pairs;
        double v = p[k1] * stay;
        if (k1 >= 2) v += p[k1 - 1] * (k * (static_cast<double>(n) - k) / pairs);
        next[k1] = v;
    }
    p.swap(next);
}

} // namespace detail

/// p(t, .) for a fixed row, from the base condition p(0, 1) = 1. O(t*n).
inline RowNnzDistribution row_nnz_distribution(std::size_t n, std::size_t t) {
    if (n < 2) throw std::domain_error("row_nnz_distribution: n must be >= 2");
    std::vector<double> p(n + 1, 0.0);
    p[1] = 1.0;
    for (std::size_t step = 0; step < t; ++step) detail::recurrence_step(p, n);
    RowNnzDistribution dist;
    dist.n = n;
    dist.t = t;
    dist.probs.assign(p.begin() + 1, p.end());
    return dist;
}

inline double expected_density(const RowNnzDistribution& dist) {
    double s = 0.0;
    for (std::size_t k = 1; k <= dist.n; ++k) s += static_cast<double>(k) * dist.probs[k - 1];
    return s / static_cast<double>(dist.n);
}

/// E[dens(A(t))] = (1/n) * sum_k k * p(t, k).
inline double expected_density(std::size_t n, std::size_t t) {
    return expected_density(row_nnz_distribution(n, t));
}

/// Expected density for every t in [0, t_max] from a single DP pass.
inline std::vector<double> expected_density_curve(std::size_t n, std::size_t t_max) {
    if (n < 2) throw std::domain_error("expected_density_curve: n must be >= 2");
    std::vector<double> p(n + 1, 0.0);
    p[1] = 1.0;
    std::vector<double> curve;
    curve.reserve(t_max + 1);
    for (std::size_t t = 0; t <= t_max; ++t) {
        double s = 0.0;
        for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * p[k];
        curve.push_back(s / static_cast<double>(n));
        if (t < t_max) detail::recurrence_step(p, n);
    }
    return curve;
}

struct RotationBudget {
    std::size_t t = 0;
    /// Expected density at t is still below the requested d; the query was
    /// answered against the reachable target 1 - 1e-9.
    bool saturated = false;
};

/// Smallest t with expected_density(n, t) >= d; 0 when d <= 1/n. Targets
/// beyond 1 - 1e-9 are capped there, since density 1 is reached only in
/// the limit.
inline RotationBudget rotations_for_density(std::size_t n, double d) {
    if (n < 2) throw std::domain_error("rotations_for_density: n must be >= 2");
    if (!(d >= 0.0 && d <= 1.0)) throw std::domain_error("rotations_for_density: d must lie in [0, 1]");
    const double effective = std::min(d, 1.0 - 1e-9);
    std::vector<double> p(n + 1, 0.0);
    p[1] = 1.0;
    RotationBudget out;
    for (;;) {
        double s = 0.0;
        for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * p[k];
        const double ed = s / static_cast<double>(n);
        if (ed >= effective) {
            out.saturated = ed < d;
            return out;
        }
        detail::recurrence_step(p, n);
        ++out.t;
    }
}

struct McDensity {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
};

namespace detail {

/// Welford accumulator; the naive sum-of-squares formula cancels
/// catastrophically when all samples coincide.
struct RunningMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    double stderr_of_mean() const {
        if (count < 2) return 0.0;
        const double var = std::max(m2, 0.0) / static_cast<double>(count - 1);
        return std::sqrt(var / static_cast<double>(count));
    }
};

} // namespace detail

/// Empirical mean density of products of t random rotations, with the
/// standard error over trials (0 for a single trial).
inline McDensity monte_carlo_density(std::size_t n, std::size_t t, std::size_t trials, Rng& rng,
                                     const AngleMode& mode = AngleMode::uniform()) {
    if (trials < 1) throw std::invalid_argument("monte_carlo_density: trials must be >= 1");
    detail::RunningMoments acc;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        auto a = SparseOrthoMatrix::embedded_identity(n, n);
        for (std::size_t step = 0; step < t; ++step)
            a.apply_rotation_right(random_rotation(static_cast<std::uint32_t>(n), mode, rng));
        acc.add(a.density());
    }
    return McDensity{acc.mean, acc.stderr_of_mean()};
}

/// Mean and standard error at every t in [0, t_max], reusing each trial's
/// rotation path incrementally (trials stay independent across seeds; the
/// per-t means share trials, exactly as a sampled growth curve does).
inline std::vector<McDensity> monte_carlo_density_curve(std::size_t n, std::size_t t_max,
                                                        std::size_t trials, Rng& rng,
                                                        const AngleMode& mode = AngleMode::uniform()) {
    if (trials < 1) throw std::invalid_argument("monte_carlo_density_curve: trials must be >= 1");
    std::vector<detail::RunningMoments> acc(t_max + 1);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        auto a = SparseOrthoMatrix::embedded_identity(n, n);
        for (std::size_t t = 0; t <= t_max; ++t) {
            acc[t].add(a.density());
            if (t < t_max)
                a.apply_rotation_right(random_rotation(static_cast<std::uint32_t>(n), mode, rng));
        }
    }
    std::vector<McDensity> curve(t_max + 1);
    for (std::size_t t = 0; t <= t_max; ++t) curve[t] = McDensity{acc[t].mean, acc[t].stderr_of_mean()};
    return curve;
}

/// Rotation count at which the expected-density curve switches from convex
/// to concave when plotted against log t, i.e. the argmax of t * (E(t+1) -
/// E(t)). This is the visual "critical point" of the published curve; on a
/// linear axis the curvature flips earlier.
inline std::size_t log_axis_inflection(const std::vector<double>& curve) {
    std::size_t arg = 1;
    double best = -1.0;
    for (std::size_t t = 1; t + 1 < curve.size(); ++t) {
        const double v = static_cast<double>(t) * (curve[t + 1] - curve[t]);
        if (v > best) {
            best = v;
            arg = t;
        }
    }
    return arg;
}

/// Linear-axis convexity transition: first t whose centered second
/// difference turns negative.
inline std::size_t linear_axis_inflection(const std::vector<double>& curve) {
    for (std::size_t t = 1; t + 1 < curve.size(); ++t)
        if (curve[t + 1] - 2.0 * curve[t] + curve[t - 1] < 0.0) return t;
    return curve.empty() ? 0 : curve.size() - 1;
}

} // namespace eoi
