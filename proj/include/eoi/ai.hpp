#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "eoi/matrix.hpp"

namespace eoi {

/// Squared Frobenius norm of (A^T A - I) with A = W .* M.
inline double ai_loss(const Matrix& w, const std::vector<std::uint8_t>& mask) {
    if (mask.size() != w.rows() * w.cols()) throw std::invalid_argument("ai_loss: mask shape mismatch");
    Matrix a = w;
    for (std::size_t at = 0; at < mask.size(); ++at)
        if (!mask[at]) a.data()[at] = 0.0;
    Matrix g = gram_of_columns(a);
    double s = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c)
        for (std::size_t r = 0; r < g.rows(); ++r) {
            const double d = g(r, c) - (r == c ? 1.0 : 0.0);
            s += d * d;
        }
    return s;
}

/// Analytic gradient 4 * A (A^T A - I), restricted to unmasked entries.
inline Matrix ai_gradient(const Matrix& w, const std::vector<std::uint8_t>& mask) {
    if (mask.size() != w.rows() * w.cols()) throw std::invalid_argument("ai_gradient: mask shape mismatch");
    Matrix a = w;
    for (std::size_t at = 0; at < mask.size(); ++at)
        if (!mask[at]) a.data()[at] = 0.0;
    Matrix g = gram_of_columns(a);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    Matrix grad = matmul(a, g);
    for (std::size_t at = 0; at < grad.data().size(); ++at)
        grad.data()[at] = mask[at] ? 4.0 * grad.data()[at] : 0.0;
    return grad;
}

struct AIResult {
    Matrix weights;                 // masked entries exactly zero
    std::vector<double> loss_trace; // initial loss plus one value per iteration
    std::size_t iterations = 0;
    double wall_seconds = 0.0;
    bool success = true;
};

/// Gradient descent on the masked orthogonality loss. A step that would
/// increase the loss is retried with a halved step (up to 30 halvings, the
/// reduction persisting), so the recorded trace never increases. A
/// non-finite loss after the halvings are exhausted aborts and is reported
/// as failure together with the trace so far.
inline AIResult ai_optimize(const Matrix& w, const std::vector<std::uint8_t>& mask,
                            std::size_t iters, double step = 0.01) {
    if (!(step > 0.0)) throw std::domain_error("ai_optimize: step must be positive");
    if (mask.size() != w.rows() * w.cols()) throw std::invalid_argument("ai_optimize: mask shape mismatch");

    const auto started = std::chrono::steady_clock::now();

    Matrix a = w;
    for (std::size_t at = 0; at < mask.size(); ++at)
        if (!mask[at]) a.data()[at] = 0.0;

    auto loss_from_gram = [](const Matrix& g) {
        double s = 0.0;
        for (std::size_t c = 0; c < g.cols(); ++c)
            for (std::size_t r = 0; r < g.rows(); ++r) {
                const double d = g(r, c) - (r == c ? 1.0 : 0.0);
                s += d * d;
            }
        return s;
    };

    AIResult result;
    result.loss_trace.reserve(iters + 1);
    Matrix gram = gram_of_columns(a); // kept in sync with a
    double current = loss_from_gram(gram);
    result.loss_trace.push_back(current);

    for (std::size_t iter = 0; iter < iters; ++iter) {
        Matrix deviation = gram;
        for (std::size_t i = 0; i < deviation.rows(); ++i) deviation(i, i) -= 1.0;
        Matrix grad = matmul(a, deviation);

        double trial_loss = 0.0;
        bool moved = false;
        Matrix candidate, candidate_gram;
        for (int halving = 0; halving <= 30; ++halving) {
            candidate = a;
            for (std::size_t at = 0; at < candidate.data().size(); ++at)
                if (mask[at]) candidate.data()[at] -= step * 4.0 * grad.data()[at];
            candidate_gram = gram_of_columns(candidate);
            trial_loss = loss_from_gram(candidate_gram);
            if (std::isfinite(trial_loss) && trial_loss <= current) {
                moved = true;
                break;
            }
            step *= 0.5;
        }

        result.iterations = iter + 1;
        if (moved) {
            a = std::move(candidate);
            gram = std::move(candidate_gram);
            current = trial_loss;
            result.loss_trace.push_back(current);
        } else if (!std::isfinite(trial_loss)) {
            result.success = false;
            break;
        } else {
            result.loss_trace.push_back(current); // stuck at a stationary point
        }
    }

    result.weights = std::move(a);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

} // namespace eoi
