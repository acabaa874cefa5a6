#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoi/rng.hpp"
#include "eoi/sampler.hpp"

namespace eoi {

/// round-half-away-from-zero, the mask-count rounding used everywhere.
inline long long round_count(double x) { return std::llround(x); }

/// How dense the central channel-mixing matrix H is sampled relative to
/// the target mask density d.
class CenterMode {
public:
    static CenterMode equal() { return CenterMode(Kind::Equal, 0.0); }
    static CenterMode sqrt() { return CenterMode(Kind::Sqrt, 0.0); }
    static CenterMode custom(double d_h) {
        if (!(d_h >= 0.0 && d_h <= 1.0)) throw std::domain_error("CenterMode::custom: density must lie in [0, 1]");
        return CenterMode(Kind::Custom, d_h);
    }

    double resolve(double d) const {
        switch (kind_) {
            case Kind::Equal: return d;
            case Kind::Sqrt: return std::sqrt(d);
            default: return d_h_;
        }
    }

private:
    enum class Kind { Equal, Sqrt, Custom };
    CenterMode(Kind k, double d_h) : kind_(k), d_h_(d_h) {}
    Kind kind_;
    double d_h_;
};

/// Convolution weights c_out x c_in x (2k+1) x (2k+1) with a binary mask.
/// The center slice carries a sparse orthogonal H; every off-center weight
/// is exactly zero, and the mask never removes a nonzero weight.
struct ConvKernel {
    std::size_t c_out = 0;
    std::size_t c_in = 0;
    std::size_t k = 0;
    std::vector<double> weights;      // index ((i*c_in + j)*K + p)*K + q, K = 2k+1
    std::vector<std::uint8_t> mask;   // same layout
    double center_density = 0.0;      // realized density of H

    std::size_t kernel_width() const { return 2 * k + 1; }
    std::size_t total() const { return c_out * c_in * kernel_width() * kernel_width(); }

    std::size_t index(std::size_t i, std::size_t j, std::size_t p, std::size_t q) const {
        const std::size_t K = kernel_width();
        return ((i * c_in + j) * K + p) * K + q;
    }

    double weight(std::size_t i, std::size_t j, std::size_t p, std::size_t q) const {
        return weights[index(i, j, p, q)];
    }
    bool masked_in(std::size_t i, std::size_t j, std::size_t p, std::size_t q) const {
        return mask[index(i, j, p, q)] != 0;
    }

    std::size_t mask_population() const {
        std::size_t pop = 0;
        for (auto b : mask) pop += b;
        return pop;
    }
};

/// Sparse delta-orthogonal kernel: H = sample_rectangular(c_out, c_in, d_H)
/// sits at the kernel centers, the initial mask is exactly the support of
/// the weights, and enough uniformly chosen zero positions of the whole
/// tensor are unfrozen to make population(mask) = round(d * total).
inline ConvKernel sample_conv(std::size_t c_out, std::size_t c_in, std::size_t k, double d,
                              const CenterMode& center_mode, Rng& rng,
                              SampleStats* stats = nullptr) {
    if (c_out == 0 || c_in == 0) throw std::invalid_argument("sample_conv: channel counts must be positive");
    if (!(d >= 0.0 && d <= 1.0)) throw std::domain_error("sample_conv: density must lie in [0, 1]");
    const double window = static_cast<double>(2 * k + 1) * static_cast<double>(2 * k + 1);
    const double d_h = center_mode.resolve(d);
    if (d_h / window > d) {
        throw std::domain_error(
            "sample_conv: center density " + std::to_string(d_h) + " exceeds the admissible maximum " +
            std::to_string(d * window) + " for target density " + std::to_string(d));
    }

    SparseOrthoMatrix h = sample_rectangular(c_out, c_in, d_h, AngleMode::uniform(), rng, stats);

    ConvKernel kernel;
    kernel.c_out = c_out;
    kernel.c_in = c_in;
    kernel.k = k;
    kernel.weights.assign(kernel.total(), 0.0);
    kernel.mask.assign(kernel.total(), 0);
    kernel.center_density = h.density();

    for (std::size_t i = 0; i < c_out; ++i)
        for (std::size_t j = 0; j < c_in; ++j) {
            const std::size_t at = kernel.index(i, j, k, k);
            kernel.weights[at] = h.value(i, j);
            kernel.mask[at] = h.in_support(i, j) ? 1 : 0;
        }

    const long long target_pop = round_count(d * static_cast<double>(kernel.total()));
    const long long initial_pop = static_cast<long long>(h.nnz());
    if (initial_pop > target_pop) {
        throw std::domain_error(
            "sample_conv: realized center density " + std::to_string(h.density()) +
            " overshoots the target mask population; maximal admissible center density is " +
            std::to_string(static_cast<double>(target_pop) / (static_cast<double>(c_out) * static_cast<double>(c_in))));
    }

    // Unfreeze: pick (target - initial) zero positions uniformly, without
    // replacement, over the whole tensor.
    std::size_t need = static_cast<std::size_t>(target_pop - initial_pop);
    if (need > 0) {
        std::vector<std::size_t> zeros;
        zeros.reserve(kernel.total() - static_cast<std::size_t>(initial_pop));
        for (std::size_t at = 0; at < kernel.total(); ++at)
            if (!kernel.mask[at]) zeros.push_back(at);
        for (std::size_t pick = 0; pick < need; ++pick) {
            const std::size_t r = pick + static_cast<std::size_t>(rng.uniform_index(zeros.size() - pick));
            std::swap(zeros[pick], zeros[r]);
            kernel.mask[zeros[pick]] = 1;
        }
    }
    return kernel;
}

/// Direct cross-correlation with circular padding and stride 1, applied to
/// mask .* weights. Reference implementation; correctness over speed.
/// Input x is c_in x h x w flattened as (channel * h + row) * w + col.
inline std::vector<double> conv_forward_circular(const ConvKernel& kernel, const std::vector<double>& x,
                                                 std::size_t h, std::size_t w) {
    const std::size_t K = kernel.kernel_width();
    if (h < K || w < K) throw std::invalid_argument("conv_forward_circular: input smaller than kernel");
    if (x.size() != kernel.c_in * h * w) throw std::invalid_argument("conv_forward_circular: input shape mismatch");

    std::vector<double> y(kernel.c_out * h * w, 0.0);
    const long long kk = static_cast<long long>(kernel.k);
    for (std::size_t o = 0; o < kernel.c_out; ++o)
        for (std::size_t j = 0; j < kernel.c_in; ++j)
            for (std::size_t p = 0; p < K; ++p)
                for (std::size_t q = 0; q < K; ++q) {
                    const double wv = kernel.weight(o, j, p, q) * (kernel.masked_in(o, j, p, q) ? 1.0 : 0.0);
                    if (wv == 0.0) continue;
                    const long long dr = static_cast<long long>(p) - kk;
                    const long long dc = static_cast<long long>(q) - kk;
                    for (std::size_t r = 0; r < h; ++r) {
                        const std::size_t rr =
                            static_cast<std::size_t>((static_cast<long long>(r) + dr + static_cast<long long>(h)) %
                                                     static_cast<long long>(h));
                        const double* xrow = x.data() + (j * h + rr) * w;
                        double* yrow = y.data() + (o * h + r) * w;
                        for (std::size_t c = 0; c < w; ++c) {
                            const std::size_t cc = static_cast<std::size_t>(
                                (static_cast<long long>(c) + dc + static_cast<long long>(w)) %
                                static_cast<long long>(w));
                            yrow[c] += wv * xrow[cc];
                        }
                    }
                }
    return y;
}

} // namespace eoi
