#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoi/ai.hpp"
#include "eoi/allocators.hpp"
#include "eoi/conv.hpp"
#include "eoi/linalg.hpp"
#include "eoi/matrix.hpp"
#include "eoi/rng.hpp"
#include "eoi/sampler.hpp"
#include "eoi/sparse_ortho.hpp"

namespace eoi {

enum class Activation { Linear, Tanh, HardTanh, Relu };

inline Activation activation_from_string(const std::string& name) {
    if (name == "linear") return Activation::Linear;
    if (name == "tanh") return Activation::Tanh;
    if (name == "hard_tanh") return Activation::HardTanh;
    if (name == "relu") return Activation::Relu;
    throw std::invalid_argument("unknown activation \"" + name + "\"");
}

inline std::string to_string(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Tanh: return "tanh";
        case Activation::HardTanh: return "hard_tanh";
        case Activation::Relu: return "relu";
    }
    return "?";
}

inline double activate(Activation a, double h) {
    switch (a) {
        case Activation::Linear: return h;
        case Activation::Tanh: return std::tanh(h);
        case Activation::HardTanh: return h > 1.0 ? 1.0 : (h < -1.0 ? -1.0 : h);
        case Activation::Relu: return h > 0.0 ? h : 0.0;
    }
    return h;
}

/// phi'(h); the measure-zero kinks take derivative 0 (relu at 0, hard_tanh
/// at +-1).
inline double activate_derivative(Activation a, double h) {
    switch (a) {
        case Activation::Linear: return 1.0;
        case Activation::Tanh: {
            const double t = std::tanh(h);
            return 1.0 - t * t;
        }
        case Activation::HardTanh: return (h > -1.0 && h < 1.0) ? 1.0 : 0.0;
        case Activation::Relu: return h > 0.0 ? 1.0 : 0.0;
    }
    return 1.0;
}

enum class InitScheme { Base, Eoi, Ai };

inline InitScheme scheme_from_string(const std::string& name) {
    if (name == "base") return InitScheme::Base;
    if (name == "eoi") return InitScheme::Eoi;
    if (name == "ai") return InitScheme::Ai;
    throw std::invalid_argument("unknown init scheme \"" + name + "\"");
}

inline std::string to_string(InitScheme s) {
    switch (s) {
        case InitScheme::Base: return "base";
        case InitScheme::Eoi: return "eoi";
        case InitScheme::Ai: return "ai";
    }
    return "?";
}

struct MLPSpec {
    std::size_t depth = 1;
    std::size_t width = 1;
    Activation activation = Activation::Linear;
    double sigma_w = 1.0;
    double sigma_b = 0.0;
    std::size_t in_dim = 0;  // 0 means width
    std::size_t out_dim = 0; // 0 means width

    std::size_t input_dim() const { return in_dim ? in_dim : width; }
    std::size_t output_dim() const { return out_dim ? out_dim : width; }

    void validate() const {
        if (depth < 1) throw std::invalid_argument("MLPSpec: depth must be >= 1");
        if (width < 1) throw std::invalid_argument("MLPSpec: width must be >= 1");
        if (!(sigma_w > 0.0)) throw std::domain_error("MLPSpec: sigma_w must be positive");
        if (sigma_b < 0.0) throw std::domain_error("MLPSpec: sigma_b must be nonnegative");
    }

    /// (fan_in, fan_out) of every layer in order.
    std::vector<std::pair<std::size_t, std::size_t>> layer_dims() const {
        std::vector<std::pair<std::size_t, std::size_t>> dims;
        for (std::size_t l = 0; l < depth; ++l) {
            const std::size_t in = l == 0 ? input_dim() : width;
            const std::size_t out = l + 1 == depth ? output_dim() : width;
            dims.emplace_back(in, out);
        }
        return dims;
    }

    Architecture architecture() const {
        Architecture arch;
        for (const auto& [in, out] : layer_dims()) arch.push_back(LayerSpec::fc(in, out));
        return arch;
    }
};

struct MlpLayer {
    Matrix weights;                 // out x in, masked entries exactly zero
    std::vector<std::uint8_t> mask; // column-major, aligned with weights
    std::vector<double> bias;
};

struct SparseMLP {
    MLPSpec spec;
    std::vector<MlpLayer> layers;
};

struct AiOptions {
    std::size_t iterations = 10000;
    double step = 0.01;
};

namespace detail {

/// Dense orthogonal out x in: a Haar matrix of the larger size truncated
/// to the requested shape, so the shorter side is orthonormal.
inline Matrix dense_orthogonal(std::size_t out, std::size_t in, Rng& rng) {
    const std::size_t n = std::max(out, in);
    Matrix q = haar_orthogonal(n, rng);
    Matrix w(out, in);
    for (std::size_t c = 0; c < in; ++c)
        for (std::size_t r = 0; r < out; ++r) w(r, c) = q(r, c);
    return w;
}

/// Exactly round(d * size) mask bits chosen uniformly without replacement.
inline std::vector<std::uint8_t> uniform_mask(std::size_t rows, std::size_t cols, double d, Rng& rng) {
    const std::size_t size = rows * cols;
    const auto want = static_cast<std::size_t>(round_count(d * static_cast<double>(size)));
    std::vector<std::size_t> order(size);
    for (std::size_t i = 0; i < size; ++i) order[i] = i;
    std::vector<std::uint8_t> mask(size, 0);
    for (std::size_t pick = 0; pick < want; ++pick) {
        const std::size_t r = pick + static_cast<std::size_t>(rng.uniform_index(size - pick));
        std::swap(order[pick], order[r]);
        mask[order[pick]] = 1;
    }
    return mask;
}

} // namespace detail

/// Assemble a sparse MLP under one of the initialization schemes:
///  base - dense orthogonal weights, then a uniform random mask at d_l;
///  eoi  - Givens-composed sparse orthogonal weights, mask = support;
///  ai   - the base construction pushed through the orthogonality-loss
///         optimizer on its mask.
/// All schemes then scale weights by sigma_w and draw Normal(0, sigma_b^2)
/// biases. Per layer the draw order is: weights, mask, bias.
inline SparseMLP build_sparse_mlp(const MLPSpec& spec, const DensityProfile& profile,
                                  InitScheme scheme, Rng& rng, const AiOptions& ai = {}) {
    spec.validate();
    if (profile.densities.size() != spec.depth)
        throw std::invalid_argument("build_sparse_mlp: profile length must equal depth");

    SparseMLP net;
    net.spec = spec;
    const auto dims = spec.layer_dims();
    for (std::size_t l = 0; l < spec.depth; ++l) {
        const auto [in, out] = dims[l];
        const double dl = profile.densities[l];
        if (!(dl > 0.0 && dl <= 1.0))
            throw std::domain_error("build_sparse_mlp: layer density must lie in (0, 1]");

        MlpLayer layer;
        if (scheme == InitScheme::Eoi) {
            SparseOrthoMatrix w = sample_rectangular(out, in, dl, AngleMode::uniform(), rng);
            layer.weights = w.to_dense();
            layer.mask.assign(w.support().begin(), w.support().end());
        } else {
            Matrix w = detail::dense_orthogonal(out, in, rng);
            layer.mask = detail::uniform_mask(out, in, dl, rng);
            for (std::size_t at = 0; at < layer.mask.size(); ++at)
                if (!layer.mask[at]) w.data()[at] = 0.0;
            if (scheme == InitScheme::Ai && ai.iterations > 0) {
                AIResult opt = ai_optimize(w, layer.mask, ai.iterations, ai.step);
                w = std::move(opt.weights);
            }
            layer.weights = std::move(w);
        }

        if (spec.sigma_w != 1.0)
            for (double& v : layer.weights.data()) v *= spec.sigma_w;
        layer.bias = sample_biases(out, spec.sigma_b, rng);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

inline std::vector<double> mlp_forward(const SparseMLP& net, const std::vector<double>& x) {
    std::vector<double> cur = x;
    for (const auto& layer : net.layers) {
        std::vector<double> h = matvec(layer.weights, cur);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += layer.bias[i];
        for (double& v : h) v = activate(net.spec.activation, v);
        cur = std::move(h);
    }
    return cur;
}

/// Input-output Jacobian at x: the explicit product of D^l W^l across
/// layers, D^l the diagonal of activation derivatives at the layer's
/// preactivations.
inline Matrix jacobian(const SparseMLP& net, const std::vector<double>& x) {
    if (x.size() != net.spec.input_dim()) throw std::invalid_argument("jacobian: input dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("jacobian: input must be finite");

    Matrix j;
    std::vector<double> cur = x;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const auto& layer = net.layers[l];
        std::vector<double> h = matvec(layer.weights, cur);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += layer.bias[i];

        Matrix dw = layer.weights; // rows scaled by phi'(h_i)
        for (std::size_t c = 0; c < dw.cols(); ++c)
            for (std::size_t r = 0; r < dw.rows(); ++r)
                dw(r, c) *= activate_derivative(net.spec.activation, h[r]);

        j = l == 0 ? std::move(dw) : matmul(dw, j);
        for (double& v : h) v = activate(net.spec.activation, v);
        cur = std::move(h);
    }
    return j;
}

/// (sigma_w, sigma_b) presets: "default" is (1, 0); "deep_tanh" is the
/// critical pair (1.0247, 0.00448) for very deep tanh stacks.
inline std::pair<double, double> critical_constants(const std::string& profile_name) {
    if (profile_name == "default") return {1.0, 0.0};
    if (profile_name == "deep_tanh") return {1.0247, 0.00448};
    throw std::invalid_argument("critical_constants: unknown profile \"" + profile_name + "\"");
}

} // namespace eoi
