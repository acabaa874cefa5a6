#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoi/linalg.hpp"
#include "eoi/matrix.hpp"
#include "eoi/mlp.hpp"

namespace eoi {

struct SingularSpectrum {
    std::vector<double> values; // descending, min(rows, cols) entries
    double mean = 0.0;
    double max = 0.0;
};

/// Full singular spectrum of J via one-sided Jacobi sweeps.
inline SingularSpectrum singular_values(const Matrix& j) {
    for (double v : j.data())
        if (!std::isfinite(v)) throw std::invalid_argument("singular_values: matrix must be finite");
    SingularSpectrum s;
    s.values = singular_values_jacobi(j);
    if (!s.values.empty()) {
        double sum = 0.0;
        for (double v : s.values) sum += v;
        s.mean = sum / static_cast<double>(s.values.size());
        s.max = s.values.front();
    }
    return s;
}

struct SpectrumRow {
    std::string scheme;
    std::string allocator;
    std::string activation;
    double sparsity = 0.0;
    std::uint64_t seed = 0;
    double mean_sv = 0.0;
    double max_sv = 0.0;
};

inline DensityProfile make_profile(const std::string& allocator, const Architecture& arch, double d) {
    if (allocator == "uniform") return uniform_profile(arch, d);
    if (allocator == "erk") return erk_profile(arch, d);
    throw std::invalid_argument("unknown allocator \"" + allocator + "\"");
}

/// One row per (allocator, scheme, sparsity, seed) cell: the per-input
/// mean and maximum singular values of the Jacobian, averaged over
/// inputs_per_seed standard-normal inputs. Every cell runs on its own
/// generator stream derived from (seed, cell ordinal), so any sub-grid
/// reproduces the full run's rows.
inline std::vector<SpectrumRow> spectrum_sweep(const MLPSpec& spec,
                                               const std::vector<std::string>& allocators,
                                               const std::vector<std::string>& schemes,
                                               const std::vector<double>& sparsities,
                                               const std::vector<std::uint64_t>& seeds,
                                               std::size_t inputs_per_seed = 8,
                                               const AiOptions& ai = {}) {
    if (allocators.empty() || schemes.empty() || sparsities.empty() || seeds.empty())
        throw std::invalid_argument("spectrum_sweep: empty grid");
    if (inputs_per_seed < 1) throw std::invalid_argument("spectrum_sweep: need at least one input");

    const Architecture arch = spec.architecture();
    std::vector<SpectrumRow> rows;
    std::uint64_t ordinal = 0;
    for (const auto& allocator : allocators) {
        for (const auto& scheme_name : schemes) {
            const InitScheme scheme = scheme_from_string(scheme_name);
            for (double sparsity : sparsities) {
                if (!(sparsity >= 0.0 && sparsity < 1.0))
                    throw std::domain_error("spectrum_sweep: sparsity must lie in [0, 1)");
                const double d = 1.0 - sparsity;
                const DensityProfile profile = make_profile(allocator, arch, d);
                for (std::uint64_t seed : seeds) {
                    Rng rng(Rng::derive_seed(seed, ordinal++));
                    SparseMLP net = build_sparse_mlp(spec, profile, scheme, rng, ai);

                    double mean_acc = 0.0, max_acc = 0.0;
                    for (std::size_t rep = 0; rep < inputs_per_seed; ++rep) {
                        std::vector<double> x(spec.input_dim());
                        for (double& v : x) v = rng.normal();
                        const SingularSpectrum s = singular_values(jacobian(net, x));
                        mean_acc += s.mean;
                        max_acc += s.max;
                    }

                    SpectrumRow row;
                    row.scheme = scheme_name;
                    row.allocator = allocator;
                    row.activation = to_string(spec.activation);
                    row.sparsity = sparsity;
                    row.seed = seed;
                    row.mean_sv = mean_acc / static_cast<double>(inputs_per_seed);
                    row.max_sv = max_acc / static_cast<double>(inputs_per_seed);
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

} // namespace eoi
