#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eoi/ai.hpp"
#include "eoi/mlp.hpp"
#include "eoi/rng.hpp"
#include "eoi/sampler.hpp"
#include "eoi/sparse_ortho.hpp"

namespace eoi {

struct BenchRecord {
    std::string scheme;
    std::size_t n = 0;
    double density = 0.0;
    double wall_time_s = 0.0; // median over repeats, warm-up excluded
    double ortho_score = 0.0; // mean over repeats
    std::uint64_t seed = 0;
    bool available = true;    // false marks a skipped scheme (e.g. sao)
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace detail

/// Single-threaded generation benchmark: for each (scheme, n, density)
/// cell the matrix is generated once for warm-up and `repeats` more times
/// timed on the monotonic clock; the row records the median wall time and
/// the mean orthogonality score. AI cells take their masks from an EOI
/// sample of the same cell (untimed) and time the dense orthogonal start
/// plus the loss optimization. The "sao" scheme is reserved but
/// unavailable; its rows are emitted with the available flag cleared so
/// comparison tables keep their shape.
inline std::vector<BenchRecord> bench_generation(const std::vector<std::size_t>& sizes,
                                                 const std::vector<double>& densities,
                                                 const std::vector<std::string>& schemes,
                                                 std::size_t repeats, std::uint64_t seed,
                                                 const AiOptions& ai = {},
                                                 std::vector<double>* last_ai_trace = nullptr) {
    if (sizes.empty() || densities.empty() || schemes.empty())
        throw std::invalid_argument("bench_generation: empty grid");
    if (repeats < 1) throw std::invalid_argument("bench_generation: repeats must be >= 1");

    using Clock = std::chrono::steady_clock;
    std::vector<BenchRecord> records;
    std::uint64_t ordinal = 0;

    for (const auto& scheme : schemes) {
        if (scheme != "eoi" && scheme != "ai" && scheme != "sao")
            throw std::invalid_argument("bench_generation: unknown scheme \"" + scheme + "\"");
        for (std::size_t n : sizes) {
            for (double d : densities) {
                BenchRecord rec;
                rec.scheme = scheme;
                rec.n = n;
                rec.density = d;
                rec.seed = seed;

                if (scheme == "sao") {
                    rec.available = false;
                    records.push_back(std::move(rec));
                    continue;
                }

                Rng rng(Rng::derive_seed(seed, ordinal++));
                std::vector<double> times;
                double score_sum = 0.0;

                if (scheme == "eoi") {
                    (void)sample_square(n, d, AngleMode::uniform(), rng); // warm-up
                    for (std::size_t rep = 0; rep < repeats; ++rep) {
                        const auto t0 = Clock::now();
                        SparseOrthoMatrix a = sample_square(n, d, AngleMode::uniform(), rng);
                        times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
                        score_sum += orthogonality_score(a);
                    }
                } else {
                    // Mask provenance: the structural support of an EOI sample,
                    // so scores compare on identical masks.
                    SparseOrthoMatrix ref = sample_square(n, d, AngleMode::uniform(), rng);
                    std::vector<std::uint8_t> mask(ref.support().begin(), ref.support().end());
                    {
                        Matrix w0 = detail::dense_orthogonal(n, n, rng); // warm-up
                        (void)ai_optimize(w0, mask, std::min<std::size_t>(ai.iterations, 2), ai.step);
                    }
                    for (std::size_t rep = 0; rep < repeats; ++rep) {
                        const auto t0 = Clock::now();
                        Matrix w = detail::dense_orthogonal(n, n, rng);
                        AIResult opt = ai_optimize(w, mask, ai.iterations, ai.step);
                        times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
                        score_sum += orthogonality_score(opt.weights);
                        if (last_ai_trace) *last_ai_trace = std::move(opt.loss_trace);
                    }
                }

                rec.wall_time_s = detail::median(times);
                rec.ortho_score = score_sum / static_cast<double>(repeats);
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

} // namespace eoi
