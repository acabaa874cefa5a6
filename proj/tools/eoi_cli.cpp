// Command-line front end: sampling, density curves, allocation, spectrum
// sweeps and generation benchmarks. All randomness derives from --seed, so
// a rerun with the same argv reproduces the same data bytes (wall-time
// columns in `bench` excepted).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eoi/eoi.hpp"

namespace {

struct OutputTarget {
    std::unique_ptr<std::ofstream> file;
    std::ostream* stream = &std::cout;

    static OutputTarget open(const std::string& path) {
        OutputTarget t;
        if (!path.empty()) {
            t.file = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*t.file) throw std::runtime_error("cannot open output file " + path);
            t.stream = t.file.get();
        }
        return t;
    }
};

void run_sample(std::uint64_t seed, const std::string& out_path, std::size_t n, std::size_t m,
                double density, const std::string& angle_mode, double phi, double sigma_w) {
    eoi::Rng rng(seed);
    const eoi::AngleMode mode =
        angle_mode == "fixed" ? eoi::AngleMode::fixed(phi) : eoi::AngleMode::uniform();
    eoi::SampleStats stats;
    eoi::SparseOrthoMatrix a = m == 0 || m == n
                                   ? eoi::sample_square(n, density, mode, rng, &stats)
                                   : eoi::sample_rectangular(n, m, density, mode, rng, &stats);
    if (stats.floor_warning)
        std::cerr << "warning: target density below the identity floor; returned the sparsest "
                     "orthogonal matrix\n";
    if (sigma_w != 1.0) a.scale(sigma_w);
    auto out = OutputTarget::open(out_path);
    eoi::write_matrix(a, *out.stream);
}

void run_sample_conv(std::uint64_t seed, const std::string& out_path, std::size_t c_out,
                     std::size_t c_in, std::size_t kernel_size, double density,
                     const std::string& center_mode, double center_density) {
    if (kernel_size == 0 || kernel_size % 2 == 0)
        throw std::domain_error("kernel size must be odd (kernels are (2k+1) x (2k+1))");
    const std::size_t k = (kernel_size - 1) / 2;
    eoi::CenterMode mode = eoi::CenterMode::equal();
    if (center_mode == "sqrt") mode = eoi::CenterMode::sqrt();
    else if (center_mode == "custom") mode = eoi::CenterMode::custom(center_density);
    else if (center_mode != "equal") throw std::domain_error("unknown center mode " + center_mode);

    eoi::Rng rng(seed);
    eoi::ConvKernel kernel = eoi::sample_conv(c_out, c_in, k, density, mode, rng);
    auto out = OutputTarget::open(out_path);
    eoi::write_kernel(kernel, *out.stream);
}

void run_density_curve(std::uint64_t seed, const std::string& out_path, const std::string& format,
                       std::size_t n, std::size_t t_max, std::size_t mc_trials) {
    const std::vector<double> dp = eoi::expected_density_curve(n, t_max);
    std::vector<eoi::McDensity> mc;
    if (mc_trials > 0) {
        eoi::Rng rng(seed);
        mc = eoi::monte_carlo_density_curve(n, t_max, mc_trials, rng);
    }
    auto out = OutputTarget::open(out_path);
    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t t = 0; t <= t_max; ++t) {
            nlohmann::json row{{"t", t}, {"expected_density", dp[t]}};
            if (mc_trials > 0) {
                row["mc_mean"] = mc[t].mean;
                row["mc_stderr"] = mc[t].stderr_of_mean;
            } else {
                row["mc_mean"] = nullptr;
                row["mc_stderr"] = nullptr;
            }
            rows.push_back(std::move(row));
        }
        *out.stream << rows.dump(2) << '\n';
    } else {
        *out.stream << "t,expected_density,mc_mean,mc_stderr\n";
        for (std::size_t t = 0; t <= t_max; ++t) {
            *out.stream << t << ',' << eoi::format_shortest(dp[t]) << ',';
            if (mc_trials > 0)
                *out.stream << eoi::format_shortest(mc[t].mean) << ','
                            << eoi::format_shortest(mc[t].stderr_of_mean);
            else
                *out.stream << ',';
            *out.stream << '\n';
        }
    }
}

void run_allocate(const std::string& out_path, const std::string& arch_path, double density,
                  const std::string& allocator, const std::string& load_path) {
    const eoi::Architecture arch = eoi::load_architecture(arch_path);
    auto out = OutputTarget::open(out_path);
    if (!load_path.empty()) {
        eoi::DensityProfile profile = eoi::load_profile(load_path);
        const eoi::ProfileDiagnostics diag = eoi::validate_profile(profile, arch, density);
        nlohmann::json report{{"length_ok", diag.length_ok},
                              {"budget_residual", diag.budget_residual},
                              {"range_violations", diag.range_violations},
                              {"ok", diag.ok()}};
        *out.stream << report.dump(2) << '\n';
        return;
    }
    const eoi::DensityProfile profile = eoi::make_profile(allocator, arch, density);
    *out.stream << eoi::profile_to_json(profile).dump(2) << '\n';
}

void run_spectrum(std::uint64_t seed, const std::string& out_path, const std::string& format,
                  std::size_t depth, std::size_t width, const std::string& activation,
                  const std::string& sigma_profile, const std::vector<std::string>& allocators,
                  const std::vector<std::string>& schemes, const std::vector<double>& sparsities,
                  std::size_t num_seeds, std::size_t inputs, std::size_t ai_iters) {
    eoi::MLPSpec spec;
    spec.depth = depth;
    spec.width = width;
    spec.activation = eoi::activation_from_string(activation);
    const auto [sigma_w, sigma_b] = eoi::critical_constants(sigma_profile);
    spec.sigma_w = sigma_w;
    spec.sigma_b = sigma_b;

    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < num_seeds; ++s) seeds.push_back(seed + s);
    eoi::AiOptions ai;
    ai.iterations = ai_iters;
    const auto rows = eoi::spectrum_sweep(spec, allocators, schemes, sparsities, seeds, inputs, ai);

    auto out = OutputTarget::open(out_path);
    if (format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : rows)
            doc.push_back({{"scheme", r.scheme},
                           {"allocator", r.allocator},
                           {"activation", r.activation},
                           {"sparsity", r.sparsity},
                           {"seed", r.seed},
                           {"mean_sv", r.mean_sv},
                           {"max_sv", r.max_sv}});
        *out.stream << doc.dump(2) << '\n';
    } else {
        *out.stream << "scheme,allocator,activation,sparsity,seed,mean_sv,max_sv\n";
        for (const auto& r : rows)
            *out.stream << r.scheme << ',' << r.allocator << ',' << r.activation << ','
                        << eoi::format_shortest(r.sparsity) << ',' << r.seed << ','
                        << eoi::format_shortest(r.mean_sv) << ',' << eoi::format_shortest(r.max_sv)
                        << '\n';
    }
}

void run_bench(std::uint64_t seed, const std::string& out_path, const std::string& format,
               const std::vector<std::size_t>& sizes, const std::vector<double>& densities,
               const std::vector<std::string>& schemes, std::size_t repeats, std::size_t ai_iters,
               const std::string& ai_trace_path) {
    eoi::AiOptions ai;
    ai.iterations = ai_iters;
    std::vector<double> trace;
    const auto records = eoi::bench_generation(sizes, densities, schemes, repeats, seed, ai,
                                               ai_trace_path.empty() ? nullptr : &trace);
    if (!ai_trace_path.empty()) eoi::write_loss_trace_file(trace, ai_trace_path);
    for (const auto& r : records)
        if (!r.available) std::cerr << "warning: scheme " << r.scheme << " unavailable, row skipped\n";

    auto out = OutputTarget::open(out_path);
    if (format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : records) {
            nlohmann::json row{{"scheme", r.scheme}, {"n", r.n}, {"density", r.density}, {"seed", r.seed}};
            if (r.available) {
                row["wall_time_s"] = r.wall_time_s;
                row["ortho_score"] = r.ortho_score;
            } else {
                row["wall_time_s"] = nullptr;
                row["ortho_score"] = nullptr;
            }
            doc.push_back(std::move(row));
        }
        *out.stream << doc.dump(2) << '\n';
    } else {
        *out.stream << "scheme,n,density,wall_time_s,ortho_score,seed\n";
        for (const auto& r : records) {
            *out.stream << r.scheme << ',' << r.n << ',' << eoi::format_shortest(r.density) << ',';
            if (r.available)
                *out.stream << eoi::format_shortest(r.wall_time_s) << ','
                            << eoi::format_shortest(r.ortho_score);
            else
                *out.stream << ',';
            *out.stream << ',' << r.seed << '\n';
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse exactly-orthogonal initialization toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "csv";
    app.add_option("--seed", seed, "Master seed; all randomness derives from it")->capture_default_str();
    app.add_option("--out", out_path, "Output file (default: stdout)");
    app.add_option("--format", format, "Tabular output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // sample
    auto* sample = app.add_subcommand("sample", "Sample a sparse orthogonal matrix");
    std::size_t n = 0, m = 0;
    double density = 0.0, phi = 0.0, sigma_w = 1.0;
    std::string angle_mode = "uniform";
    sample->add_option("--n", n, "Rows")->required();
    sample->add_option("--m", m, "Columns (default: n, i.e. square)");
    sample->add_option("--density", density, "Target density in [0, 1]")->required();
    sample->add_option("--angle-mode", angle_mode, "Rotation angle law")
        ->check(CLI::IsMember({"uniform", "fixed"}))
        ->capture_default_str();
    sample->add_option("--phi", phi, "Fixed rotation angle in [0, 2*pi), used with --angle-mode fixed");
    sample->add_option("--sigma-w", sigma_w, "Scale factor applied to the values")->capture_default_str();

    // sample-conv
    auto* sample_conv = app.add_subcommand("sample-conv", "Sample a sparse delta-orthogonal kernel");
    std::size_t c_out = 0, c_in = 0, kernel_size = 3;
    double conv_density = 0.0, center_density = 0.0;
    std::string center_mode = "equal";
    sample_conv->add_option("--c-out", c_out, "Output channels")->required();
    sample_conv->add_option("--c-in", c_in, "Input channels")->required();
    sample_conv->add_option("--kernel-size", kernel_size, "Odd kernel width 2k+1")->capture_default_str();
    sample_conv->add_option("--density", conv_density, "Target mask density in [0, 1]")->required();
    sample_conv->add_option("--center-mode", center_mode, "Density law for the central matrix")
        ->check(CLI::IsMember({"equal", "sqrt", "custom"}))
        ->capture_default_str();
    sample_conv->add_option("--center-density", center_density, "Center density for --center-mode custom");

    // density-curve
    auto* curve = app.add_subcommand("density-curve", "Expected density versus rotation count");
    std::size_t curve_n = 0, t_max = 0, mc_trials = 0;
    curve->add_option("--n", curve_n, "Matrix size")->required();
    curve->add_option("--t-max", t_max, "Largest rotation count")->required();
    curve->add_option("--mc-trials", mc_trials, "Monte Carlo trials per point (0 = analytic only)")
        ->capture_default_str();

    // allocate
    auto* allocate = app.add_subcommand("allocate", "Per-layer density profile for an architecture");
    std::string arch_path, allocator = "erk", load_path;
    double alloc_density = 0.0;
    allocate->add_option("--arch", arch_path, "Architecture JSON file")->required();
    allocate->add_option("--density", alloc_density, "Global density budget in (0, 1]")->required();
    allocate->add_option("--allocator", allocator, "Allocation rule")
        ->check(CLI::IsMember({"uniform", "erk"}))
        ->capture_default_str();
    allocate->add_option("--load", load_path,
                         "Validate an externally computed profile instead of allocating");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Jacobian singular-value sweep over an MLP grid");
    std::size_t depth = 7, width = 100, num_seeds = 5, inputs = 8, sp_ai_iters = 10000;
    std::string activation = "tanh", sigma_profile = "default";
    std::vector<std::string> allocators{"uniform", "erk"};
    std::vector<std::string> schemes{"base", "eoi"};
    std::vector<double> sparsities{0.0, 0.5, 0.9, 0.95, 0.97};
    spectrum->add_option("--depth", depth, "Number of layers")->capture_default_str();
    spectrum->add_option("--width", width, "Hidden width")->capture_default_str();
    spectrum->add_option("--activation", activation, "Activation function")
        ->check(CLI::IsMember({"linear", "tanh", "hard_tanh", "relu"}))
        ->capture_default_str();
    spectrum->add_option("--sigma-profile", sigma_profile, "(sigma_w, sigma_b) preset")
        ->check(CLI::IsMember({"default", "deep_tanh"}))
        ->capture_default_str();
    spectrum->add_option("--allocators", allocators, "Density allocators")->delimiter(',');
    spectrum->add_option("--schemes", schemes, "Initialization schemes")->delimiter(',');
    spectrum->add_option("--sparsities", sparsities, "Sparsity grid")->delimiter(',');
    spectrum->add_option("--num-seeds", num_seeds, "Seeds per cell, seed..seed+n-1")->capture_default_str();
    spectrum->add_option("--inputs", inputs, "Random inputs averaged per seed")->capture_default_str();
    spectrum->add_option("--ai-iters", sp_ai_iters, "Optimizer iterations for the ai scheme")
        ->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "Generation wall-time and orthogonality benchmark");
    std::vector<std::size_t> sizes{16, 64, 256, 1024, 2048};
    std::vector<double> bench_densities{0.0625};
    std::vector<std::string> bench_schemes{"eoi"};
    std::size_t repeats = 5, bench_ai_iters = 10000;
    std::string ai_trace_path;
    bench->add_option("--sizes", sizes, "Matrix sizes")->delimiter(',');
    bench->add_option("--densities", bench_densities, "Density grid")->delimiter(',');
    bench->add_option("--schemes", bench_schemes, "Schemes: eoi, ai, sao")->delimiter(',');
    bench->add_option("--repeats", repeats, "Timed repetitions per cell")->capture_default_str();
    bench->add_option("--ai-iters", bench_ai_iters, "Optimizer iterations for ai cells")
        ->capture_default_str();
    bench->add_option("--ai-trace", ai_trace_path, "Dump the last ai cell's loss trace CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (sample->parsed())
            run_sample(seed, out_path, n, m, density, angle_mode, phi, sigma_w);
        else if (sample_conv->parsed())
            run_sample_conv(seed, out_path, c_out, c_in, kernel_size, conv_density, center_mode,
                            center_density);
        else if (curve->parsed())
            run_density_curve(seed, out_path, format, curve_n, t_max, mc_trials);
        else if (allocate->parsed())
            run_allocate(out_path, arch_path, alloc_density, allocator, load_path);
        else if (spectrum->parsed())
            run_spectrum(seed, out_path, format, depth, width, activation, sigma_profile, allocators,
                         schemes, sparsities, num_seeds, inputs, sp_ai_iters);
        else if (bench->parsed())
            run_bench(seed, out_path, format, sizes, bench_densities, bench_schemes, repeats,
                      bench_ai_iters, ai_trace_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
