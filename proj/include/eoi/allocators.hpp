#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace eoi {

/// One layer of an architecture, as far as density allocation cares:
/// either a fully connected in -> out map or a conv with half-width k.
struct LayerSpec {
    enum class Kind { Fc, Conv };
    Kind kind = Kind::Fc;
    std::size_t in = 0;     // fc: fan-in,  conv: c_in
    std::size_t out = 0;    // fc: fan-out, conv: c_out
    std::size_t k = 0;      // conv half kernel width; kernel is (2k+1)^2

    static LayerSpec fc(std::size_t in, std::size_t out) {
        if (in == 0 || out == 0) throw std::invalid_argument("LayerSpec::fc: dimensions must be positive");
        LayerSpec l;
        l.kind = Kind::Fc;
        l.in = in;
        l.out = out;
        return l;
    }

    static LayerSpec conv(std::size_t c_in, std::size_t c_out, std::size_t k) {
        if (c_in == 0 || c_out == 0) throw std::invalid_argument("LayerSpec::conv: channel counts must be positive");
        LayerSpec l;
        l.kind = Kind::Conv;
        l.in = c_in;
        l.out = c_out;
        l.k = k;
        return l;
    }

    std::size_t kernel_width() const { return kind == Kind::Conv ? 2 * k + 1 : 1; }

    std::size_t param_count() const {
        return in * out * kernel_width() * kernel_width();
    }

    /// ERK shape score: (in + out) / (in * out) for fc, and
    /// (in + out + w + h) / (in * out * w * h) for conv kernels.
    double erk_score() const {
        const double fin = static_cast<double>(in);
        const double fout = static_cast<double>(out);
        if (kind == Kind::Fc) return (fin + fout) / (fin * fout);
        const double kw = static_cast<double>(kernel_width());
        return (fin + fout + kw + kw) / (fin * fout * kw * kw);
    }
};

using Architecture = std::vector<LayerSpec>;

/// Per-layer densities under a global budget: sum_l d_l * m_l = d * sum_l m_l.
struct DensityProfile {
    double d = 0.0;
    std::vector<double> densities;
    std::vector<std::size_t> param_counts;

    std::size_t layers() const { return densities.size(); }

    double budget_residual() const {
        double total = 0.0, used = 0.0;
        for (std::size_t l = 0; l < densities.size(); ++l) {
            total += static_cast<double>(param_counts[l]);
            used += densities[l] * static_cast<double>(param_counts[l]);
        }
        const double target = d * total;
        return target == 0.0 ? 0.0 : (used - target) / target;
    }
};

inline DensityProfile uniform_profile(const Architecture& arch, double d) {
    if (!(d > 0.0 && d <= 1.0)) throw std::domain_error("uniform_profile: d must lie in (0, 1]");
    DensityProfile p;
    p.d = d;
    for (const auto& layer : arch) {
        p.densities.push_back(d);
        p.param_counts.push_back(layer.param_count());
    }
    return p;
}

/// ERK allocation: d_l = eps * s_l with the single coefficient eps solving
/// the budget identity. Layers pushed past density 1 are clamped there,
/// removed from the free set, and eps is re-solved; at most L passes.
inline DensityProfile erk_profile(const Architecture& arch, double d) {
    if (!(d > 0.0 && d <= 1.0)) throw std::domain_error("erk_profile: d must lie in (0, 1]");
    if (arch.empty()) throw std::invalid_argument("erk_profile: empty architecture");

    const std::size_t L = arch.size();
    std::vector<double> score(L), m(L);
    double total = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        score[l] = arch[l].erk_score();
        m[l] = static_cast<double>(arch[l].param_count());
        total += m[l];
    }

    std::vector<bool> clamped(L, false);
    std::vector<double> densities(L, 0.0);
    for (std::size_t pass = 0; pass < L; ++pass) {
        double budget = d * total;
        double mass = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            if (clamped[l]) budget -= m[l];
            else mass += score[l] * m[l];
        }
        const double eps = budget / mass;
        bool violated = false;
        for (std::size_t l = 0; l < L; ++l) {
            if (clamped[l]) continue;
            densities[l] = eps * score[l];
            if (densities[l] > 1.0) {
                clamped[l] = true;
                densities[l] = 1.0;
                violated = true;
            }
        }
        if (!violated) break;
        for (std::size_t l = 0; l < L; ++l)
            if (clamped[l]) densities[l] = 1.0;
    }

    DensityProfile p;
    p.d = d;
    p.densities = densities;
    for (std::size_t l = 0; l < L; ++l) p.param_counts.push_back(arch[l].param_count());
    return p;
}

inline Architecture architecture_from_json(const nlohmann::json& doc) {
    if (!doc.contains("layers") || !doc["layers"].is_array())
        throw std::invalid_argument("architecture: missing \"layers\" array");
    Architecture arch;
    for (const auto& entry : doc["layers"]) {
        const std::string kind = entry.at("kind").get<std::string>();
        if (kind == "fc") {
            arch.push_back(LayerSpec::fc(entry.at("in").get<std::size_t>(), entry.at("out").get<std::size_t>()));
        } else if (kind == "conv") {
            arch.push_back(LayerSpec::conv(entry.at("c_in").get<std::size_t>(),
                                           entry.at("c_out").get<std::size_t>(),
                                           entry.at("k").get<std::size_t>()));
        } else {
            throw std::invalid_argument("architecture: unknown layer kind \"" + kind + "\"");
        }
    }
    return arch;
}

inline Architecture load_architecture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_architecture: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("load_architecture: " + std::string(e.what()));
    }
    return architecture_from_json(doc);
}

inline nlohmann::json profile_to_json(const DensityProfile& p) {
    return nlohmann::json{{"d", p.d}, {"densities", p.densities}};
}

/// Parse {"d": ..., "densities": [...]}; parameter counts are attached at
/// validation time, when the architecture is known.
inline DensityProfile profile_from_json(const nlohmann::json& doc) {
    DensityProfile p;
    if (!doc.contains("d") || !doc.contains("densities"))
        throw std::invalid_argument("profile: need \"d\" and \"densities\"");
    p.d = doc["d"].get<double>();
    p.densities = doc["densities"].get<std::vector<double>>();
    return p;
}

inline DensityProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_profile: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("load_profile: " + std::string(e.what()));
    }
    return profile_from_json(doc);
}

inline void save_profile(const DensityProfile& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_profile: cannot open " + path);
    out << profile_to_json(p).dump(2) << "\n";
}

struct ProfileDiagnostics {
    bool length_ok = false;
    double budget_residual = 0.0;            // relative, signed
    std::vector<std::size_t> range_violations; // layers with d_l outside (0, 1]

    bool ok(double budget_tol = 1e-9) const {
        return length_ok && range_violations.empty() && std::abs(budget_residual) <= budget_tol;
    }
};

inline ProfileDiagnostics validate_profile(const DensityProfile& profile, const Architecture& arch,
                                           double d) {
    ProfileDiagnostics diag;
    diag.length_ok = profile.densities.size() == arch.size();
    for (std::size_t l = 0; l < profile.densities.size(); ++l) {
        const double dl = profile.densities[l];
        if (!(dl > 0.0 && dl <= 1.0)) diag.range_violations.push_back(l);
    }
    if (diag.length_ok) {
        double total = 0.0, used = 0.0;
        for (std::size_t l = 0; l < arch.size(); ++l) {
            const double m = static_cast<double>(arch[l].param_count());
            total += m;
            used += profile.densities[l] * m;
        }
        const double target = d * total;
        diag.budget_residual = target == 0.0 ? 0.0 : (used - target) / target;
    }
    return diag;
}

} // namespace eoi
