#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "eoi/rng.hpp"

namespace eoi {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kHalfPi = 1.5707963267948966192313216916398;

/// Plane rotation G_n(i, j, phi): identity except rows/columns i and j,
/// where the 2x2 block is [[cos, -sin], [sin, cos]]. Indices are 0-based
/// with i < j; phi lies in [0, 2*pi).
struct GivensRotation {
    std::uint32_t n = 0;
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    double phi = 0.0;

    GivensRotation(std::uint32_t n_, std::uint32_t i_, std::uint32_t j_, double phi_)
        : n(n_), i(i_), j(j_), phi(phi_) {
        if (n < 2) throw std::invalid_argument("GivensRotation: size must be >= 2");
        if (!(i < j && j < n)) throw std::invalid_argument("GivensRotation: need 0 <= i < j < n");
        if (!(phi >= 0.0 && phi < kTwoPi)) throw std::domain_error("GivensRotation: phi must lie in [0, 2*pi)");
    }

    double cos_phi() const { return std::cos(phi); }
    double sin_phi() const { return std::sin(phi); }
};

/// Angle law for rotation sampling. Uniform draws phi on [0, 2*pi); fixed
/// mode uses one angle for every rotation and rejects angles within 1e-12
/// of a multiple of pi/2, where cos or sin vanishes and the structural
/// union rule no longer holds with probability 1.
class AngleMode {
public:
    static AngleMode uniform() { return AngleMode(true, 0.0); }

    static AngleMode fixed(double phi) {
        if (!(phi >= 0.0 && phi < kTwoPi)) throw std::domain_error("AngleMode::fixed: phi must lie in [0, 2*pi)");
        if (std::abs(std::remainder(phi, kHalfPi)) < 1e-12)
            throw std::domain_error("AngleMode::fixed: multiples of pi/2 are degenerate");
        return AngleMode(false, phi);
    }

    bool is_uniform() const { return uniform_; }
    double fixed_phi() const { return phi_; }

    double draw(Rng& rng) const { return uniform_ ? rng.uniform_angle() : phi_; }

private:
    AngleMode(bool uniform, double phi) : uniform_(uniform), phi_(phi) {}
    bool uniform_;
    double phi_;
};

/// Uniform pick over all n*(n-1)/2 planes, then the mode's angle.
inline GivensRotation random_rotation(std::uint32_t n, const AngleMode& mode, Rng& rng) {
    const auto [i, j] = rng.uniform_pair(n);
    return GivensRotation(n, i, j, mode.draw(rng));
}

} // namespace eoi
