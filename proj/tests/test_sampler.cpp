#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "eoi/givens.hpp"
#include "eoi/sampler.hpp"
#include "eoi/sparse_ortho.hpp"

using namespace eoi;

namespace {

SparseOrthoMatrix one_rotation_on_identity(std::size_t n, std::uint32_t i, std::uint32_t j, double phi) {
    auto a = SparseOrthoMatrix::embedded_identity(n, n);
    a.apply_rotation_right(GivensRotation(static_cast<std::uint32_t>(n), i, j, phi));
    return a;
}

} // namespace

TEST_CASE("GivensRotation validates its construction") {
    CHECK_THROWS_AS(GivensRotation(1, 0, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GivensRotation(4, 2, 2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GivensRotation(4, 3, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GivensRotation(4, 0, 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GivensRotation(4, 0, 1, -0.1), std::domain_error);
    CHECK_THROWS_AS(GivensRotation(4, 0, 1, kTwoPi), std::domain_error);
    CHECK_NOTHROW(GivensRotation(4, 0, 3, 0.0));
}

TEST_CASE("fixed angle mode rejects degenerate angles") {
    CHECK_THROWS_AS(AngleMode::fixed(0.0), std::domain_error);
    CHECK_THROWS_AS(AngleMode::fixed(std::numbers::pi / 2), std::domain_error);
    CHECK_THROWS_AS(AngleMode::fixed(std::numbers::pi), std::domain_error);
    CHECK_THROWS_AS(AngleMode::fixed(3 * std::numbers::pi / 2), std::domain_error);
    CHECK_THROWS_AS(AngleMode::fixed(-1.0), std::domain_error);
    CHECK_NOTHROW(AngleMode::fixed(std::numbers::pi / 180)); // small-angle ablation value
    CHECK_NOTHROW(AngleMode::fixed(std::numbers::pi * 80 / 180));
}

TEST_CASE("one rotation on the identity has exactly 5 structural nonzeros") {
    // Columns i and j end with support {i, j}; the other n-2 diagonal
    // entries survive: 2*2 + 1 = 5 for n = 3.
    Rng rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        auto a = one_rotation_on_identity(3, 0, 1, rng.uniform_angle());
        CHECK(a.nnz() == 5);
        CHECK(a.density() == doctest::Approx(5.0 / 9.0));
    }
}

TEST_CASE("support union is idempotent") {
    const double phi = 1.234;
    auto once = one_rotation_on_identity(6, 1, 4, phi);
    auto twice = once;
    twice.apply_rotation_right(GivensRotation(6, 1, 4, 2.345));
    CHECK(twice.nnz() == once.nnz());
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 6; ++c) CHECK(twice.in_support(r, c) == once.in_support(r, c));
}

TEST_CASE("a row with exactly one of the pair nonzero gets both after rotation") {
    auto a = SparseOrthoMatrix::embedded_identity(4, 4);
    // Row 0 has support only in column 0; rotate columns (0, 2).
    CHECK(a.in_support(0, 0));
    CHECK_FALSE(a.in_support(0, 2));
    a.apply_rotation_right(GivensRotation(4, 0, 2, 0.7));
    CHECK(a.in_support(0, 0));
    CHECK(a.in_support(0, 2));
}

TEST_CASE("rotation changes no entry outside the touched columns") {
    Rng rng(3);
    auto a = sample_square(8, 0.5, AngleMode::uniform(), rng);
    auto before = a;
    a.apply_rotation_right(GivensRotation(8, 2, 5, 1.1));
    for (std::size_t c = 0; c < 8; ++c) {
        if (c == 2 || c == 5) continue;
        for (std::size_t r = 0; r < 8; ++r) {
            CHECK(a.value(r, c) == before.value(r, c));
            CHECK(a.in_support(r, c) == before.in_support(r, c));
        }
    }
}

TEST_CASE("rotation size must match the column count") {
    auto a = SparseOrthoMatrix::embedded_identity(3, 5);
    CHECK_THROWS_AS(a.apply_rotation_right(GivensRotation(3, 0, 1, 0.5)), std::invalid_argument);
    CHECK_NOTHROW(a.apply_rotation_right(GivensRotation(5, 0, 4, 0.5)));
}

TEST_CASE("sample_square trivial cases") {
    Rng rng(10);
    SUBCASE("target already met by the identity") {
        SampleStats stats;
        auto a = sample_square(4, 0.25, AngleMode::uniform(), rng, &stats);
        CHECK(stats.rotations == 0);
        CHECK_FALSE(stats.floor_warning);
        CHECK(a.density() == 0.25);
        CHECK(orthogonality_score(a) == 0.0);
    }
    SUBCASE("a single 2x2 Givens is fully dense") {
        SampleStats stats;
        auto a = sample_square(2, 1.0, AngleMode::uniform(), rng, &stats);
        CHECK(stats.rotations == 1);
        CHECK(a.density() == 1.0);
    }
    SUBCASE("below the identity floor warns") {
        SampleStats stats;
        auto a = sample_square(8, 0.01, AngleMode::uniform(), rng, &stats);
        CHECK(stats.floor_warning);
        CHECK(a.density() == 0.125);
    }
    SUBCASE("n = 1 returns the 1x1 identity") {
        auto a = sample_square(1, 0.7, AngleMode::uniform(), rng);
        CHECK(a.rows() == 1);
        CHECK(a.value(0, 0) == 1.0);
    }
    SUBCASE("density outside [0, 1] is a domain error") {
        CHECK_THROWS_AS(sample_square(4, 1.5, AngleMode::uniform(), rng), std::domain_error);
        CHECK_THROWS_AS(sample_square(4, -0.1, AngleMode::uniform(), rng), std::domain_error);
    }
}

TEST_CASE("orthogonality scores of a masked rotation, by hand") {
    // [[r, -r], [r, 0]] with r = sqrt(2)/2: Gram deviation has Frobenius
    // norm sqrt(0.75).
    const double r = std::sqrt(2.0) / 2.0;
    auto a = SparseOrthoMatrix::from_triplets(2, 2, {{0, 0, r}, {0, 1, -r}, {1, 0, r}});
    CHECK(orthogonality_score(a) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("orthogonality over the full size/density grid") {
    const std::size_t sizes[] = {4, 16, 64, 256};
    const double densities[] = {-1.0, 0.0625, 0.25, 0.5, 1.0}; // -1 stands for 1/n
    for (std::size_t n : sizes) {
        for (double d : densities) {
            const double target = d < 0.0 ? 1.0 / static_cast<double>(n) : d;
            int checked = 0;
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                Rng rng(seed * 977 + n);
                auto a = sample_square(n, target, AngleMode::uniform(), rng);
                REQUIRE(orthogonality_score(a) < 1e-8);
                const double floor = 1.0 / static_cast<double>(n);
                const double lo = std::max(target, floor);
                REQUIRE(a.density() >= lo);
                REQUIRE(a.density() <= lo + floor + 1e-15);
                ++checked;
            }
            CHECK(checked == 100);
        }
    }
}

TEST_CASE("structural nonzeros carry real magnitude under random angles") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const std::size_t n = seed % 2 ? 16 : 64;
        auto a = sample_square(n, 0.4, AngleMode::uniform(), rng);
        std::size_t tiny = 0, outside_nonzero = 0;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < n; ++r) {
                if (a.in_support(r, c)) {
                    if (std::abs(a.value(r, c)) < 1e-12) ++tiny;
                } else if (a.value(r, c) != 0.0) {
                    ++outside_nonzero;
                }
            }
        REQUIRE(tiny == 0);
        REQUIRE(outside_nonzero == 0);
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    Rng r1(123), r2(123);
    auto a = sample_square(32, 0.3, AngleMode::uniform(), r1);
    auto b = sample_square(32, 0.3, AngleMode::uniform(), r2);
    CHECK(a == b);
    Rng r3(124);
    auto c = sample_square(32, 0.3, AngleMode::uniform(), r3);
    CHECK(a != c);
}

TEST_CASE("fixed-angle sampling also reaches the target exactly orthogonal") {
    Rng rng(77);
    auto a = sample_square(32, 0.4, AngleMode::fixed(std::numbers::pi * 80 / 180), rng);
    CHECK(a.density() >= 0.4);
    CHECK(orthogonality_score(a) < 1e-8);
}

TEST_CASE("rectangular sampling") {
    SUBCASE("wide floor case returns [I | 0] untouched") {
        Rng rng(5);
        SampleStats stats;
        auto a = sample_rectangular(2, 4, 0.125, AngleMode::uniform(), rng, &stats);
        CHECK(stats.rotations == 0);
        CHECK(stats.floor_warning);
        CHECK(a.density() == 0.25); // 1/m floor
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 4; ++c) CHECK(a.value(r, c) == (r == c ? 1.0 : 0.0));
    }
    SUBCASE("single-row sampling keeps unit norm and grows one entry per rotation") {
        Rng rng(6);
        SampleStats stats;
        auto a = sample_rectangular(1, 5, 0.4, AngleMode::uniform(), rng, &stats);
        CHECK(a.density() >= 0.4);
        double norm2 = 0.0;
        for (std::size_t c = 0; c < 5; ++c) norm2 += a.value(0, c) * a.value(0, c);
        CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-12);
        CHECK(a.nnz() <= 1 + stats.rotations);
    }
    SUBCASE("tall output is the transpose of a wide sample") {
        Rng rng(7);
        auto a = sample_rectangular(4, 2, 0.9, AngleMode::uniform(), rng);
        CHECK(a.rows() == 4);
        CHECK(a.cols() == 2);
        // Columns orthonormal: Gram of columns = I_2.
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) {
                double dot = 0.0;
                for (std::size_t r = 0; r < 4; ++r) dot += a.value(r, x) * a.value(r, y);
                CHECK(std::abs(dot - (x == y ? 1.0 : 0.0)) < 1e-10);
            }
    }
    SUBCASE("density window for wide shapes") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed + 1000);
            auto a = sample_rectangular(8, 32, 0.2, AngleMode::uniform(), rng);
            const double floor = 1.0 / 32.0;
            CHECK(a.density() >= 0.2);
            CHECK(a.density() <= 0.2 + floor + 1e-15);
        }
    }
}

TEST_CASE("density accessor matches the counter") {
    auto a = SparseOrthoMatrix::embedded_identity(6, 6);
    CHECK(density(a) == doctest::Approx(1.0 / 6.0));
    Rng rng(9);
    auto b = sample_square(6, 1.0, AngleMode::uniform(), rng);
    CHECK(density(b) == 1.0);
    std::size_t pop = 0;
    for (std::size_t c = 0; c < 6; ++c)
        for (std::size_t r = 0; r < 6; ++r) pop += b.in_support(r, c) ? 1 : 0;
    CHECK(pop == b.nnz());
}

TEST_CASE("scaling multiplies values and the recorded sigma_w only") {
    Rng rng(4);
    auto a = sample_square(8, 0.5, AngleMode::uniform(), rng);
    auto same = scale_weights(a, 1.0);
    CHECK(same.values() == a.values());

    auto eye = SparseOrthoMatrix::embedded_identity(2, 2);
    auto scaled = scale_weights(eye, 2.0);
    CHECK(scaled.sigma_w() == 2.0);
    auto g = short_side_gram(scaled);
    CHECK(g(0, 0) == 4.0);
    CHECK(g(1, 1) == 4.0);
    CHECK(g(0, 1) == 0.0);
    CHECK_THROWS_AS(scale_weights(a, 0.0), std::domain_error);
    CHECK_THROWS_AS(scale_weights(a, -2.0), std::domain_error);
}

TEST_CASE("bias sampling") {
    Rng rng(2);
    auto zeros = sample_biases(16, 0.0, rng);
    for (double v : zeros) CHECK(v == 0.0);

    auto b = sample_biases(20000, 0.5, rng);
    double sum = 0.0, sum2 = 0.0;
    for (double v : b) {
        sum += v;
        sum2 += v * v;
    }
    CHECK(std::abs(sum / b.size()) < 0.02);
    CHECK(std::abs(sum2 / b.size() - 0.25) < 0.02);
    CHECK_THROWS_AS(sample_biases(4, -1.0, rng), std::domain_error);
}
