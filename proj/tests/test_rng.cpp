#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "eoi/rng.hpp"

using eoi::Rng;

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    Rng a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("uniform01 stays in [0, 1) with sane mean") {
    Rng rng(7);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("uniform_index covers the range without bias") {
    Rng rng(3);
    int counts[10] = {};
    const int n = 50000;
    for (int i = 0; i < n; ++i) ++counts[rng.uniform_index(10)];
    for (int k = 0; k < 10; ++k) CHECK(std::abs(counts[k] - n / 10) < 5 * std::sqrt(n * 0.1 * 0.9));
    CHECK_THROWS_AS(rng.uniform_index(0), std::invalid_argument);
}

TEST_CASE("uniform_pair draws every unordered pair") {
    Rng rng(11);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto [a, b] = rng.uniform_pair(5);
        REQUIRE(a < b);
        REQUIRE(b < 5);
        seen.insert({a, b});
    }
    CHECK(seen.size() == 10); // C(5, 2)
    CHECK_THROWS_AS(rng.uniform_pair(1), std::invalid_argument);
}

TEST_CASE("normal moments") {
    Rng rng(5);
    double sum = 0.0, sum2 = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(std::abs(sum2 / n - 1.0) < 0.03);
}

TEST_CASE("derived streams are reproducible and distinct") {
    CHECK(Rng::derive_seed(9, 0) == Rng::derive_seed(9, 0));
    CHECK(Rng::derive_seed(9, 0) != Rng::derive_seed(9, 1));
    CHECK(Rng::derive_seed(9, 0) != Rng::derive_seed(10, 0));
}
