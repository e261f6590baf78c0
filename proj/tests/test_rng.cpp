#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "conewalk/rng.hpp"

using namespace conewalk;

TEST_CASE("same (seed, stream) reproduces the sequence bit for bit") {
    CounterRng a(123, 5), b(123, 5);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and streams decorrelate") {
    CounterRng a(1, 0), b(2, 0), c(1, 1);
    int equal_ab = 0, equal_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t x = a.next_u64();
        if (x == b.next_u64()) ++equal_ab;
        CounterRng c2(1, 1);
        c2.set_counter(static_cast<std::uint64_t>(i));
        if (x == c2.next_u64()) ++equal_ac;
    }
    (void)c;
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
}

TEST_CASE("set_counter jumps to the exact position") {
    CounterRng a(9, 3);
    std::vector<std::uint64_t> seq(20);
    for (auto& v : seq) v = a.next_u64();
    CounterRng b(9, 3);
    b.set_counter(13);
    CHECK(b.next_u64() == seq[13]);
    CHECK(b.next_u64() == seq[14]);
    b.set_counter(0);
    CHECK(b.next_u64() == seq[0]);
    CHECK(b.counter() == 1);
}

TEST_CASE("uniform draws stay strictly inside (0,1)") {
    CounterRng rng(77, 0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    // the range should actually be explored
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);
}

TEST_CASE("uniform sample moments") {
    CounterRng rng(31, 2);
    const int M = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < M; ++i) {
        const double u = rng.next_uniform();
        s1 += u;
        s2 += u * u;
    }
    const double mean = s1 / M;
    const double var = s2 / M - mean * mean;
    // SE of the mean is sqrt(1/12/M) ~ 6.5e-4
    CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / M));
    CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("normal sample moments") {
    CounterRng rng(4, 0);
    const int M = 200000;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (int i = 0; i < M; ++i) {
        const double z = rng.next_normal();
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
        s4 += z * z * z * z;
    }
    const double mean = s1 / M;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(M)));
    CHECK(std::abs(s2 / M - 1.0) < 3.0 * std::sqrt(2.0 / M));
    CHECK(std::abs(s3 / M) < 3.0 * std::sqrt(15.0 / M));
    CHECK(std::abs(s4 / M - 3.0) < 3.0 * std::sqrt(96.0 / M));
}

TEST_CASE("inverse normal CDF hits tabulated quantiles") {
    CHECK(std::abs(inverse_normal_cdf(0.5)) < 1e-15);
    // Phi^{-1}(0.975) and Phi^{-1}(0.995), standard table values
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.995) == doctest::Approx(2.575829303548901).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-12));
    // symmetry
    for (double p : {0.01, 0.2, 0.37, 0.49}) {
        CHECK(inverse_normal_cdf(p) == doctest::Approx(-inverse_normal_cdf(1.0 - p)).epsilon(1e-13));
    }
    // monotone in the extreme tails without overflow
    CHECK(inverse_normal_cdf(1e-300) < inverse_normal_cdf(1e-16));
    CHECK(std::isfinite(inverse_normal_cdf(1e-300)));
}
