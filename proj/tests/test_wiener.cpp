#include <doctest.h>

#include <cmath>
#include <vector>

#include "conewalk/grid.hpp"
#include "conewalk/wiener.hpp"

using namespace conewalk;

TEST_CASE("free path starts at the requested point and is bit reproducible") {
    WienerParams p;
    p.sigma = 0.7;
    p.start0 = 3.25;
    p.seed = 11;
    p.stream = 4;
    TimeGrid g(0.0, 2.0, 64);
    Path1D a = sample_free(p, g);
    Path1D b = sample_free(p, g);
    CHECK(a.values[0] == 3.25);
    for (int i = 0; i <= 64; ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("free endpoint distribution has variance sigma^2 T") {
    WienerParams p;
    p.sigma = 1.3;
    p.seed = 5;
    TimeGrid g(0.0, 0.8, 32);
    const int M = 20000;
    double s1 = 0.0, s2 = 0.0;
    for (int m = 0; m < M; ++m) {
        p.stream = static_cast<std::uint64_t>(m);
        const double x = sample_free(p, g).values.back();
        s1 += x;
        s2 += x * x;
    }
    const double var_true = p.sigma * p.sigma * 0.8;
    const double mean = s1 / M;
    CHECK(std::abs(mean) < 3.0 * std::sqrt(var_true / M));
    CHECK(std::abs(s2 / M - mean * mean - var_true) < 3.0 * var_true * std::sqrt(2.0 / M));
}

TEST_CASE("tiny sigma freezes the path near its start") {
    WienerParams p;
    p.sigma = 1e-9;
    p.start0 = 1.0;
    p.seed = 2;
    TimeGrid g(0.0, 1.0, 128);
    Path1D x = sample_free(p, g);
    for (double v : x.values) CHECK(std::abs(v - 1.0) < 1e-7);
}

TEST_CASE("bridge pins both endpoints exactly") {
    WienerParams p;
    p.sigma = 2.0;
    p.start0 = -1.0;
    p.seed = 3;
    for (int m = 0; m < 50; ++m) {
        p.stream = static_cast<std::uint64_t>(m);
        TimeGrid g(0.0, 1.5, 33);
        Path1D x = sample_bridge(p, g, 4.5);
        CHECK(x.values.front() == -1.0);
        CHECK(x.values.back() == 4.5);
    }
}

TEST_CASE("bridge midpoint law: mean is the chord, variance sigma^2 T/4") {
    WienerParams p;
    p.sigma = 1.0;
    p.start0 = 0.0;
    p.seed = 8;
    TimeGrid g(0.0, 1.0, 2);  // single free node at T/2
    const int M = 40000;
    double s1 = 0.0, s2 = 0.0;
    for (int m = 0; m < M; ++m) {
        p.stream = static_cast<std::uint64_t>(m);
        const double x = sample_bridge(p, g, 1.0).values[1];
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / M;
    const double var = s2 / M - mean * mean;
    CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(0.25 / M));
    CHECK(std::abs(var - 0.25) < 3.0 * 0.25 * std::sqrt(2.0 / M));
}

TEST_CASE("2D free components are independent standard diffusions") {
    WienerParams p;
    p.sigma = 1.0;
    p.seed = 21;
    TimeGrid g(0.0, 1.0, 16);
    const int M = 20000;
    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int m = 0; m < M; ++m) {
        p.stream = static_cast<std::uint64_t>(m);
        Path2D w = sample_free_2d(p, g);
        const double x = w.x0.back(), y = w.x1.back();
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double mx = sx / M, my = sy / M;
    CHECK(std::abs(sxx / M - mx * mx - 1.0) < 3.0 * std::sqrt(2.0 / M));
    CHECK(std::abs(syy / M - my * my - 1.0) < 3.0 * std::sqrt(2.0 / M));
    // cross-covariance of independent N(0,1) pairs has SE 1/sqrt(M)
    CHECK(std::abs(sxy / M - mx * my) < 3.0 / std::sqrt(static_cast<double>(M)));
}

TEST_CASE("2D bridge pins the planar endpoint exactly") {
    WienerParams p;
    p.sigma = 0.5;
    p.start0 = 1.0;
    p.start1 = -2.0;
    p.seed = 6;
    p.stream = 9;
    TimeGrid g(0.0, 1.0, 20);
    Path2D w = sample_bridge_2d(p, g, 0.25, 0.75);
    CHECK(w.x0.front() == 1.0);
    CHECK(w.x1.front() == -2.0);
    CHECK(w.x0.back() == 0.25);
    CHECK(w.x1.back() == 0.75);
}

TEST_CASE("log_density of a constant single-cell path is the Gaussian peak") {
    WienerParams p;
    p.sigma = 1.0;
    TimeGrid g(0.0, 1.0, 1);
    Path1D flat(g, {2.0, 2.0});
    // zero increment over dt = 1: -(1/2) log(2 pi)
    CHECK(log_density(flat, p) == doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("log_density is invariant under a global shift") {
    WienerParams p;
    p.sigma = 1.7;
    p.seed = 14;
    p.stream = 0;
    TimeGrid g(0.0, 2.0, 40);
    Path1D x = sample_free(p, g);
    std::vector<double> shifted = x.values;
    for (double& v : shifted) v += 5.0;
    CHECK(log_density(Path1D(g, shifted), p) == doctest::Approx(log_density(x, p)).epsilon(1e-12));
}

TEST_CASE("log_density normalizes: quadrature of exp over one free node") {
    // N = 2 with the endpoint integrated out reduces to a 1D Gaussian whose
    // integral over the middle node at a fixed final value gives the
    // single-cell density from 0 to that value (Chapman-Kolmogorov).
    WienerParams p;
    p.sigma = 1.0;
    TimeGrid g2(0.0, 1.0, 2);
    TimeGrid g1(0.0, 1.0, 1);
    const double xf = 0.7;
    double integral = 0.0;
    const double lo = -8.0, hi = 8.0;
    const int K = 4000;
    const double h = (hi - lo) / K;
    for (int k = 0; k <= K; ++k) {
        const double xm = lo + k * h;
        const double w = (k == 0 || k == K) ? 0.5 : 1.0;
        integral += w * h * std::exp(log_density(Path1D(g2, {0.0, xm, xf}), p));
    }
    const double direct = std::exp(log_density(Path1D(g1, {0.0, xf}), p));
    CHECK(integral == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("sample_free increments actually follow the stated density") {
    // average log-density of sampled paths matches the analytic expectation
    // -N/2 (1 + log(2 pi sigma^2 dt))
    WienerParams p;
    p.sigma = 0.9;
    p.seed = 33;
    const int N = 16;
    TimeGrid g(0.0, 1.0, N);
    const int M = 20000;
    double s = 0.0;
    for (int m = 0; m < M; ++m) {
        p.stream = static_cast<std::uint64_t>(m);
        s += log_density(sample_free(p, g), p);
    }
    const double expected =
        -0.5 * N * (1.0 + std::log(2.0 * M_PI * p.sigma * p.sigma * g.dt()));
    // each term has variance 1/2, so the mean has SE sqrt(N/2/M)
    CHECK(std::abs(s / M - expected) < 3.0 * std::sqrt(0.5 * N / M));
}

TEST_CASE("parameter validation") {
    WienerParams p;
    p.sigma = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.sigma = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.sigma = 1.0;
    CHECK_NOTHROW(p.validate());
}
