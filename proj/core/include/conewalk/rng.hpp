#pragma once

#include <cstdint>

namespace conewalk {

/// Counter-based generator: the i-th output is a pure function of
/// (seed, stream, i). Parallel workers draw from disjoint streams and stay
/// bit-reproducible regardless of scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    /// Raw 64-bit word at the current counter.
    std::uint64_t next_u64();

    /// Uniform double strictly inside (0, 1).
    double next_uniform();

    /// Standard normal via the inverse-CDF transform (bit-stable across
    /// platforms, unlike polar/ziggurat rejection schemes).
    double next_normal();

    std::uint64_t counter() const { return counter_; }
    void set_counter(std::uint64_t c) { counter_ = c; }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

/// Inverse of the standard normal CDF (Wichura's PPND16, |err| ~ 1e-16).
double inverse_normal_cdf(double p);

}  // namespace conewalk
