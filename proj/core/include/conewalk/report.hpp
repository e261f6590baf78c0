#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace conewalk {

/// Every Monte Carlo result carries its uncertainty, sample accounting and
/// the seed that reproduces it bit-for-bit.
struct McReport {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
    long n_rejected = 0;
    std::uint64_t seed = 0;
    bool pass = true;
    std::map<std::string, std::string> metadata;
};

}  // namespace conewalk
