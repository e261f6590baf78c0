#pragma once

#include <cstdint>

#include "conewalk/grid.hpp"
#include "conewalk/rng.hpp"

namespace conewalk {

struct WienerParams {
    double sigma = 1.0;      // diffusion scale, > 0
    double start0 = 0.0;     // left endpoint (first component)
    double start1 = 0.0;     // second component, 2D samplers only
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    void validate() const;
};

/// Free path: independent Gaussian increments, variance sigma^2 * dt.
Path1D sample_free(const WienerParams& params, const TimeGrid& grid);

/// Pinned path by sequential conditional Gaussians; the right endpoint is
/// hit exactly, with no drift accumulation.
Path1D sample_bridge(const WienerParams& params, const TimeGrid& grid, double end_value);

Path2D sample_free_2d(const WienerParams& params, const TimeGrid& grid);
Path2D sample_bridge_2d(const WienerParams& params, const TimeGrid& grid,
                        double end0, double end1);

/// Log density of the path's increments with respect to the N-dimensional
/// flat volume; the left endpoint carries no density term.
double log_density(const Path1D& path, const WienerParams& params);

}  // namespace conewalk
