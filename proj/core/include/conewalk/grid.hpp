#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conewalk/errors.hpp"

namespace conewalk {

/// Uniform grid of N cells (N+1 nodes) on [t0, t0+T].
struct TimeGrid {
    double t0 = 0.0;
    double T = 1.0;
    int N = 2;

    TimeGrid() = default;
    TimeGrid(double t0_, double T_, int N_);

    double dt() const { return T / N; }
    double node(int i) const { return t0 + (T * i) / N; }
    double t_end() const { return t0 + T; }
    int n_nodes() const { return N + 1; }

    bool operator==(const TimeGrid&) const = default;
};

/// Piecewise-linear real path on a uniform grid.
struct Path1D {
    TimeGrid grid;
    std::vector<double> values;  // length N+1

    Path1D() = default;
    Path1D(TimeGrid g, std::vector<double> v);

    /// Linear interpolation at time t (clamped to [t0, t0+T]).
    double at(double t) const;
};

/// Path1D with strictly positive node values.
struct PositivePath : Path1D {
    PositivePath() = default;
    PositivePath(TimeGrid g, std::vector<double> v);
    explicit PositivePath(const Path1D& p);
};

/// Piecewise-linear planar path, component-wise storage.
struct Path2D {
    TimeGrid grid;
    std::vector<double> x0;  // length N+1
    std::vector<double> x1;

    Path2D() = default;
    Path2D(TimeGrid g, std::vector<double> a, std::vector<double> b);

    double at0(double t) const;
    double at1(double t) const;
};

// Origin guard: nodes with radius below kOriginGuardFactor * max radius
// are rejected by angle unwinding.
inline constexpr double kOriginGuardFactor = 1e-8;
// Per-step turning limit for unambiguous unwinding.
inline constexpr double kAngleStepLimit = 1.5707963267948966;  // pi/2

/// Trapezoid-rule integral of node values over the grid.
double trapezoid(std::span<const double> f_values, const TimeGrid& grid);

/// Partial trapezoid integrals: out[i] = integral over [t0, node(i)], out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> f_values,
                                         const TimeGrid& grid);

/// Discrete kinetic action sum (dxi)^2 / dtau over cells.
double discrete_action(const Path1D& path);
double discrete_action_2d(const Path2D& path);

/// Continuous lifted angle of a planar path.
/// theta_0 is the principal angle of the first node in [0, 2pi);
/// each step adds the signed turning angle between consecutive position
/// vectors. Throws StepTooCoarse if a step turns by >= pi/2, OriginHit if a
/// node radius falls under the origin guard.
Path1D unwind_angle(const Path2D& path);

/// Linear interpolation on monotone increasing breakpoints xs.
double pl_interp(std::span<const double> xs, std::span<const double> ys, double x);

/// Node derivative by 2nd-order finite differences (central interior,
/// one-sided 2nd-order at the ends).
std::vector<double> fd_derivative(std::span<const double> values, double dt);
std::vector<double> fd_second_derivative(std::span<const double> values, double dt);

}  // namespace conewalk
