#pragma once

#include <vector>

#include "conewalk/diffeo.hpp"
#include "conewalk/grid.hpp"

namespace conewalk {

// Relative guard for near-lightcone nodes: the 1/(x0^2 - x1^2) integrands
// blow up there, so such paths are rejected rather than clamped.
inline constexpr double kConeGuardFactor = 1e-8;

/// Point strictly inside the future cone x0 > |x1|.
struct ConePoint {
    double x0 = 1.0;
    double x1 = 0.0;

    ConePoint() = default;
    ConePoint(double a, double b);

    double r() const;         // sqrt(x0^2 - x1^2)
    double rapidity() const;  // arctanh(x1/x0)
};

/// Point of the infinite-sheeted covering: radius and unbounded lifted angle.
struct CoverPoint {
    double r = 1.0;
    double theta = 0.0;

    CoverPoint() = default;
    CoverPoint(double r_, double theta_);

    /// Sheet index n with 2*pi*n <= theta < 2*pi*(n+1).
    int sheet() const;
};

/// Path2D constrained to the cone at every node.
struct ConePath {
    Path2D path;

    ConePath() = default;
    explicit ConePath(Path2D p);

    const TimeGrid& grid() const { return path.grid; }
};

/// Path on the covering with a continuous lifted angle.
struct CoverPath {
    TimeGrid grid;
    std::vector<double> r;
    std::vector<double> theta;

    CoverPath() = default;
    CoverPath(TimeGrid g, std::vector<double> r_, std::vector<double> theta_);
};

ConePoint lorentz(double gamma, const ConePoint& p);
ConePath lorentz(double gamma, const ConePath& p);

/// The cone metric quadratic form <v,v> at p, in its four algebraic forms.
/// All four agree; they are kept separate as mutual cross-checks.
double metric_cartesian(const ConePoint& p, double v0, double v1);
double metric_mixed(const ConePoint& p, double v0, double v1);
double metric_lightcone(const ConePoint& p, double v0, double v1);
double metric_log_lightcone(const ConePoint& p, double v0, double v1);

CoverPoint cone_to_cover(const ConePoint& p);
ConePoint cover_to_cone(const CoverPoint& q);
CoverPath cone_to_cover(const ConePath& p);
ConePath cover_to_cone(const CoverPath& q);

/// Lift of a planar path to the covering (continuous angle unwinding).
CoverPath lift_planar(const Path2D& path);
Path2D cover_to_planar(const CoverPath& path);

/// Discretized cone action: sum over cells of <v,v> * dt with the metric
/// coefficients at the cell midpoint.
double cone_action(const ConePath& path);

/// Flat polar action sum (dr^2 + rbar^2 dtheta^2)/dt on the covering.
double flat_polar_action(const CoverPath& path);

/// Diffeomorphism action on cone paths, applied in (r, rapidity) coordinates.
ConePath act_cone(const Diffeo& phi, const ConePath& path);

struct ActionEquivalence {
    double lhs = 0.0;  // decomposition-coordinate action
    double rhs = 0.0;  // Cartesian cone action
    double rel_err = 0.0;
};

/// Compares the action computed in orbit-decomposition coordinates with the
/// Cartesian cone action on the same path.
ActionEquivalence decomposition_action_check(const ConePath& path);

}  // namespace conewalk
