#pragma once

#include "conewalk/cone.hpp"
#include "conewalk/diffeo.hpp"
#include "conewalk/grid.hpp"

namespace conewalk {

/// Orbit coordinates of a positive 1D path: invariant rho and
/// reparametrization phi.
struct DecompR {
    double rho = 1.0;
    Diffeo phi;
};

/// Orbit coordinates of a planar path: (rho, psi, phi, alpha) with
/// psi(t0) = 0 and alpha in [0, 2*pi).
struct DecompR2 {
    double rho = 1.0;
    Path1D psi;
    Diffeo phi;
    double alpha = 0.0;
};

/// Orbit coordinates of a cone path: (rho, psi, phi); psi has a free left
/// endpoint (the rapidity line is not a circle, so no alpha).
struct DecompCone {
    double rho = 1.0;
    Path1D psi;
    Diffeo phi;
};

DecompR decompose_1d(const PositivePath& path);
PositivePath reconstruct_1d(const DecompR& coords);

DecompR2 decompose_2d(const Path2D& path);
Path2D reconstruct_2d(const DecompR2& coords);

DecompCone decompose_cone(const ConePath& path);
ConePath reconstruct_cone(const DecompCone& coords);

struct SplitR {
    DecompR first;
    DecompR second;
};
struct SplitR2 {
    DecompR2 first;
    DecompR2 second;
    int winding = 0;  // integer n absorbed when alpha_2 is reduced mod 2*pi
};
struct SplitCone {
    DecompCone first;
    DecompCone second;
};

/// Splitting maps at an interior grid node t_star, and their inverses.
/// These act on the stored phi^{-1} node values by exact affine maps, so
/// join(split(.)) round-trips at machine precision.
SplitR split_1d(const DecompR& coords, double t_star);
DecompR join_1d(const DecompR& c1, const DecompR& c2, double t_star);

SplitR2 split_2d(const DecompR2& coords, double t_star);
DecompR2 join_2d(const DecompR2& c1, const DecompR2& c2, double t_star, int winding);

SplitCone split_cone(const DecompCone& coords, double t_star);
DecompCone join_cone(const DecompCone& c1, const DecompCone& c2, double t_star);

}  // namespace conewalk
