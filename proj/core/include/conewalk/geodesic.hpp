#pragma once

#include <vector>

#include "conewalk/cone.hpp"

namespace conewalk {

struct GeodesicVertex {
    double r = 0.0;
    double theta = 0.0;
    int sheet = 0;
    bool is_origin = false;  // the puncture; not itself a point of the cover
};

struct GeodesicResult {
    double distance = 0.0;
    int geodesic_case = 1;  // 1: chord, 2: through O on one sheet, 3: across sheets
    std::vector<GeodesicVertex> polyline;
};

/// Closed-form geodesic between two covering points.
/// |dtheta| <= pi: straight chord; otherwise the broken line A-O-B of length
/// r_A + r_B. The two formulas agree at |dtheta| = pi.
GeodesicResult geodesic_distance(const CoverPoint& a, const CoverPoint& b);

/// Polar mesh over a truncated patch of the covering for the graph oracle.
struct MeshSpec {
    double r_max = 5.0;
    double theta_min = -10.0;
    double theta_max = 10.0;
    int n_r = 300;
    int n_theta = 300;
    int window = 4;  // chord edges reach up to `window` cells in each index
};

/// Shortest-path distance on a graph over the mesh with exact Euclidean
/// chord weights (plus radial spokes through the puncture). Converges to
/// geodesic_distance from above under refinement.
double mesh_distance_oracle(const CoverPoint& a, const CoverPoint& b, const MeshSpec& spec);

}  // namespace conewalk
