#pragma once

#include <map>
#include <string>
#include <vector>

#include "conewalk/cone.hpp"
#include "conewalk/decomp.hpp"
#include "conewalk/diffeo.hpp"
#include "conewalk/report.hpp"
#include "conewalk/wiener.hpp"

namespace conewalk {

/// Pinned-kernel query between two covering points; sheet_delta selects the
/// winding class.
struct KernelQuery {
    CoverPoint a;
    CoverPoint b;
    double sigma = 1.0;
    double T = 1.0;
    int sheet_delta = 0;
};

/// Samples a cone path as the pushforward of a planar Wiener path through
/// the covering isometry. Paths that trip the origin guard or the angle
/// step limit are resampled on a sub-counter; the count lands in
/// *n_rejected.
ConePath sample_cone_path(const WienerParams& params, const TimeGrid& grid,
                          const ConePoint& start, long* n_rejected = nullptr);

/// Per-path algebraic check of boost equivariance of the cone
/// decomposition: rho and phi unchanged, psi shifted by exactly gamma.
/// estimate is the worst deviation over the ensemble.
McReport check_lorentz_invariance(const WienerParams& params, const TimeGrid& grid,
                                  const ConePoint& start, double gamma, long M,
                                  int threads);

/// Rotation analog on the plane: alpha shifts by gamma mod 2*pi, the rest
/// is unchanged.
McReport check_rotation_invariance(const WienerParams& params, const TimeGrid& grid,
                                   double start0, double start1, double gamma, long M,
                                   int threads);

/// Registered path functionals for the splitting checks.
/// ids: "endpoint", "cos_endpoint", "exp_neg_half_int_sq".
double eval_functional(const std::string& id, const Path1D& path);
std::vector<std::string> functional_ids();

/// Splitting identity: the direct estimator over full paths against the
/// two-stage estimator (sample to t_star, restart from the reached value).
/// Also runs the deterministic decomposition sub-check: orbit coordinates
/// of the restricted legs must coincide with the splitting-map output.
McReport check_markov_split(const std::string& functional_id, double t_star,
                            const WienerParams& params, const TimeGrid& grid, long M,
                            int threads);

/// Finite-dimensional log density ratio of the discrete action map
/// (increment densities plus the exact Jacobian); converges to
/// log_radon_nikodym as the grid refines.
double discrete_log_radon_nikodym(const Diffeo& phi, const Path1D& path, double sigma);

/// Change-of-variables identity E[F] = E[F(phi.xi) * P_hat(xi)] with the
/// left endpoint drawn from N(0, start_sd^2) so the discrete identity is
/// exact at every N.
McReport check_quasi_invariance(const Diffeo& phi, const std::string& functional_id,
                                const WienerParams& params, const TimeGrid& grid, long M,
                                int threads, double start_sd = 1.0);

struct WindingHistogram {
    std::map<int, long> counts;
    long total = 0;
    long rejected = 0;
};

/// Winding-class kernel estimate: planar bridge endpoint density times the
/// MC probability that the lifted angle lands in class sheet_delta.
McReport kernel_mc(const KernelQuery& query, int N, std::uint64_t seed, long M,
                   int threads, WindingHistogram* histogram = nullptr);

/// Free planar heat kernel value between the planar projections, for wide
/// domain cross-checks.
double free_planar_kernel(const KernelQuery& query);

struct PdeMeshSpec {
    double r_min = 0.1;
    double r_max = 5.0;
    double theta_min = -8.0;
    double theta_max = 8.0;
    int n_r = 180;
    int n_theta = 360;
    double safety = 0.4;  // fraction of the explicit stability bound
};

/// Finite-difference solution of the heat-type equation on the flat polar
/// covering strip (diffusivity sigma^2/2, absorbing boundaries), evaluated
/// at query.b at time query.T from a discrete delta at query.a.
double kernel_pde_oracle(const KernelQuery& query, const PdeMeshSpec& mesh);

/// Refinement study of the action identity: relative gap between the
/// Cartesian cone action and the decomposition-coordinate action, over the
/// given grid sizes. estimate is the fitted log-log decay slope;
/// metadata records the worst relative error per N.
McReport check_action_identity(const WienerParams& params, const ConePoint& start,
                               double T, const std::vector<int>& grid_sizes,
                               int n_paths, int threads);

/// Mutual agreement of the four algebraic forms of the cone metric on
/// random (point, velocity) pairs. estimate is the worst relative spread.
McReport check_metric_forms(std::uint64_t seed, long n_pairs);

/// Closed-form geodesic distances against the mesh shortest-path oracle on
/// pairs spanning all three cases, including the continuity boundary.
/// estimate is the worst absolute error.
McReport check_geodesics(std::uint64_t seed, int n_pairs);

/// join(split) roundtrip of the orbit coordinates in all three geometries,
/// plus the rho consistency relation. estimate is the worst deviation.
McReport check_splitting_roundtrip(std::uint64_t seed, int n_cases);

}  // namespace conewalk
