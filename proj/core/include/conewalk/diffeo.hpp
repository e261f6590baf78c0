#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "conewalk/grid.hpp"

namespace conewalk {

/// Orientation-preserving diffeomorphism of [t0, t0+T] fixing the endpoints.
///
/// Both the forward node values phi(tau_i) and the inverse node values
/// phi^{-1}(tau_i) are stored; whichever side the object was built from is
/// kept exact, the other is obtained by monotone piecewise-linear inversion
/// (or Newton refinement when analytic providers are attached). Keeping the
/// inverse nodes exact is what makes the splitting maps round-trip at the
/// 1e-12 level.
class Diffeo {
public:
    using Provider = std::function<double(double)>;

    /// Empty object; assign from one of the factories before use.
    Diffeo() = default;

    static Diffeo identity(const TimeGrid& grid);
    static Diffeo from_forward_nodes(const TimeGrid& grid, std::vector<double> phi);
    static Diffeo from_inverse_nodes(const TimeGrid& grid, std::vector<double> inv);
    /// Analytic family: node values are sampled from `phi`, derivatives come
    /// from the providers instead of finite differences.
    static Diffeo analytic(const TimeGrid& grid, Provider phi, Provider dphi,
                           Provider ddphi);

    const TimeGrid& grid() const { return grid_; }
    const std::vector<double>& forward_nodes() const { return fwd_; }
    const std::vector<double>& inverse_nodes() const { return inv_; }
    bool has_analytic() const { return static_cast<bool>(dphi_); }

    /// Piecewise-linear evaluation of phi / phi^{-1} at an arbitrary time.
    double forward(double t) const;
    double inverse(double t) const;

    /// phi_dot at grid nodes (analytic provider or 2nd-order differences).
    std::vector<double> deriv_nodes() const;
    /// phi_ddot at grid nodes.
    std::vector<double> second_deriv_nodes() const;
    /// d/dtau phi^{-1} at grid nodes.
    std::vector<double> inverse_deriv_nodes() const;

    /// The inverse diffeomorphism on the same grid (node arrays swapped, so
    /// inverting twice is an exact identity).
    Diffeo inverted() const;

private:
    void validate() const;

    TimeGrid grid_;
    std::vector<double> fwd_;
    std::vector<double> inv_;
    Provider phi_, dphi_, ddphi_;
};

/// Node-value realization of the path action xi -> phi.xi as a linear map:
/// (A xi)_i = scale_i * lerp(xi; cell_i, weight_i).
struct ActionMap {
    std::vector<int> cell;
    std::vector<double> weight;
    std::vector<double> scale;

    Path1D apply(const Path1D& path) const;
};

ActionMap make_action_map(const Diffeo& phi);

/// The action realized on the phi-adapted grid: the input path is read at
/// the nodes u_i = phi^{-1}(tau_i) and rescaled, so the map on those values
/// is diagonal and its Jacobian is exact. The node-value ActionMap above
/// loses rank once phi^{-1} drifts more than one cell from the identity
/// (no sample point lands in some hat-function support), which rules it
/// out for fine grids.
struct AdaptedAction {
    std::vector<double> u;      // phi^{-1} at the uniform nodes
    std::vector<double> du;     // u_{i+1} - u_i, all > 0
    std::vector<double> scale;  // 1 / sqrt(u_dot_i)
    double log_abs_det = 0.0;   // sum log scale_i
};

AdaptedAction make_adapted_action(const Diffeo& phi);

/// Exponential test family phi(tau) = t0 + T (e^{a s} - 1)/(e^a - 1) with
/// s = (tau - t0)/T; constant Schwarzian -a^2 / (2 T^2).
Diffeo exponential_diffeo(const TimeGrid& grid, double a);

/// log |det A| of the discrete action map (exact, via LU).
double action_log_abs_det(const ActionMap& map);

/// (phi.xi)(tau) = xi(phi^{-1}(tau)) / sqrt(d/dtau phi^{-1}(tau)).
Path1D act_1d(const Diffeo& phi, const Path1D& path);

/// Planar action: radial part rescaled, lifted angle reparametrized.
Path2D act_2d(const Diffeo& phi, const Path2D& path);

/// Schwarzian derivative (phi_ddot/phi_dot)' - (phi_ddot/phi_dot)^2 / 2 at
/// all grid nodes.
std::vector<double> schwarzian_nodes(const Diffeo& phi);
double schwarzian(const Diffeo& phi, int node);

/// Radon-Nikodym density of the pushforward of the Wiener measure under the
/// diffeomorphism action, evaluated on a path.
double log_radon_nikodym(const Diffeo& phi, const Path1D& path);
double radon_nikodym(const Diffeo& phi, const Path1D& path);

/// Log of the explicit density factor of the quasi-invariant measure on the
/// group (everything except the generalized Haar factor, which only cancels
/// in ratios over a common reference discretization).
double mu_log_density(const Diffeo& phi, double sigma);
double mu_log_density_ratio(const Diffeo& phi_a, const Diffeo& phi_b, double sigma);

}  // namespace conewalk
