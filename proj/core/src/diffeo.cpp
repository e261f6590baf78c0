#include "conewalk/diffeo.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace conewalk {

namespace {

constexpr double kMinSlope = 1e-8;  // phi_dot below this is treated as degenerate

std::vector<double> grid_nodes(const TimeGrid& g) {
    std::vector<double> t(g.N + 1);
    for (int i = 0; i <= g.N; ++i) t[i] = g.node(i);
    return t;
}

}  // namespace

void Diffeo::validate() const {
    const double tol = 1e-9 * std::max(1.0, grid_.T);
    if (std::abs(fwd_.front() - grid_.t0) > tol || std::abs(fwd_.back() - grid_.t_end()) > tol) {
        throw NonMonotone("Diffeo: endpoints not fixed");
    }
    const double h = grid_.dt();
    for (int i = 0; i < grid_.N; ++i) {
        if (!((fwd_[i + 1] - fwd_[i]) / h > kMinSlope)) {
            throw NonMonotone("Diffeo: not strictly increasing at node " + std::to_string(i));
        }
    }
}

Diffeo Diffeo::identity(const TimeGrid& grid) {
    Diffeo d;
    d.grid_ = grid;
    d.fwd_ = grid_nodes(grid);
    d.inv_ = d.fwd_;
    return d;
}

Diffeo Diffeo::from_forward_nodes(const TimeGrid& grid, std::vector<double> phi) {
    Diffeo d;
    d.grid_ = grid;
    d.fwd_ = std::move(phi);
    if (d.fwd_.size() != static_cast<std::size_t>(grid.N) + 1) {
        throw NonMonotone("Diffeo: node count mismatch");
    }
    d.fwd_.front() = grid.t0;
    d.fwd_.back() = grid.t_end();
    d.validate();
    auto t = grid_nodes(grid);
    d.inv_.resize(t.size());
    for (int i = 0; i <= grid.N; ++i) d.inv_[i] = pl_interp(d.fwd_, t, t[i]);
    d.inv_.front() = grid.t0;
    d.inv_.back() = grid.t_end();
    return d;
}

Diffeo Diffeo::from_inverse_nodes(const TimeGrid& grid, std::vector<double> inv) {
    // phi^{-1} is itself an endpoint-fixing increasing function; build its
    // Diffeo and swap.
    Diffeo d = from_forward_nodes(grid, std::move(inv));
    std::swap(d.fwd_, d.inv_);
    return d;
}

Diffeo Diffeo::analytic(const TimeGrid& grid, Provider phi, Provider dphi, Provider ddphi) {
    Diffeo d;
    d.grid_ = grid;
    auto t = grid_nodes(grid);
    d.fwd_.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) d.fwd_[i] = phi(t[i]);
    d.fwd_.front() = grid.t0;
    d.fwd_.back() = grid.t_end();
    d.validate();
    // Inverse nodes by Newton from the piecewise-linear guess.
    d.inv_.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        double u = pl_interp(d.fwd_, t, t[i]);
        for (int it = 0; it < 30; ++it) {
            double f = phi(u) - t[i];
            double df = dphi(u);
            if (!(df > kMinSlope)) throw NonMonotone("Diffeo: analytic slope too small");
            double step = f / df;
            u -= step;
            u = std::clamp(u, grid.t0, grid.t_end());
            if (std::abs(step) < 1e-15 * std::max(1.0, grid.T)) break;
        }
        d.inv_[i] = u;
    }
    d.inv_.front() = grid.t0;
    d.inv_.back() = grid.t_end();
    d.phi_ = std::move(phi);
    d.dphi_ = std::move(dphi);
    d.ddphi_ = std::move(ddphi);
    return d;
}

double Diffeo::forward(double t) const {
    if (phi_) return phi_(std::clamp(t, grid_.t0, grid_.t_end()));
    auto tn = grid_nodes(grid_);
    return pl_interp(tn, fwd_, t);
}

double Diffeo::inverse(double t) const {
    auto tn = grid_nodes(grid_);
    return pl_interp(fwd_, tn, t);
}

std::vector<double> Diffeo::deriv_nodes() const {
    if (dphi_) {
        auto t = grid_nodes(grid_);
        std::vector<double> d(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) d[i] = dphi_(t[i]);
        return d;
    }
    return fd_derivative(fwd_, grid_.dt());
}

std::vector<double> Diffeo::second_deriv_nodes() const {
    if (ddphi_) {
        auto t = grid_nodes(grid_);
        std::vector<double> d(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) d[i] = ddphi_(t[i]);
        return d;
    }
    return fd_second_derivative(fwd_, grid_.dt());
}

std::vector<double> Diffeo::inverse_deriv_nodes() const {
    if (dphi_) {
        std::vector<double> d(inv_.size());
        for (std::size_t i = 0; i < inv_.size(); ++i) {
            double slope = dphi_(inv_[i]);
            if (!(slope > kMinSlope)) throw NonMonotone("Diffeo: degenerate slope");
            d[i] = 1.0 / slope;
        }
        return d;
    }
    return fd_derivative(inv_, grid_.dt());
}

Diffeo Diffeo::inverted() const {
    Diffeo d;
    d.grid_ = grid_;
    d.fwd_ = inv_;
    d.inv_ = fwd_;
    // Analytic providers do not transfer; the inverse falls back to
    // finite-difference derivatives.
    return d;
}

ActionMap make_action_map(const Diffeo& phi) {
    const TimeGrid& g = phi.grid();
    const auto& u = phi.inverse_nodes();
    auto udot = phi.inverse_deriv_nodes();
    ActionMap m;
    m.cell.resize(u.size());
    m.weight.resize(u.size());
    m.scale.resize(u.size());
    const double h = g.dt();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(udot[i] > kMinSlope)) throw NonMonotone("action map: degenerate inverse slope");
        double s = (u[i] - g.t0) / h;
        int k = std::clamp(static_cast<int>(s), 0, g.N - 1);
        m.cell[i] = k;
        m.weight[i] = std::clamp(s - k, 0.0, 1.0);
        m.scale[i] = 1.0 / std::sqrt(udot[i]);
    }
    return m;
}

Path1D ActionMap::apply(const Path1D& path) const {
    if (cell.size() != path.values.size()) throw InvalidPath("ActionMap: grid mismatch");
    std::vector<double> out(cell.size());
    for (std::size_t i = 0; i < cell.size(); ++i) {
        int k = cell[i];
        double w = weight[i];
        out[i] = scale[i] * ((1.0 - w) * path.values[k] + w * path.values[k + 1]);
    }
    return Path1D(path.grid, std::move(out));
}

double action_log_abs_det(const ActionMap& map) {
    const int n = static_cast<int>(map.cell.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        int k = map.cell[i];
        double w = map.weight[i];
        a(i, k) += map.scale[i] * (1.0 - w);
        a(i, k + 1) += map.scale[i] * w;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += std::log(std::abs(lu.matrixLU()(i, i)));
    return log_det;
}

AdaptedAction make_adapted_action(const Diffeo& phi) {
    AdaptedAction a;
    a.u = phi.inverse_nodes();
    auto udot = phi.inverse_deriv_nodes();
    const std::size_t n = a.u.size();
    a.du.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a.du[i] = a.u[i + 1] - a.u[i];
        if (!(a.du[i] > 0.0)) throw NonMonotone("adapted action: inverse nodes not increasing");
    }
    a.scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(udot[i] > kMinSlope)) throw NonMonotone("adapted action: degenerate inverse slope");
        a.scale[i] = 1.0 / std::sqrt(udot[i]);
        a.log_abs_det += std::log(a.scale[i]);
    }
    return a;
}

Diffeo exponential_diffeo(const TimeGrid& grid, double a) {
    if (a == 0.0) return Diffeo::identity(grid);
    const double t0 = grid.t0, T = grid.T;
    const double b = a / T;
    const double c = T / std::expm1(a);
    return Diffeo::analytic(
        grid, [=](double t) { return t0 + c * std::expm1(b * (t - t0)); },
        [=](double t) { return c * b * std::exp(b * (t - t0)); },
        [=](double t) { return c * b * b * std::exp(b * (t - t0)); });
}

Path1D act_1d(const Diffeo& phi, const Path1D& path) {
    if (!(path.grid == phi.grid())) throw InvalidPath("act_1d: grid mismatch");
    return make_action_map(phi).apply(path);
}

Path2D act_2d(const Diffeo& phi, const Path2D& path) {
    if (!(path.grid == phi.grid())) throw InvalidPath("act_2d: grid mismatch");
    Path1D theta = unwind_angle(path);
    const int n = path.grid.N + 1;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = std::hypot(path.x0[i], path.x1[i]);
    const auto& u = phi.inverse_nodes();
    auto udot = phi.inverse_deriv_nodes();
    std::vector<double> a(n), b(n);
    Path1D rp(path.grid, r);
    for (int i = 0; i < n; ++i) {
        if (!(udot[i] > kMinSlope)) throw NonMonotone("act_2d: degenerate inverse slope");
        double rr = rp.at(u[i]) / std::sqrt(udot[i]);
        double th = theta.at(u[i]);
        a[i] = rr * std::cos(th);
        b[i] = rr * std::sin(th);
    }
    return Path2D(path.grid, std::move(a), std::move(b));
}

std::vector<double> schwarzian_nodes(const Diffeo& phi) {
    auto d1 = phi.deriv_nodes();
    auto d2 = phi.second_deriv_nodes();
    std::vector<double> g(d1.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(d1[i] > kMinSlope)) throw NonMonotone("schwarzian: degenerate slope");
        g[i] = d2[i] / d1[i];
    }
    auto dg = fd_derivative(g, phi.grid().dt());
    std::vector<double> sch(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) sch[i] = dg[i] - 0.5 * g[i] * g[i];
    return sch;
}

double schwarzian(const Diffeo& phi, int node) {
    auto s = schwarzian_nodes(phi);
    if (node < 0 || node >= static_cast<int>(s.size())) {
        throw DerivativeUnavailable("schwarzian: node out of range");
    }
    return s[node];
}

double log_radon_nikodym(const Diffeo& phi, const Path1D& path) {
    if (!(path.grid == phi.grid())) throw InvalidPath("radon_nikodym: grid mismatch");
    auto d1 = phi.deriv_nodes();
    auto d2 = phi.second_deriv_nodes();
    auto sch = schwarzian_nodes(phi);
    const int n = phi.grid().N;
    std::vector<double> integrand(n + 1);
    for (int i = 0; i <= n; ++i) integrand[i] = path.values[i] * path.values[i] * sch[i];
    // boundary sign fixed by the exact finite-dimensional Gaussian density
    // ratio (and by direct integration by parts of S(xi) - S(phi.xi))
    double boundary = -0.25 * (path.values[n] * path.values[n] * d2[n] / d1[n] -
                               path.values[0] * path.values[0] * d2[0] / d1[0]);
    return 0.25 * std::log(d1[0] * d1[n]) + boundary +
           0.25 * trapezoid(integrand, phi.grid());
}

double radon_nikodym(const Diffeo& phi, const Path1D& path) {
    return std::exp(log_radon_nikodym(phi, path));
}

double mu_log_density(const Diffeo& phi, double sigma) {
    if (!(sigma > 0.0)) throw InvalidPath("mu_log_density: sigma must be > 0");
    auto d1 = phi.deriv_nodes();
    auto d2 = phi.second_deriv_nodes();
    auto sch = schwarzian_nodes(phi);
    const int n = phi.grid().N;
    const double inv_s2 = 1.0 / (sigma * sigma);
    return -0.5 * std::log(d1[0] * d1[n]) +
           inv_s2 * (d2[0] / d1[0] - d2[n] / d1[n]) +
           inv_s2 * trapezoid(sch, phi.grid());
}

double mu_log_density_ratio(const Diffeo& phi_a, const Diffeo& phi_b, double sigma) {
    if (!(phi_a.grid() == phi_b.grid())) throw InvalidPath("mu ratio: grid mismatch");
    return mu_log_density(phi_a, sigma) - mu_log_density(phi_b, sigma);
}

}  // namespace conewalk
