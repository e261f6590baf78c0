#include "conewalk/decomp.hpp"

#include <algorithm>
#include <cmath>

namespace conewalk {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// rho and phi^{-1} nodes from the node values of 1/xi^2 (or its 2D / cone
// analogs): 1/rho^2 = (1/T) int f, phi^{-1} = t0 + T * (partial int) / (int).
struct RadialDecomp {
    double rho;
    std::vector<double> inv_nodes;
};

RadialDecomp radial_decompose(std::span<const double> f, const TimeGrid& g) {
    auto cum = cumulative_trapezoid(f, g);
    const double total = cum.back();
    if (!(total > 0.0)) throw InvalidPath("decompose: degenerate radial integral");
    RadialDecomp out;
    out.rho = std::sqrt(g.T / total);
    out.inv_nodes.resize(cum.size());
    for (std::size_t i = 0; i < cum.size(); ++i) {
        out.inv_nodes[i] = g.t0 + g.T * cum[i] / total;
    }
    return out;
}

std::vector<double> guarded_sqrt_inv(const std::vector<double>& udot) {
    std::vector<double> s(udot.size());
    for (std::size_t i = 0; i < udot.size(); ++i) {
        // First/last nodes of strongly warped diffeos can have a vanishing
        // one-sided slope estimate; floor it instead of dividing by zero.
        s[i] = 1.0 / std::sqrt(std::max(udot[i], 1e-8));
    }
    return s;
}

int split_node_index(const TimeGrid& g, double t_star) {
    const double s = (t_star - g.t0) / g.dt();
    const int m = static_cast<int>(std::lround(s));
    if (m <= 0 || m >= g.N || std::abs(s - m) > 1e-9) {
        throw BadSplitPoint("t_star must be an interior grid node");
    }
    return m;
}

}  // namespace

DecompR decompose_1d(const PositivePath& path) {
    const int n = path.grid.N + 1;
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = 1.0 / (path.values[i] * path.values[i]);
    auto rad = radial_decompose(f, path.grid);
    return DecompR{rad.rho, Diffeo::from_inverse_nodes(path.grid, std::move(rad.inv_nodes))};
}

PositivePath reconstruct_1d(const DecompR& coords) {
    auto scale = guarded_sqrt_inv(coords.phi.inverse_deriv_nodes());
    std::vector<double> v(scale.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = coords.rho * scale[i];
    return PositivePath(coords.phi.grid(), std::move(v));
}

DecompR2 decompose_2d(const Path2D& path) {
    const int n = path.grid.N + 1;
    Path1D theta = unwind_angle(path);  // also enforces the origin guard
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        f[i] = 1.0 / (path.x0[i] * path.x0[i] + path.x1[i] * path.x1[i]);
    }
    auto rad = radial_decompose(f, path.grid);
    Diffeo phi = Diffeo::from_inverse_nodes(path.grid, std::move(rad.inv_nodes));
    const auto& fwd = phi.forward_nodes();
    std::vector<double> psi(n);
    for (int i = 0; i < n; ++i) psi[i] = theta.at(fwd[i]) - theta.values[0];
    psi[0] = 0.0;
    double alpha = theta.values[0];  // principal angle of the first node
    return DecompR2{rad.rho, Path1D(path.grid, std::move(psi)), std::move(phi), alpha};
}

Path2D reconstruct_2d(const DecompR2& coords) {
    const TimeGrid& g = coords.phi.grid();
    auto scale = guarded_sqrt_inv(coords.phi.inverse_deriv_nodes());
    const auto& u = coords.phi.inverse_nodes();
    const int n = g.N + 1;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        double r = coords.rho * scale[i];
        double ang = coords.psi.at(u[i]) + coords.alpha;
        a[i] = r * std::cos(ang);
        b[i] = r * std::sin(ang);
    }
    return Path2D(g, std::move(a), std::move(b));
}

DecompCone decompose_cone(const ConePath& cp) {
    const Path2D& path = cp.path;
    const int n = path.grid.N + 1;
    double xmax = *std::max_element(path.x0.begin(), path.x0.end());
    const double guard = kConeGuardFactor * xmax;
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) {
        if (!(path.x0[i] - std::abs(path.x1[i]) >= guard)) {
            throw OutsideCone("decompose_cone: node " + std::to_string(i) +
                              " too close to the lightcone");
        }
        f[i] = 1.0 / (path.x0[i] * path.x0[i] - path.x1[i] * path.x1[i]);
    }
    auto rad = radial_decompose(f, path.grid);
    Diffeo phi = Diffeo::from_inverse_nodes(path.grid, std::move(rad.inv_nodes));
    const auto& fwd = phi.forward_nodes();
    std::vector<double> psi(n);
    for (int i = 0; i < n; ++i) {
        psi[i] = std::atanh(path.at1(fwd[i]) / path.at0(fwd[i]));
    }
    return DecompCone{rad.rho, Path1D(path.grid, std::move(psi)), std::move(phi)};
}

ConePath reconstruct_cone(const DecompCone& coords) {
    const TimeGrid& g = coords.phi.grid();
    auto scale = guarded_sqrt_inv(coords.phi.inverse_deriv_nodes());
    const auto& u = coords.phi.inverse_nodes();
    const int n = g.N + 1;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        double r = coords.rho * scale[i];
        double rap = coords.psi.at(u[i]);
        a[i] = r * std::cosh(rap);
        b[i] = r * std::sinh(rap);
    }
    return ConePath(Path2D(g, std::move(a), std::move(b)));
}

// --- splitting maps -------------------------------------------------------
//
// All formulas below are affine in the stored phi^{-1} node values, with the
// split point on a shared grid node, so no interpolation enters.

namespace {

struct RadialSplit {
    double rho1, rho2;
    std::vector<double> u1, u2;  // phi^{-1} nodes of the two legs
    TimeGrid g1, g2;
};

RadialSplit radial_split(double rho, const Diffeo& phi, double t_star) {
    const TimeGrid& g = phi.grid();
    const int m = split_node_index(g, t_star);
    const auto& u = phi.inverse_nodes();
    const double ts = t_star - g.t0;           // split offset in [0, T]
    const double us = u[m] - g.t0;             // phi^{-1}(t_star) offset
    RadialSplit out;
    out.g1 = TimeGrid(g.t0, ts, m);
    out.g2 = TimeGrid(t_star, g.T - ts, g.N - m);
    out.rho1 = rho * std::sqrt(ts / us);
    out.rho2 = rho * std::sqrt((g.T - ts) / (g.T - us));
    out.u1.resize(m + 1);
    for (int i = 0; i <= m; ++i) out.u1[i] = g.t0 + (ts / us) * (u[i] - g.t0);
    out.u2.resize(g.N - m + 1);
    for (int i = m; i <= g.N; ++i) {
        out.u2[i - m] = g.t0 + ((g.T - ts) / (g.T - us)) * ((u[i] - g.t0) - us) + ts;
    }
    return out;
}

struct RadialJoin {
    double rho;
    std::vector<double> u;
    TimeGrid g;
};

RadialJoin radial_join(double rho1, const Diffeo& phi1, double rho2, const Diffeo& phi2,
                       double t_star) {
    const TimeGrid& g1 = phi1.grid();
    const TimeGrid& g2 = phi2.grid();
    if (std::abs(g1.t_end() - t_star) > 1e-12 * std::max(1.0, g1.T) ||
        std::abs(g2.t0 - t_star) > 1e-12 * std::max(1.0, g2.T)) {
        throw BadSplitPoint("join: legs do not abut at t_star");
    }
    if (std::abs(g1.dt() - g2.dt()) > 1e-12 * g1.dt()) {
        throw BadSplitPoint("join: legs use different cell sizes");
    }
    RadialJoin out;
    out.g = TimeGrid(g1.t0, g1.T + g2.T, g1.N + g2.N);
    const double T = out.g.T;
    const double ts = g1.T;
    const double r1sq = rho1 * rho1, r2sq = rho2 * rho2;
    out.rho = 1.0 / std::sqrt((ts / T) / r1sq + ((T - ts) / T) / r2sq);
    const double den = ts * r2sq + (T - ts) * r1sq;
    out.u.resize(out.g.N + 1);
    const auto& u1 = phi1.inverse_nodes();
    const auto& u2 = phi2.inverse_nodes();
    for (int i = 0; i <= g1.N; ++i) {
        out.u[i] = out.g.t0 + T * r2sq * (u1[i] - g1.t0) / den;
    }
    for (int i = 0; i <= g2.N; ++i) {
        out.u[g1.N + i] =
            out.g.t0 + T * (r2sq * ts + r1sq * ((u2[i] - g1.t0) - ts)) / den;
    }
    return out;
}

std::vector<double> slice(const std::vector<double>& v, int lo, int hi) {
    return std::vector<double>(v.begin() + lo, v.begin() + hi + 1);
}

}  // namespace

SplitR split_1d(const DecompR& coords, double t_star) {
    auto rs = radial_split(coords.rho, coords.phi, t_star);
    return SplitR{
        DecompR{rs.rho1, Diffeo::from_inverse_nodes(rs.g1, std::move(rs.u1))},
        DecompR{rs.rho2, Diffeo::from_inverse_nodes(rs.g2, std::move(rs.u2))},
    };
}

DecompR join_1d(const DecompR& c1, const DecompR& c2, double t_star) {
    auto rj = radial_join(c1.rho, c1.phi, c2.rho, c2.phi, t_star);
    return DecompR{rj.rho, Diffeo::from_inverse_nodes(rj.g, std::move(rj.u))};
}

SplitR2 split_2d(const DecompR2& coords, double t_star) {
    const int m = split_node_index(coords.phi.grid(), t_star);
    auto rs = radial_split(coords.rho, coords.phi, t_star);
    std::vector<double> psi1 = slice(coords.psi.values, 0, m);
    std::vector<double> psi2 = slice(coords.psi.values, m, coords.phi.grid().N);
    const double psi_star = coords.psi.values[m];
    for (double& x : psi2) x -= psi_star;
    psi2.front() = 0.0;
    double raw = coords.alpha + psi_star;
    int n = static_cast<int>(std::floor(raw / kTwoPi));
    double alpha2 = raw - n * kTwoPi;
    SplitR2 out;
    out.first = DecompR2{rs.rho1, Path1D(rs.g1, std::move(psi1)),
                         Diffeo::from_inverse_nodes(rs.g1, std::move(rs.u1)), coords.alpha};
    out.second = DecompR2{rs.rho2, Path1D(rs.g2, std::move(psi2)),
                          Diffeo::from_inverse_nodes(rs.g2, std::move(rs.u2)), alpha2};
    out.winding = n;
    return out;
}

DecompR2 join_2d(const DecompR2& c1, const DecompR2& c2, double t_star, int winding) {
    auto rj = radial_join(c1.rho, c1.phi, c2.rho, c2.phi, t_star);
    const double offset = c2.alpha - c1.alpha + winding * kTwoPi;
    std::vector<double> psi(rj.g.N + 1);
    for (int i = 0; i <= c1.phi.grid().N; ++i) psi[i] = c1.psi.values[i];
    for (int i = 0; i <= c2.phi.grid().N; ++i) {
        psi[c1.phi.grid().N + i] = c2.psi.values[i] + offset;
    }
    return DecompR2{rj.rho, Path1D(rj.g, std::move(psi)),
                    Diffeo::from_inverse_nodes(rj.g, std::move(rj.u)), c1.alpha};
}

SplitCone split_cone(const DecompCone& coords, double t_star) {
    const int m = split_node_index(coords.phi.grid(), t_star);
    auto rs = radial_split(coords.rho, coords.phi, t_star);
    std::vector<double> psi1 = slice(coords.psi.values, 0, m);
    std::vector<double> psi2 = slice(coords.psi.values, m, coords.phi.grid().N);
    SplitCone out;
    out.first = DecompCone{rs.rho1, Path1D(rs.g1, std::move(psi1)),
                           Diffeo::from_inverse_nodes(rs.g1, std::move(rs.u1))};
    out.second = DecompCone{rs.rho2, Path1D(rs.g2, std::move(psi2)),
                            Diffeo::from_inverse_nodes(rs.g2, std::move(rs.u2))};
    return out;
}

DecompCone join_cone(const DecompCone& c1, const DecompCone& c2, double t_star) {
    // The hyperbolic angle lives on the real line, so the legs must already
    // agree at the split point (no 2*pi ambiguity to absorb).
    if (std::abs(c1.psi.values.back() - c2.psi.values.front()) > 1e-9) {
        throw BadSplitPoint("join_cone: psi legs disagree at t_star");
    }
    auto rj = radial_join(c1.rho, c1.phi, c2.rho, c2.phi, t_star);
    std::vector<double> psi(rj.g.N + 1);
    for (int i = 0; i <= c1.phi.grid().N; ++i) psi[i] = c1.psi.values[i];
    for (int i = 0; i <= c2.phi.grid().N; ++i) {
        psi[c1.phi.grid().N + i] = c2.psi.values[i];
    }
    return DecompCone{rj.rho, Path1D(rj.g, std::move(psi)),
                      Diffeo::from_inverse_nodes(rj.g, std::move(rj.u))};
}

}  // namespace conewalk
