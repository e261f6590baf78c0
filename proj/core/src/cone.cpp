#include "conewalk/cone.hpp"

#include <algorithm>
#include <cmath>

#include "conewalk/decomp.hpp"

namespace conewalk {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require_cone(double x0, double x1, const char* what) {
    if (!(x0 > std::abs(x1))) {
        throw OutsideCone(std::string(what) + ": point (" + std::to_string(x0) + ", " +
                          std::to_string(x1) + ") not in the future cone");
    }
}

}  // namespace

ConePoint::ConePoint(double a, double b) : x0(a), x1(b) { require_cone(x0, x1, "ConePoint"); }

double ConePoint::r() const { return std::sqrt((x0 - x1) * (x0 + x1)); }
double ConePoint::rapidity() const { return std::atanh(x1 / x0); }

CoverPoint::CoverPoint(double r_, double theta_) : r(r_), theta(theta_) {
    if (!(r > 0.0)) throw OriginHit("CoverPoint: radius must be > 0");
}

int CoverPoint::sheet() const { return static_cast<int>(std::floor(theta / kTwoPi)); }

ConePath::ConePath(Path2D p) : path(std::move(p)) {
    for (int i = 0; i <= path.grid.N; ++i) require_cone(path.x0[i], path.x1[i], "ConePath");
}

CoverPath::CoverPath(TimeGrid g, std::vector<double> r_, std::vector<double> theta_)
    : grid(g), r(std::move(r_)), theta(std::move(theta_)) {
    const std::size_t n = static_cast<std::size_t>(grid.N) + 1;
    if (r.size() != n || theta.size() != n) throw InvalidPath("CoverPath: node count mismatch");
    for (double x : r) {
        if (!(x > 0.0)) throw OriginHit("CoverPath: radius must be > 0");
    }
    for (int i = 0; i < grid.N; ++i) {
        if (!(std::abs(theta[i + 1] - theta[i]) < kAngleStepLimit)) {
            throw StepTooCoarse("CoverPath: angle step >= pi/2 at cell " + std::to_string(i));
        }
    }
}

ConePoint lorentz(double gamma, const ConePoint& p) {
    const double c = std::cosh(gamma), s = std::sinh(gamma);
    return ConePoint(p.x0 * c + p.x1 * s, p.x0 * s + p.x1 * c);
}

ConePath lorentz(double gamma, const ConePath& p) {
    const double c = std::cosh(gamma), s = std::sinh(gamma);
    const int n = p.grid().N + 1;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = p.path.x0[i] * c + p.path.x1[i] * s;
        b[i] = p.path.x0[i] * s + p.path.x1[i] * c;
    }
    return ConePath(Path2D(p.grid(), std::move(a), std::move(b)));
}

double metric_cartesian(const ConePoint& p, double v0, double v1) {
    const double r2 = (p.x0 - p.x1) * (p.x0 + p.x1);
    const double ang = p.x0 * v1 - p.x1 * v0;
    return v0 * v0 - v1 * v1 + 2.0 * ang * ang / r2;
}

double metric_mixed(const ConePoint& p, double v0, double v1) {
    const double r2 = (p.x0 - p.x1) * (p.x0 + p.x1);
    return ((p.x0 * p.x0 + p.x1 * p.x1) * (v0 * v0 + v1 * v1) -
            4.0 * p.x0 * p.x1 * v0 * v1) / r2;
}

double metric_lightcone(const ConePoint& p, double v0, double v1) {
    const double inv_sqrt2 = M_SQRT1_2;
    const double xp = (p.x0 + p.x1) * inv_sqrt2;
    const double xm = (p.x0 - p.x1) * inv_sqrt2;
    const double vp = (v0 + v1) * inv_sqrt2;
    const double vm = (v0 - v1) * inv_sqrt2;
    const double a = vp / xp, b = vm / xm;
    return xp * xm * (a * a + b * b);
}

double metric_log_lightcone(const ConePoint& p, double v0, double v1) {
    const double inv_sqrt2 = M_SQRT1_2;
    const double xp = (p.x0 + p.x1) * inv_sqrt2;
    const double xm = (p.x0 - p.x1) * inv_sqrt2;
    const double lp = std::log(xp), lm = std::log(xm);
    const double dlp = (v0 + v1) * inv_sqrt2 / xp;
    const double dlm = (v0 - v1) * inv_sqrt2 / xm;
    return std::exp(lp + lm) * (dlp * dlp + dlm * dlm);
}

CoverPoint cone_to_cover(const ConePoint& p) { return CoverPoint(p.r(), p.rapidity()); }

ConePoint cover_to_cone(const CoverPoint& q) {
    return ConePoint(q.r * std::cosh(q.theta), q.r * std::sinh(q.theta));
}

CoverPath cone_to_cover(const ConePath& p) {
    const int n = p.grid().N + 1;
    std::vector<double> r(n), theta(n);
    for (int i = 0; i < n; ++i) {
        ConePoint pt(p.path.x0[i], p.path.x1[i]);
        r[i] = pt.r();
        theta[i] = pt.rapidity();
    }
    return CoverPath(p.grid(), std::move(r), std::move(theta));
}

ConePath cover_to_cone(const CoverPath& q) {
    const int n = q.grid.N + 1;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = q.r[i] * std::cosh(q.theta[i]);
        b[i] = q.r[i] * std::sinh(q.theta[i]);
    }
    return ConePath(Path2D(q.grid, std::move(a), std::move(b)));
}

CoverPath lift_planar(const Path2D& path) {
    Path1D theta = unwind_angle(path);
    const int n = path.grid.N + 1;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = std::hypot(path.x0[i], path.x1[i]);
    return CoverPath(path.grid, std::move(r), std::move(theta.values));
}

Path2D cover_to_planar(const CoverPath& path) {
    const int n = path.grid.N + 1;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = path.r[i] * std::cos(path.theta[i]);
        b[i] = path.r[i] * std::sin(path.theta[i]);
    }
    return Path2D(path.grid, std::move(a), std::move(b));
}

double cone_action(const ConePath& cp) {
    const Path2D& p = cp.path;
    const double h = p.grid.dt();
    double xmax = *std::max_element(p.x0.begin(), p.x0.end());
    const double guard = kConeGuardFactor * xmax;
    double s = 0.0;
    for (int i = 0; i < p.grid.N; ++i) {
        const double m0 = 0.5 * (p.x0[i] + p.x0[i + 1]);
        const double m1 = 0.5 * (p.x1[i] + p.x1[i + 1]);
        if (!(m0 - std::abs(m1) >= guard)) {
            throw OutsideCone("cone_action: midpoint too close to the lightcone");
        }
        const double v0 = (p.x0[i + 1] - p.x0[i]) / h;
        const double v1 = (p.x1[i + 1] - p.x1[i]) / h;
        s += metric_cartesian(ConePoint(m0, m1), v0, v1) * h;
    }
    return s;
}

double flat_polar_action(const CoverPath& path) {
    const double h = path.grid.dt();
    double s = 0.0;
    for (int i = 0; i < path.grid.N; ++i) {
        const double dr = path.r[i + 1] - path.r[i];
        const double rb = 0.5 * (path.r[i] + path.r[i + 1]);
        const double dth = path.theta[i + 1] - path.theta[i];
        s += (dr * dr + rb * rb * dth * dth) / h;
    }
    return s;
}

ConePath act_cone(const Diffeo& phi, const ConePath& cp) {
    if (!(cp.grid() == phi.grid())) throw InvalidPath("act_cone: grid mismatch");
    CoverPath hyper = cone_to_cover(cp);
    const auto& u = phi.inverse_nodes();
    auto udot = phi.inverse_deriv_nodes();
    const int n = cp.grid().N + 1;
    Path1D rp(cp.grid(), hyper.r);
    Path1D thp(cp.grid(), hyper.theta);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        if (!(udot[i] > 1e-8)) throw NonMonotone("act_cone: degenerate inverse slope");
        double rr = rp.at(u[i]) / std::sqrt(udot[i]);
        double th = thp.at(u[i]);
        a[i] = rr * std::cosh(th);
        b[i] = rr * std::sinh(th);
    }
    return ConePath(Path2D(cp.grid(), std::move(a), std::move(b)));
}

ActionEquivalence decomposition_action_check(const ConePath& path) {
    const TimeGrid& g = path.grid();
    DecompCone dc = decompose_cone(path);
    const auto& u = dc.phi.inverse_nodes();
    auto udot = fd_derivative(u, g.dt());
    auto uddot = fd_second_derivative(u, g.dt());
    auto psidot = fd_derivative(dc.psi.values, g.dt());  // function of s
    std::vector<double> s_nodes(u.size());
    for (int i = 0; i <= g.N; ++i) s_nodes[i] = g.node(i);
    const double rho2 = dc.rho * dc.rho;
    std::vector<double> integrand(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double pd = pl_interp(s_nodes, psidot, u[i]);
        integrand[i] = 0.25 * rho2 * uddot[i] * uddot[i] / (udot[i] * udot[i] * udot[i]) +
                       rho2 * udot[i] * pd * pd;
    }
    ActionEquivalence out;
    out.lhs = trapezoid(integrand, g);
    out.rhs = cone_action(path);
    const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-300});
    out.rel_err = std::abs(out.lhs - out.rhs) / scale;
    return out;
}

}  // namespace conewalk
