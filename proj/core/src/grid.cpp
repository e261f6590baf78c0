#include "conewalk/grid.hpp"

#include <algorithm>
#include <cmath>

namespace conewalk {

namespace {

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw InvalidPath(std::string(what) + ": non-finite value");
    }
}

void require_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw InvalidPath(std::string(what) + ": expected " + std::to_string(want) +
                          " values, got " + std::to_string(got));
    }
}

double interp_on_grid(const TimeGrid& g, const std::vector<double>& v, double t) {
    double s = (t - g.t0) / g.dt();
    if (s <= 0.0) return v.front();
    if (s >= g.N) return v.back();
    int i = static_cast<int>(s);
    if (i >= g.N) i = g.N - 1;
    double w = s - i;
    return v[i] + w * (v[i + 1] - v[i]);
}

}  // namespace

TimeGrid::TimeGrid(double t0_, double T_, int N_) : t0(t0_), T(T_), N(N_) {
    if (!(T > 0.0) || !std::isfinite(t0) || !std::isfinite(T)) {
        throw InvalidPath("TimeGrid: duration must be positive and finite");
    }
    if (N < 1) throw InvalidPath("TimeGrid: need at least one cell");
}

Path1D::Path1D(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    require_length(values.size(), static_cast<std::size_t>(grid.N) + 1, "Path1D");
    require_finite(values, "Path1D");
}

double Path1D::at(double t) const { return interp_on_grid(grid, values, t); }

PositivePath::PositivePath(TimeGrid g, std::vector<double> v) : Path1D(g, std::move(v)) {
    for (double x : values) {
        if (!(x > 0.0)) throw NonPositivePath("PositivePath: non-positive node value");
    }
}

PositivePath::PositivePath(const Path1D& p) : PositivePath(p.grid, p.values) {}

Path2D::Path2D(TimeGrid g, std::vector<double> a, std::vector<double> b)
    : grid(g), x0(std::move(a)), x1(std::move(b)) {
    require_length(x0.size(), static_cast<std::size_t>(grid.N) + 1, "Path2D");
    require_length(x1.size(), static_cast<std::size_t>(grid.N) + 1, "Path2D");
    require_finite(x0, "Path2D");
    require_finite(x1, "Path2D");
}

double Path2D::at0(double t) const { return interp_on_grid(grid, x0, t); }
double Path2D::at1(double t) const { return interp_on_grid(grid, x1, t); }

double trapezoid(std::span<const double> f, const TimeGrid& grid) {
    require_length(f.size(), static_cast<std::size_t>(grid.N) + 1, "trapezoid");
    require_finite(f, "trapezoid");
    double s = 0.5 * (f.front() + f.back());
    for (int i = 1; i < grid.N; ++i) s += f[i];
    return s * grid.dt();
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, const TimeGrid& grid) {
    require_length(f.size(), static_cast<std::size_t>(grid.N) + 1, "cumulative_trapezoid");
    require_finite(f, "cumulative_trapezoid");
    std::vector<double> out(f.size());
    out[0] = 0.0;
    const double h = grid.dt();
    for (int i = 0; i < grid.N; ++i) {
        out[i + 1] = out[i] + 0.5 * h * (f[i] + f[i + 1]);
    }
    return out;
}

double discrete_action(const Path1D& path) {
    const double h = path.grid.dt();
    double s = 0.0;
    for (int i = 0; i < path.grid.N; ++i) {
        double d = path.values[i + 1] - path.values[i];
        s += d * d;
    }
    return s / h;
}

double discrete_action_2d(const Path2D& path) {
    const double h = path.grid.dt();
    double s = 0.0;
    for (int i = 0; i < path.grid.N; ++i) {
        double d0 = path.x0[i + 1] - path.x0[i];
        double d1 = path.x1[i + 1] - path.x1[i];
        s += d0 * d0 + d1 * d1;
    }
    return s / h;
}

Path1D unwind_angle(const Path2D& path) {
    const int n = path.grid.N + 1;
    double rmax = 0.0;
    for (int i = 0; i < n; ++i) {
        rmax = std::max(rmax, std::hypot(path.x0[i], path.x1[i]));
    }
    const double guard = kOriginGuardFactor * rmax;
    std::vector<double> theta(n);
    double a0 = std::atan2(path.x1[0], path.x0[0]);
    if (a0 < 0.0) a0 += 2.0 * M_PI;
    theta[0] = a0;
    for (int i = 0; i < n; ++i) {
        if (std::hypot(path.x0[i], path.x1[i]) < guard) {
            throw OriginHit("unwind_angle: node " + std::to_string(i) +
                            " inside the origin guard");
        }
    }
    for (int i = 0; i + 1 < n; ++i) {
        double dot = path.x0[i] * path.x0[i + 1] + path.x1[i] * path.x1[i + 1];
        double cross = path.x0[i] * path.x1[i + 1] - path.x1[i] * path.x0[i + 1];
        double dtheta = std::atan2(cross, dot);
        if (!(std::abs(dtheta) < kAngleStepLimit)) {
            throw StepTooCoarse("unwind_angle: step " + std::to_string(i) +
                                " turns by |" + std::to_string(dtheta) +
                                "| >= pi/2; refine the grid");
        }
        theta[i + 1] = theta[i] + dtheta;
    }
    return Path1D(path.grid, std::move(theta));
}

double pl_interp(std::span<const double> xs, std::span<const double> ys, double x) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw InvalidPath("pl_interp: need matching breakpoint arrays of size >= 2");
    }
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

std::vector<double> fd_derivative(std::span<const double> v, double dt) {
    const std::size_t n = v.size();
    if (n < 3) throw DerivativeUnavailable("fd_derivative: need at least 3 nodes");
    std::vector<double> d(n);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * dt);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dt);
    return d;
}

std::vector<double> fd_second_derivative(std::span<const double> v, double dt) {
    const std::size_t n = v.size();
    if (n < 4) throw DerivativeUnavailable("fd_second_derivative: need at least 4 nodes");
    std::vector<double> d(n);
    const double h2 = dt * dt;
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    return d;
}

}  // namespace conewalk
