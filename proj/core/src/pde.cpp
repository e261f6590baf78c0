#include <cmath>
#include <vector>

#include "conewalk/errors.hpp"
#include "conewalk/estimators.hpp"

namespace conewalk {

namespace {

struct StripGrid {
    double r_min, dr, theta_min, dth;
    int n_r, n_theta;
    double r(int i) const { return r_min + i * dr; }
    int idx(int i, int j) const { return i * n_theta + j; }
};

// Cloud-in-cell deposit of a unit delta at (r, theta); the density lives
// against the area element r dr dtheta.
void deposit_delta(std::vector<double>& field, const StripGrid& g, double r,
                   double theta) {
    const double fi = (r - g.r_min) / g.dr;
    const double fj = (theta - g.theta_min) / g.dth;
    const int i0 = static_cast<int>(fi), j0 = static_cast<int>(fj);
    if (i0 < 1 || i0 + 1 >= g.n_r - 1 || j0 < 1 || j0 + 1 >= g.n_theta - 1) {
        throw MeshTooCoarse("kernel_pde_oracle: source too close to the strip boundary");
    }
    const double wi = fi - i0, wj = fj - j0;
    const double cell = g.dr * g.dth;
    for (int di = 0; di <= 1; ++di) {
        for (int dj = 0; dj <= 1; ++dj) {
            const double w = (di ? wi : 1.0 - wi) * (dj ? wj : 1.0 - wj);
            field[g.idx(i0 + di, j0 + dj)] += w / (g.r(i0 + di) * cell);
        }
    }
}

double sample_field(const std::vector<double>& field, const StripGrid& g, double r,
                    double theta) {
    const double fi = (r - g.r_min) / g.dr;
    const double fj = (theta - g.theta_min) / g.dth;
    const int i0 = static_cast<int>(fi), j0 = static_cast<int>(fj);
    if (i0 < 0 || i0 + 1 >= g.n_r || j0 < 0 || j0 + 1 >= g.n_theta) {
        throw MeshTooCoarse("kernel_pde_oracle: evaluation point outside the strip");
    }
    const double wi = fi - i0, wj = fj - j0;
    return (1.0 - wi) * (1.0 - wj) * field[g.idx(i0, j0)] +
           wi * (1.0 - wj) * field[g.idx(i0 + 1, j0)] +
           (1.0 - wi) * wj * field[g.idx(i0, j0 + 1)] +
           wi * wj * field[g.idx(i0 + 1, j0 + 1)];
}

}  // namespace

double kernel_pde_oracle(const KernelQuery& query, const PdeMeshSpec& mesh) {
    if (mesh.n_r < 4 || mesh.n_theta < 4) {
        throw MeshTooCoarse("kernel_pde_oracle: mesh too small");
    }
    StripGrid g;
    g.r_min = mesh.r_min;
    g.n_r = mesh.n_r;
    g.n_theta = mesh.n_theta;
    g.dr = (mesh.r_max - mesh.r_min) / (mesh.n_r - 1);
    g.dth = (mesh.theta_max - mesh.theta_min) / (mesh.n_theta - 1);
    g.theta_min = mesh.theta_min;

    const double nu = 0.5 * query.sigma * query.sigma;
    double safety = mesh.safety;
    for (int attempt = 0; attempt < 6; ++attempt) {
        // explicit-scheme stability bound, dominated by the innermost ring
        const double lam =
            nu * (2.0 / (g.dr * g.dr) + 2.0 / (g.r_min * g.r_min * g.dth * g.dth) +
                  1.0 / (g.r_min * g.dr));
        const long steps = std::max<long>(1, static_cast<long>(std::ceil(query.T * lam / safety)));
        const double dt = query.T / steps;

        std::vector<double> field(static_cast<std::size_t>(g.n_r) * g.n_theta, 0.0);
        std::vector<double> next(field.size(), 0.0);
        deposit_delta(field, g, query.a.r, query.a.theta);

        const double cr = nu * dt / (g.dr * g.dr);
        const double cr1 = nu * dt / (2.0 * g.dr);
        bool stable = true;
        for (long n = 0; n < steps && stable; ++n) {
            for (int i = 1; i + 1 < g.n_r; ++i) {
                const double r = g.r(i);
                const double ct = nu * dt / (r * r * g.dth * g.dth);
                const double cu = cr1 / r;
                const int row = g.idx(i, 0);
                const int up = g.idx(i + 1, 0), dn = g.idx(i - 1, 0);
                for (int j = 1; j + 1 < g.n_theta; ++j) {
                    const double k = field[row + j];
                    next[row + j] = k + cr * (field[up + j] - 2.0 * k + field[dn + j]) +
                                    cu * (field[up + j] - field[dn + j]) +
                                    ct * (field[row + j + 1] - 2.0 * k + field[row + j - 1]);
                }
            }
            field.swap(next);
            if ((n & 1023) == 1023 || n + 1 == steps) {
                double probe = 0.0;
                for (double v : field) probe += std::abs(v);
                if (!std::isfinite(probe)) stable = false;
            }
        }
        if (stable) return sample_field(field, g, query.b.r, query.b.theta);
        safety *= 0.5;
    }
    throw UnstableStep("kernel_pde_oracle: explicit scheme failed to stabilize");
}

}  // namespace conewalk
