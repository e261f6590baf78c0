#include <algorithm>
#include <cmath>

#include "conewalk/estimators.hpp"
#include "conewalk/geodesic.hpp"
#include "conewalk/parallel.hpp"

namespace conewalk {

namespace {

double node_dev(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

}  // namespace

namespace {

// Random trigonometric cover path with a fixed underlying function, so the
// same path can be sampled on ever finer grids. The action identity is a
// statement about differentiable paths; on Brownian samples both actions
// diverge with N and the gap cannot close.
struct SmoothCoverPath {
    double r0;
    double rc[5], rs[5], tc[5], ts[5];

    static SmoothCoverPath draw(CounterRng& rng, double amplitude) {
        SmoothCoverPath p;
        p.r0 = 2.0;
        for (int k = 0; k < 5; ++k) {
            const double damp = amplitude / ((k + 1) * (k + 1));
            p.rc[k] = damp * rng.next_normal();
            p.rs[k] = damp * rng.next_normal();
            p.tc[k] = damp * rng.next_normal();
            p.ts[k] = damp * rng.next_normal();
        }
        return p;
    }

    void eval(double s, double& r, double& theta) const {
        r = r0;
        theta = 0.0;
        for (int k = 0; k < 5; ++k) {
            const double w = 2.0 * M_PI * (k + 1) * s;
            r += rc[k] * std::cos(w) + rs[k] * std::sin(w);
            theta += tc[k] * std::cos(w) + ts[k] * std::sin(w);
        }
    }

    ConePath sample(const TimeGrid& grid) const {
        std::vector<double> r(grid.N + 1), th(grid.N + 1);
        for (int i = 0; i <= grid.N; ++i) eval(static_cast<double>(i) / grid.N, r[i], th[i]);
        return cover_to_cone(CoverPath(grid, std::move(r), std::move(th)));
    }
};

}  // namespace

McReport check_action_identity(const WienerParams& params, const ConePoint&,
                               double T, const std::vector<int>& grid_sizes,
                               int n_paths, int threads) {
    std::vector<double> worst_per_n(grid_sizes.size(), 0.0);
    for (std::size_t gi = 0; gi < grid_sizes.size(); ++gi) {
        const TimeGrid grid(0.0, T, grid_sizes[gi]);
        std::vector<double> chunk_max(n_paths, 0.0);
        parallel_chunks(n_paths, 1, threads, [&](long begin, long, long c) {
            CounterRng rng(params.seed, params.stream + static_cast<std::uint64_t>(begin));
            SmoothCoverPath p = SmoothCoverPath::draw(rng, 0.4);
            chunk_max[c] = decomposition_action_check(p.sample(grid)).rel_err;
        });
        worst_per_n[gi] = *std::max_element(chunk_max.begin(), chunk_max.end());
    }

    // least-squares slope of log(err) against log(N)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(grid_sizes.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(static_cast<double>(grid_sizes[i]));
        const double y = std::log(worst_per_n[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double decay = -slope;

    McReport rep;
    rep.name = "action_identity";
    rep.estimate = decay;
    rep.n_samples = static_cast<long>(n_paths) * n;
    rep.seed = params.seed;
    rep.pass = decay >= 0.9 && worst_per_n.back() < 1e-2;
    for (int i = 0; i < n; ++i) {
        rep.metadata["rel_err_N" + std::to_string(grid_sizes[i])] =
            std::to_string(worst_per_n[i]);
    }
    return rep;
}

McReport check_metric_forms(std::uint64_t seed, long n_pairs) {
    CounterRng rng(seed, 0);
    double worst = 0.0;
    for (long i = 0; i < n_pairs; ++i) {
        const double r = 0.1 + 2.9 * rng.next_uniform();
        const double th = -2.0 + 4.0 * rng.next_uniform();
        const ConePoint p(r * std::cosh(th), r * std::sinh(th));
        const double v0 = 2.0 * rng.next_uniform() - 1.0;
        const double v1 = 2.0 * rng.next_uniform() - 1.0;
        const double m[4] = {metric_cartesian(p, v0, v1), metric_mixed(p, v0, v1),
                             metric_lightcone(p, v0, v1), metric_log_lightcone(p, v0, v1)};
        const double hi = *std::max_element(m, m + 4);
        const double lo = *std::min_element(m, m + 4);
        const double scale = std::max({std::abs(hi), std::abs(lo), 1e-300});
        worst = std::max(worst, (hi - lo) / scale);
    }
    McReport rep;
    rep.name = "metric_forms";
    rep.estimate = worst;
    rep.n_samples = n_pairs;
    rep.seed = seed;
    rep.pass = worst < 1e-12;
    return rep;
}

McReport check_geodesics(std::uint64_t seed, int n_pairs) {
    CounterRng rng(seed, 0);
    double worst = 0.0;
    int seen_case[4] = {0, 0, 0, 0};
    McReport rep;
    rep.name = "geodesics";
    for (int i = 0; i < n_pairs; ++i) {
        const double ra = 0.5 + 2.0 * rng.next_uniform();
        const double rb = 0.5 + 2.0 * rng.next_uniform();
        const double ta = rng.next_uniform();
        double dth;
        switch (i % 5) {
            case 0:
            case 1: dth = M_PI * rng.next_uniform(); break;           // case 1
            case 2: dth = M_PI; break;                                // boundary
            case 3: dth = M_PI * (1.0 + 0.9 * rng.next_uniform()); break;  // case 2
            default: dth = M_PI * (2.0 + 0.6 * rng.next_uniform()); break;  // case 3
        }
        const CoverPoint a(ra, ta), b(rb, ta + dth);

        MeshSpec spec;
        spec.r_max = 3.0;
        spec.n_r = 100;
        spec.theta_min = ta - 0.5;
        spec.theta_max = ta + dth + 0.5;
        spec.n_theta =
            static_cast<int>(std::ceil((spec.theta_max - spec.theta_min) / 0.012)) + 1;
        spec.window = 12;

        const GeodesicResult closed = geodesic_distance(a, b);
        const double oracle = mesh_distance_oracle(a, b, spec);
        worst = std::max(worst, std::abs(closed.distance - oracle));
        ++seen_case[closed.geodesic_case];
    }
    rep.estimate = worst;
    rep.n_samples = n_pairs;
    rep.seed = seed;
    rep.pass = worst < 5e-3 && seen_case[1] > 0 && seen_case[2] > 0 && seen_case[3] > 0;
    rep.metadata["case1"] = std::to_string(seen_case[1]);
    rep.metadata["case2"] = std::to_string(seen_case[2]);
    rep.metadata["case3"] = std::to_string(seen_case[3]);
    return rep;
}

McReport check_splitting_roundtrip(std::uint64_t seed, int n_cases) {
    const int N = 64;
    const TimeGrid grid(0.0, 1.0, N);
    double worst = 0.0;
    double worst_rho_rel = 0.0;
    for (int i = 0; i < n_cases; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const int m = 1 + static_cast<int>(rng.next_uniform() * (N - 1));
        const double t_star = grid.node(m);

        // 1D: exponentiated Brownian stays positive
        std::vector<double> v(N + 1);
        v[0] = 1.0;
        for (int k = 0; k < N; ++k) {
            v[k + 1] = v[k] * std::exp(0.3 * std::sqrt(grid.dt()) * rng.next_normal());
        }
        DecompR d1 = decompose_1d(PositivePath(grid, v));
        SplitR s1 = split_1d(d1, t_star);
        DecompR j1 = join_1d(s1.first, s1.second, t_star);
        worst = std::max(worst, std::abs(j1.rho - d1.rho));
        worst = std::max(worst, node_dev(j1.phi.inverse_nodes(), d1.phi.inverse_nodes()));
        {
            const double w1 = (t_star - grid.t0) / grid.T;
            const double lhs = 1.0 / (d1.rho * d1.rho);
            const double rhs = w1 / (s1.first.rho * s1.first.rho) +
                               (1.0 - w1) / (s1.second.rho * s1.second.rho);
            worst_rho_rel = std::max(worst_rho_rel, std::abs(lhs - rhs) / lhs);
        }

        // planar
        WienerParams wp;
        wp.seed = seed;
        wp.stream = 1000 + static_cast<std::uint64_t>(i);
        wp.start0 = 2.0;
        DecompR2 d2;
        for (int attempt = 0;; ++attempt) {
            wp.stream += attempt ? 10000 : 0;
            try {
                d2 = decompose_2d(sample_free_2d(wp, grid));
                break;
            } catch (const Error&) {
                if (attempt > 50) throw;
            }
        }
        SplitR2 s2 = split_2d(d2, t_star);
        DecompR2 j2 = join_2d(s2.first, s2.second, t_star, s2.winding);
        worst = std::max(worst, std::abs(j2.rho - d2.rho));
        worst = std::max(worst, std::abs(j2.alpha - d2.alpha));
        worst = std::max(worst, node_dev(j2.psi.values, d2.psi.values));
        worst = std::max(worst, node_dev(j2.phi.inverse_nodes(), d2.phi.inverse_nodes()));

        // cone
        WienerParams cp;
        cp.seed = seed;
        cp.stream = 2000 + static_cast<std::uint64_t>(i);
        DecompCone dc = decompose_cone(sample_cone_path(cp, grid, ConePoint(2.0, 0.0)));
        SplitCone sc = split_cone(dc, t_star);
        DecompCone jc = join_cone(sc.first, sc.second, t_star);
        worst = std::max(worst, std::abs(jc.rho - dc.rho));
        worst = std::max(worst, node_dev(jc.psi.values, dc.psi.values));
        worst = std::max(worst, node_dev(jc.phi.inverse_nodes(), dc.phi.inverse_nodes()));
    }
    McReport rep;
    rep.name = "splitting_roundtrip";
    rep.estimate = std::max(worst, worst_rho_rel);
    rep.n_samples = n_cases;
    rep.seed = seed;
    rep.pass = rep.estimate < 1e-12;
    rep.metadata["roundtrip_max_dev"] = std::to_string(worst);
    rep.metadata["rho_consistency_rel"] = std::to_string(worst_rho_rel);
    return rep;
}

}  // namespace conewalk
