#include "conewalk/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "conewalk/parallel.hpp"

namespace conewalk {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr int kMaxAttempts = 1000;
constexpr long kChunk = 1024;

double principal_angle(double x, double y) {
    double a = std::atan2(y, x);
    return (a < 0.0) ? a + kTwoPi : a;
}

// Free 2D path drawn on a sub-counter window so rejected attempts advance
// deterministically.
Path2D planar_free_attempt(CounterRng& rng, const TimeGrid& grid, double sigma,
                           double x0, double y0, int attempt) {
    rng.set_counter(static_cast<std::uint64_t>(attempt) * 2 * grid.N);
    const double step = sigma * std::sqrt(grid.dt());
    std::vector<double> a(grid.N + 1), b(grid.N + 1);
    a[0] = x0;
    b[0] = y0;
    for (int i = 0; i < grid.N; ++i) {
        a[i + 1] = a[i] + step * rng.next_normal();
        b[i + 1] = b[i] + step * rng.next_normal();
    }
    return Path2D(grid, std::move(a), std::move(b));
}

struct Welford {
    double sum = 0.0, sumsq = 0.0;
    long n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    void merge(const Welford& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
    }
    double mean() const { return sum / n; }
    double se() const {
        double var = (sumsq - sum * sum / n) / (n - 1);
        return std::sqrt(std::max(var, 0.0) / n);
    }
};

}  // namespace

ConePath sample_cone_path(const WienerParams& params, const TimeGrid& grid,
                          const ConePoint& start, long* n_rejected) {
    params.validate();
    const CoverPoint cov = cone_to_cover(start);
    const double x0 = cov.r * std::cos(cov.theta);
    const double y0 = cov.r * std::sin(cov.theta);
    const double lift_offset = cov.theta - principal_angle(x0, y0);
    CounterRng rng(params.seed, params.stream);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Path2D planar = planar_free_attempt(rng, grid, params.sigma, x0, y0, attempt);
        try {
            CoverPath lifted = lift_planar(planar);
            for (double& th : lifted.theta) th += lift_offset;
            return cover_to_cone(lifted);
        } catch (const StepTooCoarse&) {
        } catch (const OriginHit&) {
        }
        if (n_rejected) ++*n_rejected;
    }
    throw StepTooCoarse("sample_cone_path: rejection cap reached; refine the grid");
}

McReport check_lorentz_invariance(const WienerParams& params, const TimeGrid& grid,
                                  const ConePoint& start, double gamma, long M,
                                  int threads) {
    const long n_chunks = (M + kChunk - 1) / kChunk;
    std::vector<double> max_dev(n_chunks, 0.0);
    std::vector<long> rejected(n_chunks, 0);
    parallel_chunks(M, kChunk, threads, [&](long begin, long end, long c) {
        double worst = 0.0;
        long rej = 0;
        for (long s = begin; s < end; ++s) {
            WienerParams p = params;
            p.stream = params.stream + static_cast<std::uint64_t>(s);
            ConePath path = sample_cone_path(p, grid, start, &rej);
            DecompCone dc = decompose_cone(path);
            DecompCone db = decompose_cone(lorentz(gamma, path));
            worst = std::max(worst, std::abs(db.rho - dc.rho));
            const auto& u = dc.phi.inverse_nodes();
            const auto& ub = db.phi.inverse_nodes();
            for (std::size_t i = 0; i < u.size(); ++i) {
                worst = std::max(worst, std::abs(ub[i] - u[i]));
                worst = std::max(worst,
                                 std::abs(db.psi.values[i] - dc.psi.values[i] - gamma));
            }
        }
        max_dev[c] = worst;
        rejected[c] = rej;
    });
    McReport rep;
    rep.name = "lorentz_invariance";
    rep.estimate = *std::max_element(max_dev.begin(), max_dev.end());
    rep.std_error = 0.0;  // algebraic, not statistical
    rep.n_samples = M;
    for (long r : rejected) rep.n_rejected += r;
    rep.seed = params.seed;
    rep.pass = rep.estimate < 1e-10;
    rep.metadata["gamma"] = std::to_string(gamma);
    rep.metadata["N"] = std::to_string(grid.N);
    return rep;
}

McReport check_rotation_invariance(const WienerParams& params, const TimeGrid& grid,
                                   double start0, double start1, double gamma, long M,
                                   int threads) {
    const long n_chunks = (M + kChunk - 1) / kChunk;
    std::vector<double> max_dev(n_chunks, 0.0);
    std::vector<long> rejected(n_chunks, 0);
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    parallel_chunks(M, kChunk, threads, [&](long begin, long end, long c) {
        double worst = 0.0;
        long rej = 0;
        for (long s = begin; s < end; ++s) {
            CounterRng rng(params.seed, params.stream + static_cast<std::uint64_t>(s));
            for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
                Path2D path =
                    planar_free_attempt(rng, grid, params.sigma, start0, start1, attempt);
                DecompR2 dc, dr;
                try {
                    dc = decompose_2d(path);
                    const int n = grid.N + 1;
                    std::vector<double> a(n), b(n);
                    for (int i = 0; i < n; ++i) {
                        a[i] = path.x0[i] * cg - path.x1[i] * sg;
                        b[i] = path.x0[i] * sg + path.x1[i] * cg;
                    }
                    dr = decompose_2d(Path2D(grid, std::move(a), std::move(b)));
                } catch (const StepTooCoarse&) {
                    ++rej;
                    continue;
                } catch (const OriginHit&) {
                    ++rej;
                    continue;
                }
                worst = std::max(worst, std::abs(dr.rho - dc.rho));
                const auto& u = dc.phi.inverse_nodes();
                const auto& ur = dr.phi.inverse_nodes();
                for (std::size_t i = 0; i < u.size(); ++i) {
                    worst = std::max(worst, std::abs(ur[i] - u[i]));
                    worst = std::max(worst,
                                     std::abs(dr.psi.values[i] - dc.psi.values[i]));
                }
                // alpha shift compared on the circle
                double da = std::remainder(dr.alpha - dc.alpha - gamma, kTwoPi);
                worst = std::max(worst, std::abs(da));
                break;
            }
        }
        max_dev[c] = worst;
        rejected[c] = rej;
    });
    McReport rep;
    rep.name = "rotation_invariance";
    rep.estimate = *std::max_element(max_dev.begin(), max_dev.end());
    rep.n_samples = M;
    for (long r : rejected) rep.n_rejected += r;
    rep.seed = params.seed;
    rep.pass = rep.estimate < 1e-10;
    rep.metadata["gamma"] = std::to_string(gamma);
    rep.metadata["N"] = std::to_string(grid.N);
    return rep;
}

double eval_functional(const std::string& id, const Path1D& path) {
    if (id == "endpoint") return path.values.back();
    if (id == "cos_endpoint") return std::cos(path.values.back());
    if (id == "exp_neg_half_int_sq") {
        std::vector<double> sq(path.values.size());
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = path.values[i] * path.values[i];
        return std::exp(-0.5 * trapezoid(sq, path.grid));
    }
    throw Error("unknown functional id: " + id);
}

std::vector<std::string> functional_ids() {
    return {"endpoint", "cos_endpoint", "exp_neg_half_int_sq"};
}

namespace {

// Deterministic sub-check of the splitting maps: the orbit coordinates of
// the restricted legs must equal the splitting-map image of the full
// coordinates, and rejoining must restore them.
double splitting_subcheck(const Path1D& sample, double t_star) {
    const TimeGrid& g = sample.grid;
    std::vector<double> pos(sample.values.size());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = std::exp(sample.values[i]);
    PositivePath full(g, pos);
    DecompR whole = decompose_1d(full);
    SplitR split = split_1d(whole, t_star);

    const int m = static_cast<int>(std::lround((t_star - g.t0) / g.dt()));
    TimeGrid g1(g.t0, t_star - g.t0, m);
    TimeGrid g2(t_star, g.t_end() - t_star, g.N - m);
    PositivePath leg1(g1, std::vector<double>(pos.begin(), pos.begin() + m + 1));
    PositivePath leg2(g2, std::vector<double>(pos.begin() + m, pos.end()));
    DecompR d1 = decompose_1d(leg1);
    DecompR d2 = decompose_1d(leg2);

    double worst = std::abs(d1.rho - split.first.rho);
    worst = std::max(worst, std::abs(d2.rho - split.second.rho));
    for (std::size_t i = 0; i < d1.phi.inverse_nodes().size(); ++i) {
        worst = std::max(worst, std::abs(d1.phi.inverse_nodes()[i] -
                                         split.first.phi.inverse_nodes()[i]));
    }
    for (std::size_t i = 0; i < d2.phi.inverse_nodes().size(); ++i) {
        worst = std::max(worst, std::abs(d2.phi.inverse_nodes()[i] -
                                         split.second.phi.inverse_nodes()[i]));
    }
    DecompR joined = join_1d(d1, d2, t_star);
    worst = std::max(worst, std::abs(joined.rho - whole.rho));
    for (std::size_t i = 0; i < joined.phi.inverse_nodes().size(); ++i) {
        worst = std::max(worst, std::abs(joined.phi.inverse_nodes()[i] -
                                         whole.phi.inverse_nodes()[i]));
    }
    return worst;
}

}  // namespace

McReport check_markov_split(const std::string& functional_id, double t_star,
                            const WienerParams& params, const TimeGrid& grid, long M,
                            int threads) {
    const int m = static_cast<int>(std::lround((t_star - grid.t0) / grid.dt()));
    if (m <= 0 || m >= grid.N || std::abs((t_star - grid.t0) / grid.dt() - m) > 1e-9) {
        throw BadSplitPoint("check_markov_split: t_star must be an interior grid node");
    }
    TimeGrid g2(t_star, grid.t_end() - t_star, grid.N - m);

    const long n_chunks = (M + kChunk - 1) / kChunk;
    std::vector<Welford> direct(n_chunks), split(n_chunks);
    parallel_chunks(M, kChunk, threads, [&](long begin, long end, long c) {
        for (long s = begin; s < end; ++s) {
            WienerParams p = params;
            p.stream = params.stream + static_cast<std::uint64_t>(s);
            direct[c].add(eval_functional(functional_id, sample_free(p, grid)));

            // Two-stage: independent streams for the legs.
            WienerParams p1 = params;
            p1.stream = params.stream + static_cast<std::uint64_t>(M + s);
            TimeGrid g1(grid.t0, t_star - grid.t0, m);
            Path1D leg1 = sample_free(p1, g1);
            WienerParams p2 = params;
            p2.stream = params.stream + static_cast<std::uint64_t>(2 * M + s);
            p2.start0 = leg1.values.back();
            Path1D leg2 = sample_free(p2, g2);
            std::vector<double> joined(grid.N + 1);
            std::copy(leg1.values.begin(), leg1.values.end(), joined.begin());
            std::copy(leg2.values.begin() + 1, leg2.values.end(), joined.begin() + m + 1);
            split[c].add(eval_functional(functional_id, Path1D(grid, std::move(joined))));
        }
    });
    Welford d, sp;
    for (long c = 0; c < n_chunks; ++c) {
        d.merge(direct[c]);
        sp.merge(split[c]);
    }
    const double se = std::sqrt(d.se() * d.se() + sp.se() * sp.se());

    double sub = 0.0;
    for (int k = 0; k < 10; ++k) {
        WienerParams p = params;
        p.stream = params.stream + static_cast<std::uint64_t>(3 * M + k);
        sub = std::max(sub, splitting_subcheck(sample_free(p, grid), t_star));
    }

    McReport rep;
    rep.name = "markov_split:" + functional_id;
    rep.estimate = d.mean() - sp.mean();
    rep.std_error = se;
    rep.n_samples = 2 * M;
    rep.seed = params.seed;
    rep.pass = std::abs(rep.estimate) <= 3.0 * se && sub < 1e-11;
    rep.metadata["direct"] = std::to_string(d.mean());
    rep.metadata["direct_se"] = std::to_string(d.se());
    rep.metadata["split"] = std::to_string(sp.mean());
    rep.metadata["split_se"] = std::to_string(sp.se());
    rep.metadata["subcheck_max_dev"] = std::to_string(sub);
    rep.metadata["t_star"] = std::to_string(t_star);
    return rep;
}

double discrete_log_radon_nikodym(const Diffeo& phi, const Path1D& path, double sigma) {
    AdaptedAction a = make_adapted_action(phi);
    const TimeGrid& g = phi.grid();
    const double h = g.dt();
    const double inv_2s2 = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> x(a.u.size()), eta(a.u.size());
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        x[i] = path.at(a.u[i]);
        eta[i] = x[i] * a.scale[i];
    }
    double out = a.log_abs_det;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double de = eta[i + 1] - eta[i];
        const double dx = x[i + 1] - x[i];
        out += -de * de * inv_2s2 / h + dx * dx * inv_2s2 / a.du[i] +
               0.5 * std::log(a.du[i] / h);
    }
    return out;
}

McReport check_quasi_invariance(const Diffeo& phi, const std::string& functional_id,
                                const WienerParams& params, const TimeGrid& grid, long M,
                                int threads, double start_sd) {
    // The pushed ensemble lives on the phi-adapted time grid, where the
    // action is diagonal and the change-of-variables identity is exact at
    // every N (not just in the limit).
    AdaptedAction act = make_adapted_action(phi);
    const double h = grid.dt();
    const double inv_2sd2 = 1.0 / (2.0 * start_sd * start_sd);
    const double inv_2s2 = 1.0 / (2.0 * params.sigma * params.sigma);
    const double step = params.sigma * std::sqrt(h);
    std::vector<double> adapted_step(grid.N), log_ratio(grid.N);
    for (int i = 0; i < grid.N; ++i) {
        adapted_step[i] = params.sigma * std::sqrt(act.du[i]);
        log_ratio[i] = 0.5 * std::log(act.du[i] / h);
    }

    const long n_chunks = (M + kChunk - 1) / kChunk;
    std::vector<Welford> direct(n_chunks), pushed(n_chunks);
    parallel_chunks(M, kChunk, threads, [&](long begin, long end, long c) {
        std::vector<double> v(grid.N + 1), x(grid.N + 1), eta(grid.N + 1);
        for (long s = begin; s < end; ++s) {
            CounterRng rng(params.seed, params.stream + static_cast<std::uint64_t>(s));
            v[0] = start_sd * rng.next_normal();
            for (int i = 0; i < grid.N; ++i) v[i + 1] = v[i] + step * rng.next_normal();
            direct[c].add(eval_functional(functional_id, Path1D(grid, v)));

            CounterRng rng2(params.seed,
                            params.stream + static_cast<std::uint64_t>(M + s));
            x[0] = start_sd * rng2.next_normal();
            for (int i = 0; i < grid.N; ++i) {
                x[i + 1] = x[i] + adapted_step[i] * rng2.next_normal();
            }
            double log_w = act.log_abs_det;
            eta[0] = x[0] * act.scale[0];
            for (int i = 0; i < grid.N; ++i) {
                eta[i + 1] = x[i + 1] * act.scale[i + 1];
                const double de = eta[i + 1] - eta[i];
                const double dx = x[i + 1] - x[i];
                log_w += -de * de * inv_2s2 / h + dx * dx * inv_2s2 / act.du[i] +
                         log_ratio[i];
            }
            log_w += (x[0] * x[0] - eta[0] * eta[0]) * inv_2sd2;
            pushed[c].add(eval_functional(functional_id, Path1D(grid, eta)) *
                          std::exp(log_w));
        }
    });
    Welford d, p;
    for (long c = 0; c < n_chunks; ++c) {
        d.merge(direct[c]);
        p.merge(pushed[c]);
    }
    const double se = std::sqrt(d.se() * d.se() + p.se() * p.se());
    McReport rep;
    rep.name = "quasi_invariance:" + functional_id;
    rep.estimate = d.mean() - p.mean();
    rep.std_error = se;
    rep.n_samples = M;
    rep.seed = params.seed;
    rep.pass = std::abs(rep.estimate) <= 3.0 * se;
    rep.metadata["direct"] = std::to_string(d.mean());
    rep.metadata["pushed"] = std::to_string(p.mean());
    rep.metadata["log_det"] = std::to_string(act.log_abs_det);
    return rep;
}

double free_planar_kernel(const KernelQuery& q) {
    const double ax = q.a.r * std::cos(q.a.theta), ay = q.a.r * std::sin(q.a.theta);
    const double bx = q.b.r * std::cos(q.b.theta), by = q.b.r * std::sin(q.b.theta);
    const double d2 = (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
    const double s2t = q.sigma * q.sigma * q.T;
    return std::exp(-d2 / (2.0 * s2t)) / (2.0 * M_PI * s2t);
}

McReport kernel_mc(const KernelQuery& query, int N, std::uint64_t seed, long M,
                   int threads, WindingHistogram* histogram) {
    const TimeGrid grid(0.0, query.T, N);
    const double ax = query.a.r * std::cos(query.a.theta);
    const double ay = query.a.r * std::sin(query.a.theta);
    const double bx = query.b.r * std::cos(query.b.theta);
    const double by = query.b.r * std::sin(query.b.theta);
    const double h = grid.dt();
    const double s2h = query.sigma * query.sigma * h;
    const double r_guard_scale = kOriginGuardFactor;

    const long n_chunks = (M + kChunk - 1) / kChunk;
    std::vector<std::map<int, long>> counts(n_chunks);
    std::vector<long> rejected(n_chunks, 0);
    parallel_chunks(M, kChunk, threads, [&](long begin, long end, long c) {
        for (long s = begin; s < end; ++s) {
            CounterRng rng(seed, static_cast<std::uint64_t>(s));
            bool done = false;
            for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
                rng.set_counter(static_cast<std::uint64_t>(attempt) * 2 * N);
                double x = ax, y = ay;
                double theta = 0.0;  // lift relative to the start direction
                double r2 = x * x + y * y;
                double r2_min = r2, r2_max = r2;
                bool ok = true;
                for (int i = 0; i < N; ++i) {
                    double xn, yn;
                    if (i + 1 < N) {
                        const double remaining = query.T - i * h;
                        const double w = h / remaining;
                        const double sd = std::sqrt(s2h * (remaining - h) / remaining);
                        xn = x + (bx - x) * w + sd * rng.next_normal();
                        yn = y + (by - y) * w + sd * rng.next_normal();
                    } else {
                        xn = bx;
                        yn = by;
                    }
                    const double dot = x * xn + y * yn;
                    const double cross = x * yn - y * xn;
                    if (!(dot > 0.0)) {  // |dtheta| >= pi/2
                        ok = false;
                        break;
                    }
                    theta += std::atan(cross / dot);
                    x = xn;
                    y = yn;
                    r2 = x * x + y * y;
                    r2_min = std::min(r2_min, r2);
                    r2_max = std::max(r2_max, r2);
                }
                if (ok && r2_min >= r_guard_scale * r_guard_scale * r2_max) {
                    // lifted endpoint angle = theta_A + total turning
                    const double lifted_end = query.a.theta + theta;
                    const int k = static_cast<int>(
                        std::lround((lifted_end - query.b.theta) / kTwoPi));
                    ++counts[c][k];
                    done = true;
                } else {
                    ++rejected[c];
                }
            }
            if (!done) throw StepTooCoarse("kernel_mc: rejection cap reached");
        }
    });

    WindingHistogram hist;
    for (long c = 0; c < n_chunks; ++c) {
        for (auto [k, n] : counts[c]) hist.counts[k] += n;
        hist.rejected += rejected[c];
        hist.total = M;
    }
    if (hist.rejected >= M / 100 + 1) {
        throw StepTooCoarse("kernel_mc: rejection fraction >= 1%; refine the grid (N=" +
                            std::to_string(N) + ", rejected " +
                            std::to_string(hist.rejected) + "/" + std::to_string(M) + ")");
    }
    long hits = 0;
    if (auto it = hist.counts.find(query.sheet_delta); it != hist.counts.end()) {
        hits = it->second;
    }
    const double p_class = static_cast<double>(hits) / M;
    const double density = free_planar_kernel(query);
    McReport rep;
    rep.name = "kernel_mc";
    rep.estimate = density * p_class;
    rep.std_error = density * std::sqrt(p_class * (1.0 - p_class) / M);
    rep.n_samples = M;
    rep.n_rejected = hist.rejected;
    rep.seed = seed;
    rep.metadata["bridge_density"] = std::to_string(density);
    rep.metadata["class_probability"] = std::to_string(p_class);
    rep.metadata["winding_class"] = std::to_string(query.sheet_delta);
    if (histogram) *histogram = std::move(hist);
    return rep;
}

}  // namespace conewalk
