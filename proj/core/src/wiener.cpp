#include "conewalk/wiener.hpp"

#include <cmath>

namespace conewalk {

void WienerParams::validate() const {
    if (!(sigma > 0.0)) throw InvalidPath("WienerParams: sigma must be > 0");
    if (!std::isfinite(start0) || !std::isfinite(start1)) {
        throw InvalidPath("WienerParams: non-finite start value");
    }
}

namespace {

void fill_free(CounterRng& rng, const TimeGrid& grid, double sigma, double start,
               std::vector<double>& out) {
    const double step = sigma * std::sqrt(grid.dt());
    out.resize(grid.N + 1);
    out[0] = start;
    for (int i = 0; i < grid.N; ++i) out[i + 1] = out[i] + step * rng.next_normal();
}

void fill_bridge(CounterRng& rng, const TimeGrid& grid, double sigma, double start,
                 double end, std::vector<double>& out) {
    const double h = grid.dt();
    out.resize(grid.N + 1);
    out[0] = start;
    for (int i = 0; i + 1 < grid.N; ++i) {
        const double remaining = grid.T - i * h;
        const double mean = out[i] + (end - out[i]) * h / remaining;
        const double var = sigma * sigma * h * (remaining - h) / remaining;
        out[i + 1] = mean + std::sqrt(var) * rng.next_normal();
    }
    out[grid.N] = end;  // exact pinning
}

}  // namespace

Path1D sample_free(const WienerParams& params, const TimeGrid& grid) {
    params.validate();
    CounterRng rng(params.seed, params.stream);
    std::vector<double> v;
    fill_free(rng, grid, params.sigma, params.start0, v);
    return Path1D(grid, std::move(v));
}

Path1D sample_bridge(const WienerParams& params, const TimeGrid& grid, double end_value) {
    params.validate();
    CounterRng rng(params.seed, params.stream);
    std::vector<double> v;
    fill_bridge(rng, grid, params.sigma, params.start0, end_value, v);
    return Path1D(grid, std::move(v));
}

Path2D sample_free_2d(const WienerParams& params, const TimeGrid& grid) {
    params.validate();
    CounterRng rng(params.seed, params.stream);
    const double step = params.sigma * std::sqrt(grid.dt());
    std::vector<double> a(grid.N + 1), b(grid.N + 1);
    a[0] = params.start0;
    b[0] = params.start1;
    // Interleaved draws keep the two components on one counter sequence.
    for (int i = 0; i < grid.N; ++i) {
        a[i + 1] = a[i] + step * rng.next_normal();
        b[i + 1] = b[i] + step * rng.next_normal();
    }
    return Path2D(grid, std::move(a), std::move(b));
}

Path2D sample_bridge_2d(const WienerParams& params, const TimeGrid& grid,
                        double end0, double end1) {
    params.validate();
    CounterRng rng(params.seed, params.stream);
    const double h = grid.dt();
    const double s2h = params.sigma * params.sigma * h;
    std::vector<double> a(grid.N + 1), b(grid.N + 1);
    a[0] = params.start0;
    b[0] = params.start1;
    for (int i = 0; i + 1 < grid.N; ++i) {
        const double remaining = grid.T - i * h;
        const double w = h / remaining;
        const double sd = std::sqrt(s2h * (remaining - h) / remaining);
        a[i + 1] = a[i] + (end0 - a[i]) * w + sd * rng.next_normal();
        b[i + 1] = b[i] + (end1 - b[i]) * w + sd * rng.next_normal();
    }
    a[grid.N] = end0;
    b[grid.N] = end1;
    return Path2D(grid, std::move(a), std::move(b));
}

double log_density(const Path1D& path, const WienerParams& params) {
    params.validate();
    const double s2 = params.sigma * params.sigma;
    return -discrete_action(path) / (2.0 * s2) -
           0.5 * path.grid.N * std::log(2.0 * M_PI * s2 * path.grid.dt());
}

}  // namespace conewalk
