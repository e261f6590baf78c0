#include "conewalk/geodesic.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace conewalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GeodesicVertex vertex(const CoverPoint& p) {
    return GeodesicVertex{p.r, p.theta, p.sheet(), false};
}

double chord(double r1, double t1, double r2, double t2) {
    const double d = t1 - t2;
    if (std::abs(d) > M_PI) return kInf;  // segment would cross the cut
    return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(d)));
}

}  // namespace

GeodesicResult geodesic_distance(const CoverPoint& a, const CoverPoint& b) {
    const double dtheta = std::abs(a.theta - b.theta);
    GeodesicResult out;
    if (dtheta <= M_PI) {
        out.geodesic_case = 1;
        out.distance = chord(a.r, a.theta, b.r, b.theta);
        out.polyline = {vertex(a), vertex(b)};
    } else {
        out.geodesic_case = (dtheta < 2.0 * M_PI) ? 2 : 3;
        out.distance = a.r + b.r;
        out.polyline = {vertex(a), GeodesicVertex{0.0, 0.0, 0, true}, vertex(b)};
    }
    return out;
}

double mesh_distance_oracle(const CoverPoint& a, const CoverPoint& b, const MeshSpec& spec) {
    const int nr = spec.n_r, nt = spec.n_theta, w = spec.window;
    if (nr < 2 || nt < 2) throw MeshTooCoarse("mesh_distance_oracle: empty mesh");
    const double dr = spec.r_max / nr;
    const double dth = (spec.theta_max - spec.theta_min) / (nt - 1);
    auto r_of = [&](int j) { return (j + 1) * dr; };
    auto th_of = [&](int k) { return spec.theta_min + k * dth; };

    for (const CoverPoint* p : {&a, &b}) {
        if (p->r < dr || p->r > spec.r_max || p->theta < spec.theta_min ||
            p->theta > spec.theta_max) {
            throw MeshTooCoarse("mesh_distance_oracle: endpoint outside the mesh patch");
        }
    }

    // Vertex ids: mesh nodes, then O (puncture), A, B.
    const int mesh_count = nr * nt;
    const int id_o = mesh_count, id_a = mesh_count + 1, id_b = mesh_count + 2;
    const int n_vertices = mesh_count + 3;
    auto id_of = [&](int j, int k) { return j * nt + k; };

    const int ja = static_cast<int>(a.r / dr) - 1;
    const int ka = static_cast<int>((a.theta - spec.theta_min) / dth);
    const int jb = static_cast<int>(b.r / dr) - 1;
    const int kb = static_cast<int>((b.theta - spec.theta_min) / dth);

    // mesh-mesh chords only ever span |dk| <= w cells
    std::vector<double> cos_k(w + 1);
    for (int k = 0; k <= w; ++k) cos_k[k] = std::cos(k * dth);

    std::vector<double> dist(n_vertices, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    auto relax = [&](int v, double nd) {
        if (nd < dist[v]) {
            dist[v] = nd;
            heap.emplace(nd, v);
        }
    };

    dist[id_a] = 0.0;
    heap.emplace(0.0, id_a);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        if (v == id_b) return d;
        if (v == id_a) {
            relax(id_o, d + a.r);
            for (int j = std::max(0, ja - w - 1); j <= std::min(nr - 1, ja + w + 1); ++j) {
                for (int k = std::max(0, ka - w - 1); k <= std::min(nt - 1, ka + w + 1); ++k) {
                    relax(id_of(j, k), d + chord(a.r, a.theta, r_of(j), th_of(k)));
                }
            }
            continue;
        }
        if (v == id_o) {
            relax(id_b, d + b.r);
            continue;
        }
        const int j = v / nt, k = v % nt;
        const double rv = r_of(j), tv = th_of(k);
        if (std::abs(j - jb) <= w + 1 && std::abs(k - kb) <= w + 1) {
            relax(id_b, d + chord(rv, tv, b.r, b.theta));
        }
        for (int dj = -w; dj <= w; ++dj) {
            const int jj = j + dj;
            if (jj < 0 || jj >= nr) continue;
            const double rn = r_of(jj);
            for (int dk = -w; dk <= w; ++dk) {
                const int kk = k + dk;
                if (kk < 0 || kk >= nt || (dj == 0 && dk == 0)) continue;
                const double len = std::sqrt(std::max(
                    0.0, rv * rv + rn * rn - 2.0 * rv * rn * cos_k[std::abs(dk)]));
                relax(id_of(jj, kk), d + len);
            }
        }
    }
    return dist[id_b];
}

}  // namespace conewalk
