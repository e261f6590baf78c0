#include <doctest.h>

#include <cmath>
#include <vector>

#include "conewalk/cone.hpp"
#include "conewalk/diffeo.hpp"
#include "conewalk/grid.hpp"

using namespace conewalk;

namespace {

ConePath hyperbola(const TimeGrid& g, double R, double a, double b) {
    std::vector<double> x0(g.N + 1), x1(g.N + 1);
    for (int i = 0; i <= g.N; ++i) {
        const double rap = a * g.node(i) + b;
        x0[i] = R * std::cosh(rap);
        x1[i] = R * std::sinh(rap);
    }
    return ConePath(Path2D(g, std::move(x0), std::move(x1)));
}

ConePath wavy_cone(const TimeGrid& g) {
    std::vector<double> x0(g.N + 1), x1(g.N + 1);
    for (int i = 0; i <= g.N; ++i) {
        const double t = g.node(i);
        const double r = 2.0 + 0.3 * std::sin(2.0 * M_PI * t);
        const double rap = 0.5 * std::sin(3.0 * t);
        x0[i] = r * std::cosh(rap);
        x1[i] = r * std::sinh(rap);
    }
    return ConePath(Path2D(g, std::move(x0), std::move(x1)));
}

}  // namespace

TEST_CASE("cone membership is enforced") {
    CHECK_THROWS_AS(ConePoint(1.0, 1.0), OutsideCone);
    CHECK_THROWS_AS(ConePoint(0.0, 0.0), OutsideCone);
    CHECK_THROWS_AS(ConePoint(-2.0, 0.5), OutsideCone);
    CHECK_NOTHROW(ConePoint(1.0, 0.999));
    TimeGrid g(0.0, 1.0, 1);
    CHECK_THROWS_AS(ConePath(Path2D(g, {1.0, 1.0}, {0.0, 1.5})), OutsideCone);
}

TEST_CASE("invariant radius and rapidity") {
    ConePoint p(2.0, 1.0);
    CHECK(p.r() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(p.rapidity() == doctest::Approx(std::atanh(0.5)).epsilon(1e-15));
    CHECK(ConePoint(1.0, 0.0).rapidity() == 0.0);
}

TEST_CASE("the four metric forms agree on hand values") {
    ConePoint apex(1.0, 0.0);
    // at (1, 0) the form is Euclidean
    CHECK(metric_cartesian(apex, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(metric_cartesian(apex, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    ConePoint p(2.0, 1.0);
    const double expected = 2.0 / 3.0;  // (v0^2 - v1^2) + 2 (x0 v1 - x1 v0)^2 / r^2
    for (auto* form : {&metric_cartesian, &metric_mixed, &metric_lightcone, &metric_log_lightcone}) {
        CHECK((*form)(p, 1.0, 1.0) == doctest::Approx(expected).epsilon(1e-13));
    }
    // a radial velocity v = p has length r^2
    CHECK(metric_cartesian(p, p.x0, p.x1) == doctest::Approx(3.0).epsilon(1e-13));
    // the rapidity direction (x1, x0) also has length r^2
    CHECK(metric_cartesian(p, p.x1, p.x0) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("boosts act as hyperbolic rotations") {
    ConePoint p = lorentz(std::log(2.0), ConePoint(1.0, 0.0));
    CHECK(p.x0 == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(p.x1 == doctest::Approx(0.75).epsilon(1e-15));

    ConePoint q(3.0, -1.0);
    ConePoint ab = lorentz(0.7, lorentz(-1.3, q));
    ConePoint once = lorentz(-0.6, q);
    CHECK(ab.x0 == doctest::Approx(once.x0).epsilon(1e-12));
    CHECK(ab.x1 == doctest::Approx(once.x1).epsilon(1e-12));

    // invariants survive a strong boost
    ConePoint far = lorentz(5.0, q);
    CHECK(far.r() == doctest::Approx(q.r()).epsilon(1e-9));
    CHECK(far.rapidity() == doctest::Approx(q.rapidity() + 5.0).epsilon(1e-9));
}

TEST_CASE("the metric is boost invariant") {
    ConePoint p(2.0, 0.5);
    const double v0 = 0.3, v1 = -1.1, gamma = 0.8;
    ConePoint bp = lorentz(gamma, p);
    const double c = std::cosh(gamma), s = std::sinh(gamma);
    const double bv0 = v0 * c + v1 * s, bv1 = v0 * s + v1 * c;
    CHECK(metric_cartesian(bp, bv0, bv1) ==
          doctest::Approx(metric_cartesian(p, v0, v1)).epsilon(1e-12));
}

TEST_CASE("sheet index of covering points") {
    CHECK(CoverPoint(1.0, 0.0).sheet() == 0);
    CHECK(CoverPoint(1.0, 7.0).sheet() == 1);
    CHECK(CoverPoint(1.0, 5.0 * M_PI).sheet() == 2);
    CHECK(CoverPoint(1.0, -0.1).sheet() == -1);
    CHECK_THROWS_AS(CoverPoint(0.0, 1.0), OriginHit);
}

TEST_CASE("cone <-> cover point roundtrip") {
    ConePoint p(2.5, -1.2);
    CoverPoint q = cone_to_cover(p);
    ConePoint back = cover_to_cone(q);
    CHECK(back.x0 == doctest::Approx(p.x0).epsilon(1e-13));
    CHECK(back.x1 == doctest::Approx(p.x1).epsilon(1e-13));

    // deep sheet; much larger rapidities are not representable, because
    // cosh and sinh agree to within one ulp and x0 - |x1| underflows
    CoverPoint far(0.5, 6.5);
    CoverPoint rq = cone_to_cover(cover_to_cone(far));
    CHECK(rq.r == doctest::Approx(far.r).epsilon(1e-9));
    CHECK(rq.theta == doctest::Approx(far.theta).epsilon(1e-9));
}

TEST_CASE("cone <-> cover path roundtrip") {
    TimeGrid g(0.0, 1.0, 64);
    ConePath p = wavy_cone(g);
    ConePath back = cover_to_cone(cone_to_cover(p));
    for (int i = 0; i <= g.N; ++i) {
        CHECK(back.path.x0[i] == doctest::Approx(p.path.x0[i]).epsilon(1e-12));
        CHECK(back.path.x1[i] == doctest::Approx(p.path.x1[i]).epsilon(1e-12));
    }
}

TEST_CASE("planar lift unwinds the angle continuously") {
    TimeGrid g(0.0, 1.0, 128);
    std::vector<double> a(g.N + 1), b(g.N + 1);
    for (int i = 0; i <= g.N; ++i) {
        a[i] = std::cos(2.0 * M_PI * g.node(i));
        b[i] = std::sin(2.0 * M_PI * g.node(i));
    }
    CoverPath lifted = lift_planar(Path2D(g, a, b));
    CHECK(lifted.theta.back() == doctest::Approx(2.0 * M_PI).epsilon(1e-11));
    Path2D back = cover_to_planar(lifted);
    for (int i = 0; i <= g.N; ++i) {
        CHECK(back.x0[i] == doctest::Approx(a[i]).epsilon(1e-12).scale(1.0));
        CHECK(back.x1[i] == doctest::Approx(b[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("cover path constructor guards") {
    TimeGrid g(0.0, 1.0, 2);
    CHECK_THROWS_AS(CoverPath(g, {1.0, -1.0, 1.0}, {0.0, 0.0, 0.0}), OriginHit);
    CHECK_THROWS_AS(CoverPath(g, {1.0, 1.0, 1.0}, {0.0, 2.0, 4.0}), StepTooCoarse);
}

TEST_CASE("cone action of simple paths") {
    TimeGrid g(0.0, 1.0, 1024);
    // static path: zero velocity, zero action
    ConePath still(Path2D(g, std::vector<double>(g.N + 1, 2.0), std::vector<double>(g.N + 1, 0.5)));
    CHECK(cone_action(still) == 0.0);

    // unit hyperbola traversed at unit rapidity speed: action = rho^2 T = 1
    ConePath hyp = hyperbola(g, 1.0, 1.0, 0.0);
    CHECK(std::abs(cone_action(hyp) - 1.0) < 1e-3);

    // the same number through the covering chart
    CHECK(std::abs(flat_polar_action(cone_to_cover(hyp)) - 1.0) < 1e-3);
}

TEST_CASE("cone action is boost invariant") {
    TimeGrid g(0.0, 1.0, 512);
    ConePath p = wavy_cone(g);
    CHECK(cone_action(lorentz(1.1, p)) == doctest::Approx(cone_action(p)).epsilon(1e-10));
}

TEST_CASE("diffeomorphism action on cone paths commutes with boosts") {
    TimeGrid g(0.0, 1.0, 256);
    ConePath p = wavy_cone(g);
    Diffeo phi = exponential_diffeo(g, 0.7);
    const double gamma = 0.9;
    ConePath lhs = act_cone(phi, lorentz(gamma, p));
    ConePath rhs = lorentz(gamma, act_cone(phi, p));
    for (int i = 0; i <= g.N; ++i) {
        CHECK(lhs.path.x0[i] == doctest::Approx(rhs.path.x0[i]).epsilon(1e-9));
        CHECK(lhs.path.x1[i] == doctest::Approx(rhs.path.x1[i]).epsilon(1e-9));
    }
}

TEST_CASE("decomposition-coordinate action matches the Cartesian one") {
    SUBCASE("static path gives zero on both sides") {
        TimeGrid g(0.0, 1.0, 64);
        ConePath still(
            Path2D(g, std::vector<double>(g.N + 1, 1.5), std::vector<double>(g.N + 1, 0.0)));
        ActionEquivalence eq = decomposition_action_check(still);
        CHECK(eq.rhs == 0.0);
        CHECK(std::abs(eq.lhs) < 1e-10);
    }
    SUBCASE("smooth path at fine resolution") {
        TimeGrid g(0.0, 1.0, 2048);
        ActionEquivalence eq = decomposition_action_check(wavy_cone(g));
        CHECK(eq.rel_err < 1e-3);
        CHECK(eq.rhs > 0.0);
    }
}
