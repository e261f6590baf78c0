#include <doctest.h>

#include <cmath>

#include "conewalk/geodesic.hpp"
#include "conewalk/rng.hpp"

using namespace conewalk;

TEST_CASE("chord regime") {
    GeodesicResult g = geodesic_distance(CoverPoint(1.0, 0.0), CoverPoint(1.0, M_PI_2));
    CHECK(g.geodesic_case == 1);
    CHECK(g.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(g.polyline.size() == 2);

    GeodesicResult same = geodesic_distance(CoverPoint(1.5, 2.0), CoverPoint(1.5, 2.0));
    CHECK(same.geodesic_case == 1);
    CHECK(same.distance == 0.0);
}

TEST_CASE("through the apex on one sheet") {
    GeodesicResult g = geodesic_distance(CoverPoint(1.0, 0.0), CoverPoint(2.0, 1.5 * M_PI));
    CHECK(g.geodesic_case == 2);
    CHECK(g.distance == doctest::Approx(3.0).epsilon(1e-14));
    REQUIRE(g.polyline.size() == 3);
    CHECK(g.polyline[1].is_origin);
}

TEST_CASE("across sheets") {
    GeodesicResult g = geodesic_distance(CoverPoint(1.0, 0.0), CoverPoint(2.0, 7.0));
    CHECK(g.geodesic_case == 3);
    CHECK(g.distance == doctest::Approx(3.0).epsilon(1e-14));

    GeodesicResult far = geodesic_distance(CoverPoint(0.5, -10.0), CoverPoint(0.25, 30.0));
    CHECK(far.geodesic_case == 3);
    CHECK(far.distance == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("the two formulas agree at the angular boundary") {
    const double ra = 1.3, rb = 0.8;
    GeodesicResult at = geodesic_distance(CoverPoint(ra, 0.0), CoverPoint(rb, M_PI));
    CHECK(at.geodesic_case == 1);
    CHECK(at.distance == doctest::Approx(ra + rb).epsilon(1e-13));
    const double eps = 1e-7;
    GeodesicResult below = geodesic_distance(CoverPoint(ra, 0.0), CoverPoint(rb, M_PI - eps));
    GeodesicResult above = geodesic_distance(CoverPoint(ra, 0.0), CoverPoint(rb, M_PI + eps));
    CHECK(std::abs(below.distance - above.distance) < 1e-6);
}

TEST_CASE("distance is symmetric and obeys the triangle inequality") {
    CounterRng rng(17, 0);
    for (int it = 0; it < 200; ++it) {
        auto draw = [&] {
            return CoverPoint(0.2 + 2.8 * rng.next_uniform(), 12.0 * (rng.next_uniform() - 0.5));
        };
        CoverPoint a = draw(), b = draw(), c = draw();
        const double ab = geodesic_distance(a, b).distance;
        CHECK(geodesic_distance(b, a).distance == doctest::Approx(ab).epsilon(1e-13));
        const double ac = geodesic_distance(a, c).distance;
        const double bc = geodesic_distance(b, c).distance;
        CHECK(ab <= ac + bc + 1e-12);
    }
}

TEST_CASE("mesh shortest paths confirm the closed form") {
    MeshSpec spec;
    spec.r_max = 3.0;
    spec.n_r = 100;
    spec.window = 12;

    SUBCASE("chord pair") {
        CoverPoint a(1.0, 0.2), b(2.0, 1.7);
        spec.theta_min = -0.5;
        spec.theta_max = 2.4;
        spec.n_theta = static_cast<int>((spec.theta_max - spec.theta_min) / 0.012) + 1;
        const double oracle = mesh_distance_oracle(a, b, spec);
        const double exact = geodesic_distance(a, b).distance;
        CHECK(std::abs(oracle - exact) < 5e-3);
        CHECK(oracle >= exact - 1e-9);  // graph paths cannot beat the geodesic
    }
    SUBCASE("apex pair") {
        CoverPoint a(1.0, 0.0), b(1.5, 4.6);
        spec.theta_min = -0.5;
        spec.theta_max = 5.1;
        spec.n_theta = static_cast<int>((spec.theta_max - spec.theta_min) / 0.012) + 1;
        const double oracle = mesh_distance_oracle(a, b, spec);
        CHECK(std::abs(oracle - 2.5) < 5e-3);
    }
    SUBCASE("endpoint outside the patch is rejected") {
        spec.theta_min = -0.5;
        spec.theta_max = 0.5;
        spec.n_theta = 64;
        CHECK_THROWS_AS(mesh_distance_oracle(CoverPoint(1.0, 0.0), CoverPoint(1.0, 3.0), spec),
                        MeshTooCoarse);
        CHECK_THROWS_AS(mesh_distance_oracle(CoverPoint(4.0, 0.0), CoverPoint(1.0, 0.2), spec),
                        MeshTooCoarse);
    }
}
