#include <doctest.h>

#include <cmath>

#include "cechlab/geometry.hpp"
#include "cechlab/rng.hpp"
#include "oracles.hpp"

using namespace cechlab;

TEST_CASE("geometry context constants") {
    GeometryContext c1(1), c2(2), c3(3);
    CHECK(c2.r_conv == 0.5);
    CHECK(c2.r_max == 0.5 / 3.0);
    CHECK(c1.omega_d == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c2.omega_d == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(c3.omega_d == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(GeometryContext(0), DomainError);
}

TEST_CASE("toroidal distance examples") {
    CHECK(toroidal_distance(TorusPoint{0.1, 0.0}, TorusPoint{0.9, 0.0}) ==
          doctest::Approx(0.2).epsilon(1e-14));
    TorusPoint p{0.3, 0.7};
    CHECK(toroidal_distance(p, p) == 0.0);
    CHECK(toroidal_distance(TorusPoint{0.0, 0.0}, TorusPoint{0.5, 0.5}) ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(toroidal_distance(TorusPoint{0.1}, TorusPoint{0.1, 0.2}),
                    DomainError);
}

TEST_CASE("toroidal metric axioms on random triples") {
    for (int d : {1, 2, 3, 4}) {
        RngStream rng(42, d);
        double bound = std::sqrt(d) / 2.0;
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> a(d), b(d), c(d);
            for (int i = 0; i < d; ++i) {
                a[i] = rng.uniform01();
                b[i] = rng.uniform01();
                c[i] = rng.uniform01();
            }
            TorusPoint pa(a), pb(b), pc(c);
            double ab = toroidal_distance(pa, pb);
            double ba = toroidal_distance(pb, pa);
            double ac = toroidal_distance(pa, pc);
            double cb = toroidal_distance(pc, pb);
            CHECK(ab == ba);  // symmetry is exact
            CHECK(ab <= ac + cb + 1e-12);
            CHECK(ab <= bound + 1e-12);
        }
    }
}

TEST_CASE("coordinate canonicalization") {
    TorusPoint p{1.25, -0.25, 2.0};
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.75));
    CHECK(p[2] == 0.0);
}

TEST_CASE("lift_cluster examples") {
    auto lifted = lift_cluster({TorusPoint{0.95, 0.95}}, TorusPoint{0.05, 0.05}, 0.2);
    CHECK(lifted[0][0] == doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(lifted[0][1] == doctest::Approx(-0.1).epsilon(1e-14));

    TorusPoint center{0.3, 0.4};
    auto self = lift_cluster({center}, center, 0.1);
    CHECK(self[0][0] == 0.0);
    CHECK(self[0][1] == 0.0);

    auto pair = lift_cluster({TorusPoint{0.1, 0.0}, TorusPoint{0.9, 0.0}},
                             TorusPoint{0.0, 0.0}, 0.15);
    CHECK(pair[0][0] == doctest::Approx(0.1));
    CHECK(pair[1][0] == doctest::Approx(-0.1));
    double lifted_dist = std::hypot(pair[0][0] - pair[1][0], pair[0][1] - pair[1][1]);
    CHECK(lifted_dist == doctest::Approx(toroidal_distance(TorusPoint{0.1, 0.0},
                                                           TorusPoint{0.9, 0.0})));

    CHECK_THROWS_AS(lift_cluster({TorusPoint{0.4, 0.0}}, TorusPoint{0.0, 0.0}, 0.1),
                    DomainError);
    CHECK_THROWS_AS(lift_cluster({TorusPoint{0.1, 0.0}}, TorusPoint{0.0, 0.0}, 0.6),
                    DomainError);
}

TEST_CASE("lift isometry on random admissible clusters") {
    GeometryContext ctx(3);
    RngStream rng(7, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> c(3);
        for (double& x : c) x = rng.uniform01();
        TorusPoint center(c);
        double radius = 0.05 + 0.15 * rng.uniform01();
        std::vector<TorusPoint> pts;
        for (int i = 0; i < 6; ++i) {
            // rejection-sample a point within `radius` of the center
            for (;;) {
                std::vector<double> q(3);
                for (int a = 0; a < 3; ++a)
                    q[a] = c[a] + radius * (2.0 * rng.uniform01() - 1.0);
                TorusPoint tp(q);
                if (toroidal_distance(tp, center) <= radius) {
                    pts.push_back(tp);
                    break;
                }
            }
        }
        auto lifted = lift_cluster(pts, center, radius);
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) {
                double e = 0.0;
                for (int a = 0; a < 3; ++a) {
                    double t = lifted[i][a] - lifted[j][a];
                    e += t * t;
                }
                CHECK(std::sqrt(e) ==
                      doctest::Approx(toroidal_distance(pts[i], pts[j])).epsilon(1e-12));
            }
    }
}

TEST_CASE("ball volume closed forms") {
    GeometryContext c2(2), c3(3);
    CHECK(ball_volume(1.0, c2) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(ball_volume(0.0, c2) == 0.0);
    CHECK(ball_volume(0.1, c3) ==
          doctest::Approx(4.0 / 3.0 * M_PI * 1e-3).epsilon(1e-14));
    CHECK_THROWS_AS(ball_volume(-0.1, c2), DomainError);
}

TEST_CASE("intersection volume: endpoints and monotonicity") {
    for (int d : {1, 2, 3, 4}) {
        GeometryContext ctx(d);
        CHECK(intersection_volume_unit(0.0, ctx) ==
              doctest::Approx(ctx.omega_d).epsilon(1e-9));
        CHECK(intersection_volume_unit(2.0, ctx) == 0.0);
        double prev = intersection_volume_unit(0.0, ctx);
        for (double delta = 0.1; delta <= 2.0; delta += 0.1) {
            double v = intersection_volume_unit(delta, ctx);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
    GeometryContext c2(2);
    CHECK_THROWS_AS(intersection_volume_unit(-0.1, c2), DomainError);
    CHECK_THROWS_AS(intersection_volume_unit(2.1, c2), DomainError);
}

TEST_CASE("intersection volume vs planar lens closed form") {
    GeometryContext ctx(2);
    CHECK(intersection_volume_unit(1.0, ctx) ==
          doctest::Approx(2.0 * M_PI / 3.0 - std::sqrt(3.0) / 2.0).epsilon(1e-10));
    for (double delta : {0.2, 0.5, 1.0, 1.7}) {
        CHECK(intersection_volume_unit(delta, ctx) ==
              doctest::Approx(oracles::lens_area_unit(delta)).epsilon(1e-9));
    }
}

TEST_CASE("intersection volume first-order law") {
    // V_1(delta) = omega_d - omega_{d-1} delta + O(delta^2): the residual
    // must shrink quadratically between delta = 1e-2 and 1e-3.
    for (int d : {2, 3}) {
        GeometryContext ctx(d);
        double om1 = unit_ball_volume(d - 1);
        auto residual = [&](double delta) {
            return std::fabs(intersection_volume_unit(delta, ctx) -
                             (ctx.omega_d - om1 * delta));
        };
        double r2 = residual(1e-2), r3 = residual(1e-3);
        CHECK(r3 <= r2 / 50.0);
    }
}

TEST_CASE("intersection volume vs Monte Carlo hit count") {
    for (int d : {2, 3}) {
        GeometryContext ctx(d);
        for (double delta : {0.3, 1.0}) {
            auto [est, se] = oracles::mc_intersection_volume(d, delta, 1'000'000, 99);
            double exact = intersection_volume_unit(delta, ctx);
            CHECK(std::fabs(est - exact) <= 3.0 * se);
        }
    }
}
