#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cechlab/point_cloud.hpp"
#include "oracles.hpp"

using namespace cechlab;

TEST_CASE("poisson sampler moments across the inversion/rejection split") {
    for (double mean : {5.0, 29.5, 30.5, 200.0}) {
        RngStream rng(123, static_cast<uint64_t>(mean * 10));
        const int64_t draws = 20000;
        double s = 0.0, s2 = 0.0;
        for (int64_t i = 0; i < draws; ++i) {
            double x = static_cast<double>(rng.poisson(mean));
            s += x;
            s2 += x * x;
        }
        double m = s / draws;
        double var = s2 / draws - m * m;
        CHECK(std::fabs(m - mean) <= 3.0 * std::sqrt(mean / draws));
        CHECK(var / mean == doctest::Approx(1.0).epsilon(0.06));
    }
    RngStream rng(1, 1);
    CHECK_THROWS_AS(rng.poisson(0.0), DomainError);
    CHECK_THROWS_AS(rng.poisson(-2.0), DomainError);
}

TEST_CASE("sample_poisson: count moments over repeated trials") {
    GeometryContext ctx(2);
    const int trials = 10000;
    double s = 0.0, s2 = 0.0;
    for (int t = 0; t < trials; ++t) {
        RngStream rng(2024, t);
        auto cloud = sample_poisson(100.0, ctx, rng);
        double x = static_cast<double>(cloud.size());
        s += x;
        s2 += x * x;
    }
    double mean = s / trials;
    double var = s2 / trials - mean * mean;
    CHECK(std::fabs(mean - 100.0) <= 3.0);  // loose bound from the spec example
    CHECK(var / mean >= 0.9);
    CHECK(var / mean <= 1.1);
}

TEST_CASE("sampling determinism and stream separation") {
    GeometryContext ctx(3);
    RngStream a(77, 5), b(77, 5), c(77, 6);
    auto ca = sample_poisson(50.0, ctx, a);
    auto cb = sample_poisson(50.0, ctx, b);
    auto cc = sample_poisson(50.0, ctx, c);
    REQUIRE(ca.size() == cb.size());
    CHECK(ca.coords() == cb.coords());  // bit-for-bit
    CHECK(ca.coords() != cc.coords());
}

TEST_CASE("spatial independence: counts in disjoint boxes are uncorrelated") {
    GeometryContext ctx(2);
    const int trials = 10000;
    // A = [0,0.2)x[0,0.5), B = [0.5,0.7)x[0.3,0.8): both have volume 0.1.
    double sa = 0, sb = 0, sab = 0, sa2 = 0, sb2 = 0;
    for (int t = 0; t < trials; ++t) {
        RngStream rng(31337, t);
        auto cloud = sample_poisson(50.0, ctx, rng);
        int na = 0, nb = 0;
        for (int64_t i = 0; i < cloud.size(); ++i) {
            auto p = cloud.point(i);
            if (p[0] < 0.2 && p[1] < 0.5) ++na;
            if (p[0] >= 0.5 && p[0] < 0.7 && p[1] >= 0.3 && p[1] < 0.8) ++nb;
        }
        sa += na;
        sb += nb;
        sab += static_cast<double>(na) * nb;
        sa2 += static_cast<double>(na) * na;
        sb2 += static_cast<double>(nb) * nb;
    }
    double ma = sa / trials, mb = sb / trials;
    double cov = sab / trials - ma * mb;
    double va = sa2 / trials - ma * ma, vb = sb2 / trials - mb * mb;
    double corr = cov / std::sqrt(va * vb);
    CHECK(std::fabs(corr) < 0.05);
    CHECK(std::fabs(ma - 5.0) <= 3.0 * std::sqrt(5.0 / trials));
    CHECK(std::fabs(mb - 5.0) <= 3.0 * std::sqrt(5.0 / trials));
}

TEST_CASE("poissonity of ball counts (chi-square at the 0.1% level)") {
    GeometryContext ctx(2);
    const int trials = 10000;
    const double n = 200.0;
    const double lambda = 5.0;
    const double r = ctx.radius_for_lambda(n, lambda);
    TorusPoint center{0.37, 0.61};
    std::vector<int64_t> counts;
    counts.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        RngStream rng(555, t);
        auto cloud = sample_poisson(n, ctx, rng);
        counts.push_back(count_in_ball(cloud, center, r));
    }
    auto [stat, df] = oracles::chi_square_poisson(counts, lambda, 14);
    CHECK(df == 13);
    CHECK(stat <= 34.528);  // chi-square 0.999 quantile at 13 dof
}

TEST_CASE("count_in_ball basics") {
    GeometryContext ctx(2);
    PointCloud empty(2, 1.0, 0);
    CHECK(count_in_ball(empty, TorusPoint{0.5, 0.5}, 0.1) == 0);

    auto cloud = oracles::make_cloud(2, {{0.1, 0.1}, {0.9, 0.9}});
    TorusPoint q{0.0, 0.0};
    double dist = toroidal_distance(q, TorusPoint{0.1, 0.1});
    CHECK(count_in_ball(cloud, q, dist * 0.999) == 0);
    CHECK(count_in_ball(cloud, q, dist * 1.001) >= 1);
}

TEST_CASE("expected ball count matches lambda") {
    GeometryContext ctx(2);
    const double n = 1000.0;
    const double r = ctx.radius_for_lambda(n, 5.0);
    const int trials = 2000;
    double s = 0.0, s2 = 0.0;
    TorusPoint center{0.2, 0.8};
    for (int t = 0; t < trials; ++t) {
        RngStream rng(808, t);
        auto cloud = sample_poisson(n, ctx, rng);
        double x = static_cast<double>(count_in_ball(cloud, center, r));
        s += x;
        s2 += x * x;
    }
    double mean = s / trials;
    double se = std::sqrt((s2 / trials - mean * mean) / trials);
    CHECK(std::fabs(mean - 5.0) <= 3.0 * se);
}

TEST_CASE("point csv round trip") {
    GeometryContext ctx(3);
    RngStream rng(9, 0);
    auto cloud = sample_poisson(20.0, ctx, rng);
    std::stringstream ss;
    write_point_csv(ss, cloud);
    auto back = read_point_csv(ss);
    REQUIRE(back.dim() == 3);
    REQUIRE(back.size() == cloud.size());
    for (int64_t i = 0; i < cloud.size(); ++i)
        for (int a = 0; a < 3; ++a)
            CHECK(back.point(i)[a] == cloud.point(i)[a]);  // 17 digits round-trip
}
