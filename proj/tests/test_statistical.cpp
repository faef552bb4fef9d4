// Monte Carlo checks of the asymptotic statements at desk scale; these are
// trend and magnitude tests over a few hundred seeded trials each.
#include <doctest.h>

#include <cmath>

#include "cechlab/experiments.hpp"

using namespace cechlab;

TEST_CASE("theta cycle positivity rises below the vanishing threshold") {
    // Lambda = log n + (k-2) log log n - w with k = 1: larger w pushes the
    // radius deeper into the sub-threshold regime and certified theta-cycles
    // must become more frequent (monotone trend, not a limit statement).
    GeometryContext ctx(2);
    const double n = 3000.0;
    const int trials = 400;
    std::vector<double> ws{-1.5, 0.0, 1.5};
    std::vector<double> frac;
    for (double w : ws) {
        double lambda = std::log(n) - std::log(std::log(n)) - w;
        double r = ctx.radius_for_lambda(n, lambda);
        int pos = 0;
        for (int t = 0; t < trials; ++t) {
            RngStream rng(1993, t);
            auto cloud = sample_poisson(n, ctx, rng);
            pos += count_theta_cycles(cloud, r, 0.1, ctx).total() > 0;
        }
        frac.push_back(static_cast<double>(pos) / trials);
    }
    CHECK(frac[0] < frac[1]);
    CHECK(frac[1] < frac[2]);
    CHECK(frac[2] > 0.05);
}

TEST_CASE("theta cycle count is positive at the paper's sub-threshold point") {
    // d=2, Lambda = log n - 2 log log n: the mean certified count over 300
    // trials is positive; the fitted constant of the n Lambda^{-1} e^-Lambda
    // law is reported and the mean lies within factor 3 of the fit.
    GeometryContext ctx(2);
    const double n = 3000.0;
    const int trials = 300;
    double lambda = std::log(n) - 2.0 * std::log(std::log(n));
    double r = ctx.radius_for_lambda(n, lambda);
    int64_t total = 0;
    for (int t = 0; t < trials; ++t) {
        RngStream rng(991, t);
        auto cloud = sample_poisson(n, ctx, rng);
        total += count_theta_cycles(cloud, r, 0.1, ctx).total();
    }
    double mean = static_cast<double>(total) / trials;
    CHECK(mean > 0.0);
    double shape = n * std::exp(-lambda) / lambda;
    double c = mean / shape;  // least squares through the single design point
    MESSAGE("fitted lower-bound constant c = " << c);
    CHECK(mean >= c * shape / 3.0);
    CHECK(mean <= 3.0 * c * shape);
}

TEST_CASE("connectivity at the component threshold scale") {
    // Lambda_0 = 2^-d log n: well above it the complex is connected in most
    // trials, well below it is badly disconnected.
    GeometryContext ctx(2);
    const double n = 800.0;
    const int trials = 60;
    double lambda0 = std::log(n) / 4.0;
    int connected_hi = 0, connected_lo = 0;
    for (int t = 0; t < trials; ++t) {
        TrialParams hi{2, n, 3.0 * lambda0, ctx.radius_for_lambda(n, 3.0 * lambda0), 0.1};
        TrialParams lo{2, n, 0.3 * lambda0, ctx.radius_for_lambda(n, 0.3 * lambda0), 0.1};
        connected_hi += run_trial(hi, 555, t, ctx).betti[0] == 1;
        connected_lo += run_trial(lo, 555, t, ctx).betti[0] == 1;
    }
    CHECK(connected_hi >= trials * 9 / 10);
    CHECK(connected_lo == 0);
}
