#include "cechlab/rng.hpp"

#include <cmath>

namespace cechlab {

int64_t RngStream::poisson(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw DomainError("poisson: mean must be positive and finite");

    if (mean < 30.0) {
        // Inversion by multiplying uniforms until the product drops below e^-mean.
        const double limit = std::exp(-mean);
        int64_t k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    // PTRS (Hormann 1993), transformed rejection with squeeze.
    const double mu = mean;
    const double log_mu = std::log(mu);
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        double u = uniform01() - 0.5;
        double v = uniform01();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        double k = kf;
        double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        double rhs = k * log_mu - mu - std::lgamma(k + 1.0);
        if (lhs <= rhs) return static_cast<int64_t>(kf);
    }
}

double RngStream::normal01() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1, u2;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace cechlab
