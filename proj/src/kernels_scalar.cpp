// Reference kernels. Compiled with fp-contract off so the AVX2 variant can
// reproduce results exactly.
#include <cmath>
#include <limits>

#include "cechlab/kernels.hpp"

namespace cechlab::kernels {

namespace {

inline double dist2_one(int d, const double* q, const double* const* axes, int64_t i) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
        double t = std::fabs(axes[a][i] - q[a]);
        double w = t < 1.0 - t ? t : 1.0 - t;
        s += w * w;
    }
    return s;
}

void dist2_batch(int d, const double* q, const double* const* axes, int64_t begin,
                 int64_t end, double* out) {
    for (int64_t i = begin; i < end; ++i) out[i - begin] = dist2_one(d, q, axes, i);
}

double min_dist2(int d, const double* q, const double* const* axes, int64_t begin,
                 int64_t end) {
    double best = std::numeric_limits<double>::infinity();
    for (int64_t i = begin; i < end; ++i) {
        double s = dist2_one(d, q, axes, i);
        if (s < best) best = s;
    }
    return best;
}

int64_t count_within(int d, const double* q, const double* const* axes, int64_t begin,
                     int64_t end, double r2, bool strict) {
    int64_t c = 0;
    if (strict) {
        for (int64_t i = begin; i < end; ++i) c += dist2_one(d, q, axes, i) < r2;
    } else {
        for (int64_t i = begin; i < end; ++i) c += dist2_one(d, q, axes, i) <= r2;
    }
    return c;
}

}  // namespace

const Ops scalar_ops = {dist2_batch, min_dist2, count_within};

}  // namespace cechlab::kernels
