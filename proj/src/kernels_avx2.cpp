// AVX2 kernels. Same per-element operations as the scalar reference
// (abs, min, mul, add — no FMA), so outputs are bit-identical.
#if defined(CECHLAB_HAVE_AVX2)

#include <immintrin.h>

#include <bit>
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

inline __m256d abs_pd(__m256d x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, x);
}

// Squared toroidal distance for 4 consecutive slots starting at i.
inline __m256d dist2_vec(int d, const double* q, const double* const* axes, int64_t i) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    for (int a = 0; a < d; ++a) {
        __m256d x = _mm256_loadu_pd(axes[a] + i);
        __m256d t = abs_pd(_mm256_sub_pd(x, _mm256_set1_pd(q[a])));
        __m256d w = _mm256_min_pd(t, _mm256_sub_pd(one, t));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(w, w));
    }
    return acc;
}

void dist2_batch(int d, const double* q, const double* const* axes, int64_t begin,
                 int64_t end, double* out) {
    int64_t i = begin;
    for (; i + 4 <= end; i += 4) _mm256_storeu_pd(out + (i - begin), dist2_vec(d, q, axes, i));
    for (; i < end; ++i) out[i - begin] = dist2_one(d, q, axes, i);
}

double min_dist2(int d, const double* q, const double* const* axes, int64_t begin,
                 int64_t end) {
    double best = std::numeric_limits<double>::infinity();
    int64_t i = begin;
    if (i + 4 <= end) {
        __m256d vbest = _mm256_set1_pd(best);
        for (; i + 4 <= end; i += 4) vbest = _mm256_min_pd(vbest, dist2_vec(d, q, axes, i));
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, vbest);
        for (double v : lanes)
            if (v < best) best = v;
    }
    for (; i < end; ++i) {
        double s = dist2_one(d, q, axes, i);
        if (s < best) best = s;
    }
    return best;
}

int64_t count_within(int d, const double* q, const double* const* axes, int64_t begin,
                     int64_t end, double r2, bool strict) {
    const __m256d vr2 = _mm256_set1_pd(r2);
    int64_t c = 0;
    int64_t i = begin;
    for (; i + 4 <= end; i += 4) {
        __m256d s = dist2_vec(d, q, axes, i);
        __m256d m = strict ? _mm256_cmp_pd(s, vr2, _CMP_LT_OQ)
                           : _mm256_cmp_pd(s, vr2, _CMP_LE_OQ);
        c += std::popcount(static_cast<unsigned>(_mm256_movemask_pd(m)));
    }
    if (strict) {
        for (; i < end; ++i) c += dist2_one(d, q, axes, i) < r2;
    } else {
        for (; i < end; ++i) c += dist2_one(d, q, axes, i) <= r2;
    }
    return c;
}

}  // namespace

const Ops avx2_ops = {dist2_batch, min_dist2, count_within};

}  // namespace cechlab::kernels

#endif  // CECHLAB_HAVE_AVX2
