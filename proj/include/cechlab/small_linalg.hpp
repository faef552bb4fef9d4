// Tiny dense solves shared by the miniball and circumsphere routines.
#pragma once

#include <cmath>

namespace cechlab {

/// Gaussian elimination with partial pivoting on an n x n system (row-major A,
/// modified in place on a local copy is the caller's job: A and b ARE modified).
/// Returns false when a pivot falls below rel_cutoff times the largest initial
/// entry, signalling (near-)singularity.
inline bool solve_small_system(double* A, double* b, double* x, int n,
                               double rel_cutoff) {
    double scale = 0.0;
    for (int i = 0; i < n * n; ++i) scale = std::max(scale, std::fabs(A[i]));
    if (scale == 0.0) return false;
    const double cutoff = rel_cutoff * scale;
    int piv[16];
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int c = 0; c < n; ++c) {
        int best = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(A[piv[r] * n + c]) > std::fabs(A[piv[best] * n + c])) best = r;
        if (best != c) {
            int t = piv[c];
            piv[c] = piv[best];
            piv[best] = t;
        }
        double p = A[piv[c] * n + c];
        if (std::fabs(p) <= cutoff) return false;
        for (int r = c + 1; r < n; ++r) {
            double f = A[piv[r] * n + c] / p;
            if (f == 0.0) continue;
            for (int k = c; k < n; ++k) A[piv[r] * n + k] -= f * A[piv[c] * n + k];
            b[piv[r]] -= f * b[piv[c]];
        }
    }
    for (int c = n - 1; c >= 0; --c) {
        double s = b[piv[c]];
        for (int k = c + 1; k < n; ++k) s -= A[piv[c] * n + k] * x[k];
        x[c] = s / A[piv[c] * n + c];
    }
    return true;
}

}  // namespace cechlab
