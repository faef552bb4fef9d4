// Batched toroidal-distance kernels: scalar reference implementations plus
// an AVX2 variant selected at runtime. Both backends perform identical
// per-element IEEE operations, so results agree bit for bit and the test
// suite asserts exactly that.
#pragma once

#include <cstdint>
#include <string>

namespace cechlab::kernels {

enum class Backend { scalar, avx2 };

// Coordinates are stored SoA: axes[a] points at the per-axis array, and a
// kernel call covers the contiguous slot range [begin, end).
struct Ops {
    // out[i - begin] = squared toroidal distance from q to point i.
    void (*dist2_batch)(int d, const double* q, const double* const* axes,
                        int64_t begin, int64_t end, double* out);
    // min over the range of the squared toroidal distance (infinity if empty).
    double (*min_dist2)(int d, const double* q, const double* const* axes,
                        int64_t begin, int64_t end);
    // number of points with dist2 < r2 (strict) or <= r2.
    int64_t (*count_within)(int d, const double* q, const double* const* axes,
                            int64_t begin, int64_t end, double r2, bool strict);
};

bool avx2_supported();

/// Active kernel table. Chosen once: CECHLAB_KERNEL=scalar|avx2 overrides,
/// otherwise AVX2 when the CPU has it.
const Ops& active();
Backend active_backend();
std::string backend_name(Backend b);

/// Force a backend (tests). Throws if the backend is unavailable.
void force_backend(Backend b);

extern const Ops scalar_ops;
#if defined(CECHLAB_HAVE_AVX2)
extern const Ops avx2_ops;
#endif

}  // namespace cechlab::kernels
