#include <cstdlib>
#include <stdexcept>

#include "cechlab/kernels.hpp"

namespace cechlab::kernels {

bool avx2_supported() {
#if defined(CECHLAB_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

Backend pick_initial() {
    if (const char* env = std::getenv("CECHLAB_KERNEL")) {
        std::string s(env);
        if (s == "scalar") return Backend::scalar;
        if (s == "avx2" && avx2_supported()) return Backend::avx2;
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend g_backend = pick_initial();

}  // namespace

const Ops& active() {
#if defined(CECHLAB_HAVE_AVX2)
    return g_backend == Backend::avx2 ? avx2_ops : scalar_ops;
#else
    return scalar_ops;
#endif
}

Backend active_backend() { return g_backend; }

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported())
        throw std::runtime_error("avx2 kernels not supported on this host");
    g_backend = b;
}

}  // namespace cechlab::kernels
