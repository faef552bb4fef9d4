// Seeded random streams. Stream k is derived directly from (master_seed, k)
// so trials can run in any order or in parallel with identical output.
#pragma once

#include <cstdint>
#include <random>

#include "cechlab/geometry.hpp"

namespace cechlab {

/// SplitMix64 finalizer; used to spread seed material.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for substream `stream_index` of `master_seed`.
inline uint64_t derive_stream_seed(uint64_t master_seed, uint64_t stream_index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index ^ 0xD1B54A32D192ED03ULL));
}

class RngStream {
  public:
    RngStream(uint64_t master_seed, uint64_t stream_index)
        : master_seed_(master_seed),
          stream_index_(stream_index),
          gen_(derive_stream_seed(master_seed, stream_index)) {}

    uint64_t master_seed() const { return master_seed_; }
    uint64_t stream_index() const { return stream_index_; }

    uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

    /// Poisson variate: product-of-uniforms inversion below 30, otherwise
    /// Hormann's PTRS transformed rejection, exact over the whole mean range.
    int64_t poisson(double mean);

    /// Standard normal via Box-Muller (used only by test utilities).
    double normal01();

  private:
    uint64_t master_seed_;
    uint64_t stream_index_;
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cechlab
