// Betti numbers over the two-element field by boundary-matrix rank reduction.
#pragma once

#include "cechlab/cech.hpp"

namespace cechlab {

struct BettiVector {
    std::vector<int64_t> betti;           // beta_0 .. beta_d
    int64_t chi_from_betti = 0;           // sum (-1)^k beta_k
    std::vector<int64_t> simplex_counts;  // dimensions 0 .. max_sdim
    // Cycles in the truncation dimension d+1 (they would be filled by
    // (d+2)-simplices of the untruncated clique complex). With this term the
    // Euler-Poincare identity holds exactly on the truncated complex:
    //   chi_from_betti == chi_from_counts() + (-1)^d top_cycles.
    int64_t top_cycles = 0;
    int64_t chi_from_counts() const {
        int64_t s = 0;
        for (size_t k = 0; k < simplex_counts.size(); ++k)
            s += (k % 2 ? -1 : 1) * simplex_counts[k];
        return s;
    }
};

// Column-major GF(2) matrix, 64 entries per machine word.
class BitMatrix {
  public:
    BitMatrix(int64_t rows, int64_t cols)
        : rows_(rows), cols_(cols), wpc_((rows + 63) / 64), bits_(wpc_ * cols, 0) {}

    int64_t rows() const { return rows_; }
    int64_t cols() const { return cols_; }
    bool get(int64_t r, int64_t c) const {
        return (bits_[c * wpc_ + r / 64] >> (r % 64)) & 1u;
    }
    void set(int64_t r, int64_t c) { bits_[c * wpc_ + r / 64] |= uint64_t{1} << (r % 64); }

    /// GF(2) matrix product (small inputs; used by the d^2 = 0 checks).
    BitMatrix multiply(const BitMatrix& rhs) const;
    bool is_zero() const;
    int64_t rank() const;

  private:
    int64_t rows_, cols_, wpc_;
    std::vector<uint64_t> bits_;
};

/// Boundary operator of the complex in degree k: rows are (k-1)-simplices,
/// columns are k-simplices, entry 1 iff the row simplex is a facet.
BitMatrix boundary_matrix(const CechComplex& cplx, int k);

/// Exact Betti numbers beta_0..beta_d over GF(2). Requires the complex to be
/// built with max_sdim = d+1 so that beta_d is correct.
BettiVector betti_numbers(const CechComplex& cplx);

/// Alternating sum of Betti numbers (equals the alternating simplex count).
int64_t euler_characteristic(const CechComplex& cplx);

}  // namespace cechlab
