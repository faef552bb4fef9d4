#include "cechlab/homology.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace cechlab {

BitMatrix BitMatrix::multiply(const BitMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw DomainError("BitMatrix::multiply: shape mismatch");
    BitMatrix out(rows_, rhs.cols_);
    for (int64_t c = 0; c < rhs.cols_; ++c)
        for (int64_t k = 0; k < cols_; ++k)
            if (rhs.get(k, c))
                for (int64_t w = 0; w < wpc_; ++w)
                    out.bits_[c * out.wpc_ + w] ^= bits_[k * wpc_ + w];
    return out;
}

bool BitMatrix::is_zero() const {
    for (uint64_t w : bits_)
        if (w) return false;
    return true;
}

int64_t BitMatrix::rank() const {
    // Plain GF(2) elimination on a working copy of the columns.
    std::vector<std::vector<uint64_t>> cols(cols_);
    for (int64_t c = 0; c < cols_; ++c)
        cols[c].assign(bits_.begin() + c * wpc_, bits_.begin() + (c + 1) * wpc_);
    std::vector<int64_t> pivot_of_row(rows_, -1);
    int64_t rank = 0;
    auto low_bit = [&](const std::vector<uint64_t>& col) -> int64_t {
        for (int64_t w = wpc_ - 1; w >= 0; --w)
            if (col[w]) return w * 64 + (63 - std::countl_zero(col[w]));
        return -1;
    };
    for (int64_t c = 0; c < cols_; ++c) {
        int64_t low = low_bit(cols[c]);
        while (low >= 0 && pivot_of_row[low] >= 0) {
            const auto& other = cols[pivot_of_row[low]];
            for (int64_t w = 0; w < wpc_; ++w) cols[c][w] ^= other[w];
            low = low_bit(cols[c]);
        }
        if (low >= 0) {
            pivot_of_row[low] = c;
            ++rank;
        }
    }
    return rank;
}

BitMatrix boundary_matrix(const CechComplex& cplx, int k) {
    if (k < 1 || k > cplx.max_sdim())
        throw DomainError("boundary_matrix: k out of range");
    BitMatrix out(cplx.simplex_count(k - 1), cplx.simplex_count(k));
    std::vector<uint32_t> facet(k);
    for (int64_t c = 0; c < cplx.simplex_count(k); ++c) {
        auto vs = cplx.vertices(k, c);
        for (int drop = 0; drop <= k; ++drop) {
            int m = 0;
            for (int j = 0; j <= k; ++j)
                if (j != drop) facet[m++] = vs[j];
            int64_t r = cplx.find_simplex(k - 1, {facet.data(), (size_t)k});
            if (r < 0) throw std::logic_error("boundary_matrix: missing facet");
            out.set(r, c);
        }
    }
    return out;
}

namespace {

// Rank of the degree-k boundary operator by left-to-right column reduction
// with low-entry pairing. Columns are kept as sorted index vectors.
int64_t boundary_rank_sparse(const CechComplex& cplx, int k) {
    const int64_t ncols = cplx.simplex_count(k);
    const int64_t nrows = cplx.simplex_count(k - 1);
    if (ncols == 0 || nrows == 0) return 0;

    std::vector<int64_t> pivot_of_row(nrows, -1);
    std::vector<std::vector<uint32_t>> reduced;
    reduced.reserve(ncols);

    std::vector<uint32_t> facet(k), cur, tmp;
    int64_t rank = 0;
    for (int64_t c = 0; c < ncols; ++c) {
        auto vs = cplx.vertices(k, c);
        cur.clear();
        for (int drop = 0; drop <= k; ++drop) {
            int m = 0;
            for (int j = 0; j <= k; ++j)
                if (j != drop) facet[m++] = vs[j];
            int64_t r = cplx.find_simplex(k - 1, {facet.data(), (size_t)k});
            if (r < 0) throw std::logic_error("betti_numbers: missing facet");
            cur.push_back(static_cast<uint32_t>(r));
        }
        std::sort(cur.begin(), cur.end());

        while (!cur.empty()) {
            int64_t p = pivot_of_row[cur.back()];
            if (p < 0) break;
            // cur ^= reduced[p] (symmetric difference of sorted vectors)
            const auto& other = reduced[p];
            tmp.clear();
            size_t i = 0, j = 0;
            while (i < cur.size() && j < other.size()) {
                if (cur[i] < other[j]) tmp.push_back(cur[i++]);
                else if (cur[i] > other[j]) tmp.push_back(other[j++]);
                else { ++i; ++j; }
            }
            tmp.insert(tmp.end(), cur.begin() + i, cur.end());
            tmp.insert(tmp.end(), other.begin() + j, other.end());
            cur.swap(tmp);
        }
        if (!cur.empty()) {
            pivot_of_row[cur.back()] = static_cast<int64_t>(reduced.size());
            reduced.push_back(cur);
            ++rank;
        }
    }
    return rank;
}

// rank of the vertex-edge boundary equals #vertices minus #components.
int64_t boundary_rank_graph(const CechComplex& cplx) {
    const int64_t n = cplx.simplex_count(0);
    std::vector<int64_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<uint8_t> rk(n, 0);
    auto find = [&](int64_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    int64_t components = n;
    for (int64_t e = 0; e < cplx.simplex_count(1); ++e) {
        auto vs = cplx.vertices(1, e);
        int64_t a = find(vs[0]), b = find(vs[1]);
        if (a == b) continue;
        if (rk[a] < rk[b]) std::swap(a, b);
        parent[b] = a;
        if (rk[a] == rk[b]) ++rk[a];
        --components;
    }
    return n - components;
}

}  // namespace

BettiVector betti_numbers(const CechComplex& cplx) {
    const int d = cplx.dim();
    if (cplx.max_sdim() < d + 1)
        throw DomainError("betti_numbers: complex must be built with max_sdim = d+1");

    BettiVector out;
    out.simplex_counts.resize(cplx.max_sdim() + 1);
    for (int k = 0; k <= cplx.max_sdim(); ++k) out.simplex_counts[k] = cplx.simplex_count(k);

    std::vector<int64_t> rank(d + 2, 0);  // rank[k] = rank of boundary_k
    if (cplx.simplex_count(0) > 0) {
        rank[1] = boundary_rank_graph(cplx);
        for (int k = 2; k <= d + 1; ++k) rank[k] = boundary_rank_sparse(cplx, k);
    }

    out.betti.resize(d + 1);
    for (int k = 0; k <= d; ++k) {
        int64_t rk = k >= 1 ? rank[k] : 0;
        out.betti[k] = out.simplex_counts[k] - rk - rank[k + 1];
    }
    out.top_cycles = out.simplex_counts[d + 1] - rank[d + 1];
    out.chi_from_betti = 0;
    for (int k = 0; k <= d; ++k) out.chi_from_betti += (k % 2 ? -1 : 1) * out.betti[k];
    return out;
}

int64_t euler_characteristic(const CechComplex& cplx) {
    return betti_numbers(cplx).chi_from_betti;
}

}  // namespace cechlab
