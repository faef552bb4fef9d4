#include "cechlab/neighbor_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cechlab {

namespace {

thread_local std::vector<double> t_scratch;

}  // namespace

NeighborGrid::NeighborGrid(const PointCloud& cloud, double min_cell)
    : dim_(cloud.dim()), n_(cloud.size()) {
    if (!(min_cell > 0.0)) throw DomainError("NeighborGrid: cell size must be positive");
    int m = static_cast<int>(std::floor(1.0 / min_cell));
    if (m < 1) m = 1;
    // Keep the cell table within a constant factor of the point count.
    double budget = std::max<double>(64.0, 8.0 * static_cast<double>(std::max<int64_t>(n_, 1)));
    while (m > 1 && std::pow(static_cast<double>(m), dim_) > budget) --m;
    m_ = m;
    cell_ = 1.0 / m_;
    num_cells_ = 1;
    for (int a = 0; a < dim_; ++a) num_cells_ *= m_;

    std::vector<int64_t> cell_of(n_);
    std::vector<int64_t> counts(num_cells_, 0);
    for (int64_t i = 0; i < n_; ++i) {
        auto p = cloud.point(i);
        int64_t cell = 0;
        for (int a = dim_ - 1; a >= 0; --a) {
            int c = static_cast<int>(p[a] * m_);
            if (c >= m_) c = m_ - 1;
            cell = cell * m_ + c;
        }
        cell_of[i] = cell;
        ++counts[cell];
    }
    cell_start_.assign(num_cells_ + 1, 0);
    for (int64_t c = 0; c < num_cells_; ++c) cell_start_[c + 1] = cell_start_[c] + counts[c];
    order_.resize(n_);
    std::vector<int64_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (int64_t i = 0; i < n_; ++i) order_[cursor[cell_of[i]]++] = static_cast<uint32_t>(i);

    soa_.assign(dim_, std::vector<double>(n_));
    for (int64_t s = 0; s < n_; ++s) {
        auto p = cloud.point(order_[s]);
        for (int a = 0; a < dim_; ++a) soa_[a][s] = p[a];
    }
    for (int a = 0; a < dim_; ++a) axes_[a] = soa_[a].data();
}

template <typename Fn>
void NeighborGrid::for_each_cell_range(int64_t cell, Fn&& fn) const {
    int64_t b = cell_start_[cell], e = cell_start_[cell + 1];
    if (b < e) fn(b, e);
}

template <typename Fn>
void NeighborGrid::for_each_range_in_ball(std::span<const double> q, double rho,
                                          Fn&& fn) const {
    int reach = static_cast<int>(rho / cell_) + 1;
    if (2 * reach + 1 >= m_) {
        // Offsets would alias under wrap; scan everything once.
        if (n_ > 0) fn(int64_t{0}, n_);
        return;
    }
    int base[kMaxDim];
    for (int a = 0; a < dim_; ++a) {
        int c = static_cast<int>(q[a] * m_);
        base[a] = c >= m_ ? m_ - 1 : c;
    }
    int off[kMaxDim];
    for (int a = 0; a < dim_; ++a) off[a] = -reach;
    for (;;) {
        int64_t cell = 0;
        for (int a = dim_ - 1; a >= 0; --a) {
            int c = base[a] + off[a];
            if (c < 0) c += m_;
            if (c >= m_) c -= m_;
            cell = cell * m_ + c;
        }
        for_each_cell_range(cell, fn);
        int a = 0;
        while (a < dim_ && ++off[a] > reach) off[a++] = -reach;
        if (a == dim_) break;
    }
}

double NeighborGrid::min_dist2(std::span<const double> q) const {
    const auto& ops = kernels::active();
    double best = std::numeric_limits<double>::infinity();
    if (n_ == 0) return best;

    int base[kMaxDim];
    for (int a = 0; a < dim_; ++a) {
        int c = static_cast<int>(q[a] * m_);
        base[a] = c >= m_ ? m_ - 1 : c;
    }
    int max_ring = m_ / 2;
    for (int ring = 0; ring <= max_ring + 1; ++ring) {
        // Cells at Chebyshev offset `ring` hold points no closer than
        // (ring-1) * cell, so stop once that bound exceeds the best hit.
        double lb = (ring - 1) * cell_;
        if (lb > 0.0 && lb * lb >= best) return best;
        if (2 * ring + 1 >= m_) {
            double s = ops.min_dist2(dim_, q.data(), axes_.data(), 0, n_);
            return std::min(best, s);
        }
        int off[kMaxDim];
        for (int a = 0; a < dim_; ++a) off[a] = -ring;
        for (;;) {
            int cheb = 0;
            for (int a = 0; a < dim_; ++a) cheb = std::max(cheb, std::abs(off[a]));
            if (cheb == ring) {
                int64_t cell = 0;
                for (int a = dim_ - 1; a >= 0; --a) {
                    int c = base[a] + off[a];
                    if (c < 0) c += m_;
                    if (c >= m_) c -= m_;
                    cell = cell * m_ + c;
                }
                for_each_cell_range(cell, [&](int64_t b, int64_t e) {
                    double s = ops.min_dist2(dim_, q.data(), axes_.data(), b, e);
                    if (s < best) best = s;
                });
            }
            int a = 0;
            while (a < dim_ && ++off[a] > ring) off[a++] = -ring;
            if (a == dim_) break;
        }
    }
    return best;
}

int64_t NeighborGrid::count_within(std::span<const double> q, double rho,
                                   bool strict) const {
    const auto& ops = kernels::active();
    const double r2 = rho * rho;
    int64_t c = 0;
    for_each_range_in_ball(q, rho, [&](int64_t b, int64_t e) {
        c += ops.count_within(dim_, q.data(), axes_.data(), b, e, r2, strict);
    });
    return c;
}

void NeighborGrid::collect_within(std::span<const double> q, double rho, bool strict,
                                  std::vector<Hit>& out) const {
    const auto& ops = kernels::active();
    const double r2 = rho * rho;
    out.clear();
    for_each_range_in_ball(q, rho, [&](int64_t b, int64_t e) {
        t_scratch.resize(e - b);
        ops.dist2_batch(dim_, q.data(), axes_.data(), b, e, t_scratch.data());
        for (int64_t i = b; i < e; ++i) {
            double s = t_scratch[i - b];
            if (strict ? s < r2 : s <= r2) out.push_back({order_[i], s});
        }
    });
}

bool NeighborGrid::ball_empty_excluding(std::span<const double> q, double rho,
                                        std::span<const uint32_t> excluded) const {
    const auto& ops = kernels::active();
    const double r2 = rho * rho;
    bool empty = true;
    for_each_range_in_ball(q, rho, [&](int64_t b, int64_t e) {
        if (!empty) return;
        t_scratch.resize(e - b);
        ops.dist2_batch(dim_, q.data(), axes_.data(), b, e, t_scratch.data());
        for (int64_t i = b; i < e; ++i) {
            if (t_scratch[i - b] < r2) {
                uint32_t idx = order_[i];
                bool is_excluded = false;
                for (uint32_t x : excluded)
                    if (x == idx) {
                        is_excluded = true;
                        break;
                    }
                if (!is_excluded) {
                    empty = false;
                    return;
                }
            }
        }
    });
    return empty;
}

std::vector<std::pair<uint32_t, uint32_t>> NeighborGrid::pairs_within(
    double threshold) const {
    const auto& ops = kernels::active();
    const double r2 = threshold * threshold;
    std::vector<std::pair<uint32_t, uint32_t>> out;
    int reach = static_cast<int>(threshold / cell_) + 1;

    auto scan_point_vs_range = [&](int64_t slot, int64_t b, int64_t e) {
        double q[kMaxDim];
        for (int a = 0; a < dim_; ++a) q[a] = soa_[a][slot];
        t_scratch.resize(e - b);
        ops.dist2_batch(dim_, q, axes_.data(), b, e, t_scratch.data());
        for (int64_t j = b; j < e; ++j) {
            if (t_scratch[j - b] <= r2) {
                uint32_t u = order_[slot], v = order_[j];
                out.emplace_back(std::min(u, v), std::max(u, v));
            }
        }
    };

    if (2 * reach + 1 >= m_) {
        // Brute force: every ordered slot pair once.
        for (int64_t i = 0; i < n_; ++i)
            if (i + 1 < n_) scan_point_vs_range(i, i + 1, n_);
        return out;
    }

    // Half-space of cell offsets: zero offset handled in-cell, each other
    // unordered cell pair visited exactly once.
    std::vector<std::array<int, kMaxDim>> half_offsets;
    {
        int off[kMaxDim];
        for (int a = 0; a < dim_; ++a) off[a] = -reach;
        for (;;) {
            bool positive = false;
            for (int a = dim_ - 1; a >= 0; --a) {
                if (off[a] > 0) {
                    positive = true;
                    break;
                }
                if (off[a] < 0) break;
            }
            bool zero = true;
            for (int a = 0; a < dim_; ++a)
                if (off[a] != 0) zero = false;
            if (positive && !zero) {
                std::array<int, kMaxDim> o{};
                for (int a = 0; a < dim_; ++a) o[a] = off[a];
                half_offsets.push_back(o);
            }
            int a = 0;
            while (a < dim_ && ++off[a] > reach) off[a++] = -reach;
            if (a == dim_) break;
        }
    }

    int coords[kMaxDim];
    for (int a = 0; a < dim_; ++a) coords[a] = 0;
    for (int64_t cell = 0; cell < num_cells_; ++cell) {
        int64_t b = cell_start_[cell], e = cell_start_[cell + 1];
        if (b < e) {
            for (int64_t i = b; i < e; ++i)
                if (i + 1 < e) scan_point_vs_range(i, i + 1, e);
            for (const auto& o : half_offsets) {
                int64_t other = 0;
                for (int a = dim_ - 1; a >= 0; --a) {
                    int c = coords[a] + o[a];
                    if (c < 0) c += m_;
                    if (c >= m_) c -= m_;
                    other = other * m_ + c;
                }
                int64_t ob = cell_start_[other], oe = cell_start_[other + 1];
                if (ob < oe)
                    for (int64_t i = b; i < e; ++i) scan_point_vs_range(i, ob, oe);
            }
        }
        int a = 0;
        while (a < dim_ && ++coords[a] == m_) coords[a++] = 0;
    }
    return out;
}

std::vector<std::vector<uint32_t>> NeighborGrid::adjacency(double threshold) const {
    auto pairs = pairs_within(threshold);
    std::vector<std::vector<uint32_t>> adj(n_);
    for (auto [u, v] : pairs) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

std::vector<std::pair<uint32_t, uint32_t>> neighbor_pairs(const PointCloud& cloud,
                                                          double r) {
    if (!(r >= 0.0)) throw DomainError("neighbor_pairs: negative radius");
    NeighborGrid grid(cloud, std::max(2.0 * r, 1e-3));
    auto pairs = grid.pairs_within(2.0 * r);
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

}  // namespace cechlab
