// Periodic grid buckets over a point cloud. Cells hold SoA coordinate copies
// so range queries run through the batched distance kernels.
#pragma once

#include <utility>
#include <vector>

#include "cechlab/kernels.hpp"
#include "cechlab/point_cloud.hpp"

namespace cechlab {

class NeighborGrid {
  public:
    struct Hit {
        uint32_t index;  // index into the original cloud
        double dist2;
    };

    /// Grid with cell side >= min_cell (cells per axis = floor(1/min_cell),
    /// capped so the table stays proportional to the cloud size).
    NeighborGrid(const PointCloud& cloud, double min_cell);

    int dim() const { return dim_; }
    int cells_per_axis() const { return m_; }
    double cell_side() const { return cell_; }
    int64_t size() const { return n_; }

    /// Squared distance to the nearest cloud point (infinity for empty cloud).
    double min_dist2(std::span<const double> q) const;

    int64_t count_within(std::span<const double> q, double rho, bool strict) const;

    void collect_within(std::span<const double> q, double rho, bool strict,
                        std::vector<Hit>& out) const;

    /// True when no point lies strictly inside the rho-ball around q, other
    /// than the listed exclusions (which sit on the boundary by construction).
    bool ball_empty_excluding(std::span<const double> q, double rho,
                              std::span<const uint32_t> excluded) const;

    /// Unordered pairs (i < j) at toroidal distance <= threshold.
    std::vector<std::pair<uint32_t, uint32_t>> pairs_within(double threshold) const;

    /// Sorted adjacency lists of the threshold-proximity graph.
    std::vector<std::vector<uint32_t>> adjacency(double threshold) const;

  private:
    template <typename Fn>
    void for_each_range_in_ball(std::span<const double> q, double rho, Fn&& fn) const;
    template <typename Fn>
    void for_each_cell_range(int64_t cell, Fn&& fn) const;

    int dim_;
    int m_;
    double cell_;
    int64_t n_;
    int64_t num_cells_;
    std::vector<int64_t> cell_start_;
    std::vector<uint32_t> order_;          // slot -> original index
    std::vector<std::vector<double>> soa_; // per-axis coordinates in slot order
    std::array<const double*, kMaxDim> axes_{};
};

/// Exactly the index pairs at toroidal distance <= 2r (grid-accelerated).
std::vector<std::pair<uint32_t, uint32_t>> neighbor_pairs(const PointCloud& cloud, double r);

}  // namespace cechlab
