// Poisson point samples on the torus and their CSV serialization.
#pragma once

#include <iosfwd>
#include <string>

#include "cechlab/geometry.hpp"
#include "cechlab/rng.hpp"

namespace cechlab {

// Row-major flat storage; coordinates are canonical representatives in [0,1).
class PointCloud {
  public:
    PointCloud() = default;
    PointCloud(int dim, double intensity_n, uint64_t seed)
        : dim_(dim), intensity_n_(intensity_n), seed_(seed) {}

    int dim() const { return dim_; }
    double intensity_n() const { return intensity_n_; }
    uint64_t seed() const { return seed_; }

    int64_t size() const { return dim_ ? static_cast<int64_t>(coords_.size()) / dim_ : 0; }
    std::span<const double> point(int64_t i) const {
        return {coords_.data() + i * dim_, static_cast<size_t>(dim_)};
    }
    const std::vector<double>& coords() const { return coords_; }

    void append(std::span<const double> p) {
        for (double x : p) coords_.push_back(wrap_coord(x));
    }
    void reserve(int64_t n) { coords_.reserve(n * dim_); }

  private:
    int dim_ = 0;
    double intensity_n_ = 0.0;
    uint64_t seed_ = 0;
    std::vector<double> coords_;
};

/// Homogeneous Poisson process of intensity n on the unit torus:
/// N ~ Poisson(n) points, i.i.d. uniform given N.
PointCloud sample_poisson(double n, const GeometryContext& ctx, RngStream& rng);

/// Fixed-count binomial process (internal helper for coverage cross-checks).
PointCloud sample_binomial(int64_t count, const GeometryContext& ctx, RngStream& rng);

/// Number of cloud points within toroidal distance r of `center`.
int64_t count_in_ball(const PointCloud& cloud, const TorusPoint& center, double r);

/// CSV with header x0,...,x{d-1}; one row per point at 17 significant digits.
void write_point_csv(std::ostream& os, const PointCloud& cloud);
void write_point_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_point_csv(std::istream& is);
PointCloud read_point_csv(const std::string& path);

}  // namespace cechlab
