// Cech complex construction by minimal-enclosing-ball filtration, restricted
// to r < r_max so every simplex lives in a single Euclidean chart.
#pragma once

#include <iosfwd>

#include "cechlab/miniball.hpp"
#include "cechlab/neighbor_grid.hpp"

namespace cechlab {

struct Simplex {
    std::vector<uint32_t> vertices;  // strictly increasing
    double filtration_radius;
};

class CechComplex {
  public:
    CechComplex() = default;
    CechComplex(int dim, double radius, int max_sdim)
        : dim_(dim), radius_(radius), max_sdim_(max_sdim),
          verts_(max_sdim + 1), radii_(max_sdim + 1) {}

    int dim() const { return dim_; }
    double radius() const { return radius_; }
    int max_sdim() const { return max_sdim_; }

    int64_t simplex_count(int k) const {
        return k >= 0 && k <= max_sdim_ ? static_cast<int64_t>(radii_[k].size()) : 0;
    }
    std::span<const uint32_t> vertices(int k, int64_t i) const {
        return {verts_[k].data() + i * (k + 1), static_cast<size_t>(k + 1)};
    }
    double filtration(int k, int64_t i) const { return radii_[k][i]; }

    void push_simplex(int k, std::span<const uint32_t> v, double radius) {
        verts_[k].insert(verts_[k].end(), v.begin(), v.end());
        radii_[k].push_back(radius);
    }
    void set_filtration(int k, int64_t i, double radius) { radii_[k][i] = radius; }

    /// Index of the simplex with the given sorted vertex tuple, or -1.
    /// Simplices are stored in lexicographic order, so this is a binary search.
    int64_t find_simplex(int k, std::span<const uint32_t> v) const;

    Simplex simplex(int k, int64_t i) const {
        auto vs = vertices(k, i);
        return {{vs.begin(), vs.end()}, filtration(k, i)};
    }

  private:
    int dim_ = 0;
    double radius_ = 0.0;
    int max_sdim_ = 0;
    std::vector<std::vector<uint32_t>> verts_;  // [k]: flattened (k+1)-tuples, lex order
    std::vector<std::vector<double>> radii_;
};

/// All simplices of dimension <= max_sdim whose miniball radius (in the chart
/// centered at the lowest vertex) is at most r. Face-closed, lexicographically
/// ordered, with filtration values made monotone across the face relation.
CechComplex build_complex(const PointCloud& cloud, double r, int max_sdim,
                          const GeometryContext& ctx);

/// One line per simplex: `dim;v0,v1,...;filtration_radius`, 17 significant
/// digits, sorted by (dim, vertex tuple). A `#` metadata line leads the file.
void write_complex(std::ostream& os, const CechComplex& cplx);
void write_complex(const std::string& path, const CechComplex& cplx);
CechComplex read_complex(std::istream& is);
CechComplex read_complex(const std::string& path);

}  // namespace cechlab
