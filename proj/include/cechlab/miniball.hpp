// Smallest enclosing ball of a few Euclidean points (Welzl, move-to-front,
// fixed shuffle seed for deterministic output).
#pragma once

#include <span>
#include <vector>

#include "cechlab/geometry.hpp"

namespace cechlab {

struct Miniball {
    std::vector<double> center;
    double radius = 0.0;
};

/// Points are given as a flat row-major array (count x dim). Requires
/// 1 <= count; intended for count <= dim + 2 as produced by simplex charts.
Miniball miniball_radius(std::span<const double> flat_points, int dim);

// Allocation-free variant for hot loops: writes the center into `center_out`
// (length dim) and returns the radius.
double miniball_compute(const double* flat_points, int count, int dim,
                        double* center_out);

}  // namespace cechlab
