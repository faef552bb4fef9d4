// Theta-cycles: index-k critical points whose surrounding annulus is already
// covered, so the new simplex provably splits a void and creates a k-cycle.
// Counting them yields the certified lower bound beta_k^eps(r) <= beta_k(r).
#pragma once

#include "cechlab/morse.hpp"

namespace cechlab {

struct ThetaParams {
    double epsilon;
    double lambda;
    double delta;     // Lambda^-2
    double r;
    double r_prime;   // r (1 - delta)
    double r_dprime;  // r (1 + sqrt(2 delta))
};

/// Window parameters for the configured Lambda; requires lambda > 1.
ThetaParams make_theta_params(double r, double lambda, double epsilon);

struct ThetaCycle {
    std::vector<uint32_t> subset;
    int index_k = 0;
    double value = 0.0;  // R(Y)
    double phi = 0.0;
    bool annulus_certified = false;
    bool isolation_certified = false;
};

struct ThetaCount {
    std::vector<int64_t> per_index;    // slot k used for k = 1..d-1
    std::vector<ThetaCycle> cycles;
    std::vector<double> phi_observed;  // phi of every window candidate
    int64_t total() const {
        int64_t s = 0;
        for (int64_t c : per_index) s += c;
        return s;
    }
};

/// phi(Y): distance from the circumcenter to the simplex boundary, divided by
/// 2R(Y). Equals 1 for index-1 candidates by the paper-side convention.
double phi(const CriticalPointRec& candidate, const PointCloud& cloud);

/// Conservative certificate that the annulus A_eps(Y) (and hence A_phi(Y)
/// for any phi >= eps) lies inside the union of R(Y)-balls: every point of a
/// deterministic (eps R/2)-net of A_eps must be within R(1 - eps/2) of a
/// cloud point (closed inequality; triangle inequality closes the gap).
bool annulus_covered(const CriticalPointRec& candidate, const PointCloud& cloud,
                     const GeometryContext& ctx, double epsilon);

/// Net of the annulus {x : inner <= |x| <= 1} with the given covering radius,
/// returned as flat dim-major coordinates. Deterministic and rigidly placed.
std::vector<double> annulus_net_unit(int dim, double inner, double covering);

/// Counts, per index k in 1..d-1, the critical candidates with
/// R(Y) in (r', r], B_{r''}(C(Y)) containing only Y, phi(Y) >= epsilon and a
/// certified annulus.
ThetaCount count_theta_cycles(const PointCloud& cloud, double r, double epsilon,
                              const GeometryContext& ctx);

/// Distance from a point to the convex hull of up to d+1 Euclidean points
/// (used for the simplex-boundary distance inside phi; exposed for tests).
double point_to_hull_distance(std::span<const double> point,
                              std::span<const double> flat_vertices, int dim);

}  // namespace cechlab
