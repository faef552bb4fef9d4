// Critical points of the toroidal distance function: a (k+1)-subset Y
// generates an index-k critical point at its circumcenter C(Y) when C(Y)
// lies inside the open simplex spanned by Y and the open circumball holds
// no other process point.
#pragma once

#include <functional>

#include "cechlab/neighbor_grid.hpp"

namespace cechlab {

struct EscalationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CircumsphereResult {
    std::vector<double> center;       // chart coordinates
    double radius = 0.0;
    std::vector<double> barycentric;  // k+1 coefficients, summing to 1
};

/// Circumsphere of k+1 affinely independent Euclidean points (flat row-major).
/// Throws DegenerateInputError when the points are degenerate beyond the
/// 1e-10 cutoff.
CircumsphereResult circumsphere(std::span<const double> flat_points, int dim);

struct CriticalPointRec {
    std::vector<uint32_t> subset;     // the generating set Y, sorted
    TorusPoint center;                // C(Y) mapped back to the torus
    double value = 0.0;               // R(Y), the critical value
    int index_k = 0;
    std::vector<double> barycentric;  // coordinates of C(Y) in the simplex
    bool is_critical = true;
};

struct CriticalCensus {
    int dim = 0;
    double r = 0.0;
    std::vector<int64_t> counts;                          // C_0 .. C_d
    std::vector<std::vector<CriticalPointRec>> by_index;  // [k], k = 1..d
    int64_t degenerate_skipped = 0;
    int64_t boundary_ties = 0;

    int64_t chi_morse() const {
        int64_t s = 0;
        for (size_t k = 0; k < counts.size(); ++k) s += (k % 2 ? -1 : 1) * counts[k];
        return s;
    }
};

// One candidate as seen by the low-level enumeration: the subset, its lifted
// chart (anchored at the lowest vertex), and the circumsphere data. Center
// is in chart coordinates; `center_torus` is the wrapped representative.
struct CandidateView {
    std::span<const uint32_t> subset;
    int index_k;
    const double* chart;  // (k+1) x dim, row-major
    const CircumsphereResult& sphere;
    const TorusPoint& center_torus;
};

struct EnumerationStats {
    int64_t degenerate_skipped = 0;
    int64_t boundary_ties = 0;
};

/// Enumerates every critical candidate with circumradius in (r_lo, r_hi],
/// positive barycentric coordinates and empty open circumball. Candidates are
/// drawn from cliques of the 2*r_hi proximity graph. The callback may return
/// false to stop early.
EnumerationStats for_each_critical_point(const PointCloud& cloud, const NeighborGrid& grid,
                                         double r_lo, double r_hi, const GeometryContext& ctx,
                                         const std::function<bool(const CandidateView&)>& fn);

/// Full census of critical points with value <= r (r < r_max). C_0 = |cloud|.
CriticalCensus enumerate_critical_points(const PointCloud& cloud, double r,
                                         const GeometryContext& ctx);

/// Closed-form E[C_k(r)] = D_k n (1 - e^-L sum_{j<k} L^j/j!), L = omega_d n r^d.
double expected_Ck(double n, double r, int k, double Dk, const GeometryContext& ctx);

/// Closed-form E[chi(r)] = n e^-L (1 + sum_{j=1}^{d-1} A_j L^j).
double expected_euler(double n, double r, std::span<const double> A,
                      const GeometryContext& ctx);

/// True iff every point of the torus lies within distance r of the cloud.
/// Decision combines an (r/4)-net bound on the distance function with an
/// exact enumeration of critical values in the ambiguous band; throws
/// EscalationError when a "covered" verdict would need critical values
/// beyond r_max.
bool is_covered(const PointCloud& cloud, double r, const GeometryContext& ctx);

}  // namespace cechlab
