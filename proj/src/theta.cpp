#include "cechlab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cechlab/small_linalg.hpp"

namespace cechlab {

ThetaParams make_theta_params(double r, double lambda, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("theta: epsilon must lie in (0,1)");
    if (!(lambda > 1.0))
        throw DomainError("theta: requires lambda > 1 so that delta < 1");
    if (!(r > 0.0)) throw DomainError("theta: radius must be positive");
    ThetaParams p;
    p.epsilon = epsilon;
    p.lambda = lambda;
    p.delta = 1.0 / (lambda * lambda);
    p.r = r;
    p.r_prime = r * (1.0 - p.delta);
    p.r_dprime = r * (1.0 + std::sqrt(2.0 * p.delta));
    return p;
}

double point_to_hull_distance(std::span<const double> point,
                              std::span<const double> flat_vertices, int dim) {
    const int m = static_cast<int>(flat_vertices.size() / dim);
    if (m < 1 || m > kMaxDim + 1) throw DomainError("point_to_hull_distance: bad input");
    const double* pts = flat_vertices.data();
    const double* p = point.data();
    double best = std::numeric_limits<double>::infinity();

    // The nearest point of the hull lies in the relative interior of exactly
    // one face; projections onto other affine hulls either land outside the
    // face (rejected by the barycentric check) or farther away.
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        int members[kMaxDim + 1];
        int j = 0;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) members[j++] = i;
        const double* t0 = pts + members[0] * dim;
        if (j == 1) {
            double d2 = 0.0;
            for (int a = 0; a < dim; ++a) {
                double t = p[a] - t0[a];
                d2 += t * t;
            }
            best = std::min(best, std::sqrt(d2));
            continue;
        }
        const int k = j - 1;
        double M[kMaxDim + 1][kMaxDim];
        double G[(kMaxDim + 1) * (kMaxDim + 1)];
        double rhs[kMaxDim + 1];
        for (int i = 0; i < k; ++i) {
            const double* ti = pts + members[i + 1] * dim;
            for (int a = 0; a < dim; ++a) M[i][a] = ti[a] - t0[a];
        }
        for (int i = 0; i < k; ++i) {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += M[i][a] * (p[a] - t0[a]);
            rhs[i] = s;
        }
        for (int i = 0; i < k; ++i)
            for (int l = 0; l < k; ++l) {
                double s = 0.0;
                for (int a = 0; a < dim; ++a) s += M[i][a] * M[l][a];
                G[i * k + l] = s;
            }
        double alpha[kMaxDim + 1];
        if (!solve_small_system(G, rhs, alpha, k, 1e-12)) continue;
        double asum = 0.0;
        bool inside = true;
        for (int i = 0; i < k; ++i) {
            asum += alpha[i];
            if (alpha[i] < -1e-12) inside = false;
        }
        if (1.0 - asum < -1e-12) inside = false;
        if (!inside) continue;
        double d2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            double proj = t0[a];
            for (int i = 0; i < k; ++i) proj += alpha[i] * M[i][a];
            double t = p[a] - proj;
            d2 += t * t;
        }
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

namespace {

double phi_from_chart(const double* chart, const double* center, int k, int dim) {
    if (k == 1) return 1.0;  // boundary of a 1-simplex is its endpoints
    double min_dist = std::numeric_limits<double>::infinity();
    double facet[(kMaxDim + 1) * kMaxDim];
    for (int drop = 0; drop <= k; ++drop) {
        int m = 0;
        for (int i = 0; i <= k; ++i) {
            if (i == drop) continue;
            for (int a = 0; a < dim; ++a) facet[m * dim + a] = chart[i * dim + a];
            ++m;
        }
        double dist = point_to_hull_distance({center, (size_t)dim},
                                             {facet, (size_t)(m * dim)}, dim);
        min_dist = std::min(min_dist, dist);
    }
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        double t = chart[a] - center[a];
        r2 += t * t;
    }
    return min_dist / (2.0 * std::sqrt(r2));
}

// Certifies A_phi(Y) \subset U(P, R): a net of A_phi with covering radius
// h R must have every net point within R(1-h) of the cloud; the triangle
// inequality then covers every annulus point. h = min(eps, phi)/2 keeps the
// net fine (paper-side construction) while the annulus stays the one the
// theta-cycle lemma actually needs.
bool annulus_covered_impl(const TorusPoint& center, double R, double phi_value,
                          double eps, int dim, const NeighborGrid& grid) {
    const double h = 0.5 * std::min(eps, phi_value);
    std::vector<double> net = annulus_net_unit(dim, phi_value, h);
    const int64_t count = static_cast<int64_t>(net.size()) / dim;
    const double thr = R * (1.0 - h);
    const double thr2 = thr * thr;
    double q[kMaxDim];
    // Scrambled visiting order finds uncovered patches quickly.
    const int64_t stride = std::max<int64_t>(1, (count * 2) / 3 | 1);
    for (int64_t step = 0; step < count; ++step) {
        int64_t i = (step * stride) % count;
        for (int a = 0; a < dim; ++a) q[a] = wrap_coord(center[a] + R * net[i * dim + a]);
        if (grid.min_dist2({q, (size_t)dim}) > thr2) return false;
    }
    return true;
}

}  // namespace

std::vector<double> annulus_net_unit(int dim, double inner, double covering) {
    if (dim < 2) throw DomainError("annulus_net_unit: requires dimension >= 2");
    if (!(inner > 0.0 && inner <= 1.0))
        throw DomainError("annulus_net_unit: inner radius must lie in (0,1]");
    if (!(covering > 0.0)) throw DomainError("annulus_net_unit: covering radius <= 0");
    const double h = covering;

    std::vector<double> layers;
    if (inner >= 1.0) {
        layers.push_back(1.0);
    } else {
        int steps = static_cast<int>(std::ceil((1.0 - inner) / h));
        for (int i = 0; i <= steps; ++i)
            layers.push_back(inner + (1.0 - inner) * i / steps);
    }

    std::vector<double> out;
    double x[kMaxDim];
    for (double t : layers) {
        // Chordal covering s of the unit sphere so that layer error + sphere
        // error stays within h: radial |t - t_i| <= h/2, chordal t*s <= h/2.
        double s = h / (2.0 * t);
        int m = std::max(1, (int)std::ceil(std::sqrt(double(dim - 1)) / s));
        // Grid points on each face of the cube [-1,1]^dim, projected radially.
        // The projection is 1-Lipschitz outside the unit ball, so the face
        // covering radius sqrt(dim-1)/m <= s survives projection.
        for (int axis = 0; axis < dim; ++axis) {
            for (int sign = -1; sign <= 1; sign += 2) {
                int idx[kMaxDim];
                for (int a = 0; a < dim - 1; ++a) idx[a] = 0;
                for (;;) {
                    int aa = 0;
                    for (int a = 0; a < dim; ++a) {
                        if (a == axis) {
                            x[a] = static_cast<double>(sign);
                        } else {
                            x[a] = -1.0 + (2.0 * idx[aa] + 1.0) / m;
                            ++aa;
                        }
                    }
                    double norm = 0.0;
                    for (int a = 0; a < dim; ++a) norm += x[a] * x[a];
                    norm = std::sqrt(norm);
                    for (int a = 0; a < dim; ++a) out.push_back(t * x[a] / norm);
                    int carry = 0;
                    while (carry < dim - 1 && ++idx[carry] == m) idx[carry++] = 0;
                    if (carry == dim - 1) break;
                }
            }
        }
    }
    return out;
}

double phi(const CriticalPointRec& candidate, const PointCloud& cloud) {
    if (!candidate.is_critical)
        throw DomainError("phi: candidate is not a critical point");
    if (candidate.index_k < 1) throw DomainError("phi: index must be >= 1");
    if (candidate.index_k == 1) return 1.0;
    const int d = cloud.dim();
    const int k = candidate.index_k;
    auto anchor = cloud.point(candidate.subset[0]);
    std::vector<double> chart((k + 1) * d);
    for (int i = 0; i <= k; ++i)
        lift_point(cloud.point(candidate.subset[i]), anchor,
                   {chart.data() + i * d, (size_t)d});
    std::vector<double> center(d);
    lift_point(candidate.center.span(), anchor, {center.data(), center.size()});
    return phi_from_chart(chart.data(), center.data(), k, d);
}

bool annulus_covered(const CriticalPointRec& candidate, const PointCloud& cloud,
                     const GeometryContext& ctx, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw DomainError("annulus_covered: epsilon must lie in (0,1]");
    NeighborGrid grid(cloud, std::max(2.0 * candidate.value, 1e-3));
    return annulus_covered_impl(candidate.center, candidate.value,
                                phi(candidate, cloud), epsilon, ctx.dim, grid);
}

ThetaCount count_theta_cycles(const PointCloud& cloud, double r, double epsilon,
                              const GeometryContext& ctx) {
    if (!(r > 0.0) || r >= ctx.r_max)
        throw DomainError("count_theta_cycles: radius exceeds r_max = r_conv/3");
    const int d = ctx.dim;
    ThetaCount out;
    out.per_index.assign(std::max(0, d), 0);
    if (d < 2) return out;  // no interior homology degrees to certify
    if (cloud.size() == 0) return out;

    double n = cloud.intensity_n() > 0.0 ? cloud.intensity_n()
                                         : static_cast<double>(cloud.size());
    ThetaParams params = make_theta_params(r, ctx.lambda(n, r), epsilon);

    NeighborGrid grid(cloud, std::max(2.0 * r, 1e-3));
    for_each_critical_point(
        cloud, grid, params.r_prime, params.r, ctx, [&](const CandidateView& view) {
            const int k = view.index_k;
            if (k > d - 1) return true;
            ThetaCycle cyc;
            cyc.subset.assign(view.subset.begin(), view.subset.end());
            cyc.index_k = k;
            cyc.value = view.sphere.radius;
            cyc.phi = phi_from_chart(view.chart, view.sphere.center.data(), k, d);
            out.phi_observed.push_back(cyc.phi);
            // Isolation: only Y itself inside the closed r''-ball around C(Y);
            // by the intersection bound no foreign r-ball can then reach the
            // new simplex.
            cyc.isolation_certified =
                grid.count_within(view.center_torus.span(), params.r_dprime, false) ==
                static_cast<int64_t>(k) + 1;
            if (cyc.isolation_certified && cyc.phi >= epsilon) {
                cyc.annulus_certified = annulus_covered_impl(
                    view.center_torus, view.sphere.radius, cyc.phi, epsilon, d, grid);
                if (cyc.annulus_certified) out.per_index[k] += 1;
            }
            out.cycles.push_back(std::move(cyc));
            return true;
        });
    return out;
}

}  // namespace cechlab
