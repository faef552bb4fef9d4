#include "cechlab/morse.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cechlab/small_linalg.hpp"

namespace cechlab {

namespace {

constexpr double kBaryTol = 1e-10;       // strictly-inside test
constexpr double kEquidistTol = 1e-10;   // relative equidistance check

// Solves for the circumcenter offset alpha with G alpha = rhs where
// G is the Gram matrix of the edge vectors from the first point.
// Returns false on (near-)degeneracy.
bool circumsolve(const double* pts, int count, int dim, double* center,
                 double* radius, double* bary) {
    const int k = count - 1;
    const double* s0 = pts;
    double M[kMaxDim + 1][kMaxDim];
    double G0[(kMaxDim + 1) * (kMaxDim + 1)];
    double rhs0[kMaxDim + 1];
    for (int i = 0; i < k; ++i) {
        const double* si = pts + (i + 1) * dim;
        double n2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            M[i][a] = si[a] - s0[a];
            n2 += M[i][a] * M[i][a];
        }
        rhs0[i] = 0.5 * n2;
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += M[i][a] * M[j][a];
            G0[i * k + j] = s;
        }

    double G[(kMaxDim + 1) * (kMaxDim + 1)];
    double rhs[kMaxDim + 1];
    double alpha[kMaxDim + 1];
    std::copy(G0, G0 + k * k, G);
    std::copy(rhs0, rhs0 + k, rhs);
    bool ok = solve_small_system(G, rhs, alpha, k, 1e-10);
    if (!ok) {
        Eigen::MatrixXd Ge(k, k);
        Eigen::VectorXd be(k);
        for (int i = 0; i < k; ++i) {
            be(i) = rhs0[i];
            for (int j = 0; j < k; ++j) Ge(i, j) = G0[i * k + j];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ge, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.singularValues()(0) <= 0.0 ||
            svd.singularValues()(k - 1) <= 1e-10 * svd.singularValues()(0))
            return false;
        Eigen::VectorXd a = svd.solve(be);
        for (int i = 0; i < k; ++i) alpha[i] = a(i);
    }

    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        double c = 0.0;
        for (int i = 0; i < k; ++i) c += alpha[i] * M[i][a];
        center[a] = s0[a] + c;
        r2 += c * c;
    }
    *radius = std::sqrt(r2);

    double asum = 0.0;
    for (int i = 0; i < k; ++i) asum += alpha[i];
    bary[0] = 1.0 - asum;
    for (int i = 0; i < k; ++i) bary[i + 1] = alpha[i];

    // Equidistance is the defining property; reject solves that lost it.
    const double tol = kEquidistTol * std::max(*radius, 1e-6);
    for (int i = 0; i < count; ++i) {
        const double* si = pts + i * dim;
        double d2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            double t = si[a] - center[a];
            d2 += t * t;
        }
        if (std::fabs(std::sqrt(d2) - *radius) > tol) return false;
    }
    return true;
}

}  // namespace

CircumsphereResult circumsphere(std::span<const double> flat_points, int dim) {
    if (dim < 1 || dim > kMaxDim) throw DomainError("circumsphere: bad dimension");
    if (flat_points.size() % dim != 0) throw DomainError("circumsphere: ragged input");
    int count = static_cast<int>(flat_points.size() / dim);
    if (count < 2 || count > dim + 1)
        throw DomainError("circumsphere: need 2..d+1 points");
    CircumsphereResult out;
    out.center.resize(dim);
    out.barycentric.resize(count);
    double radius = 0.0;
    if (!circumsolve(flat_points.data(), count, dim, out.center.data(), &radius,
                     out.barycentric.data()))
        throw DegenerateInputError("circumsphere: affinely degenerate input");
    out.radius = radius;
    return out;
}

EnumerationStats for_each_critical_point(const PointCloud& cloud, const NeighborGrid& grid,
                                         double r_lo, double r_hi, const GeometryContext& ctx,
                                         const std::function<bool(const CandidateView&)>& fn) {
    EnumerationStats stats;
    const int d = ctx.dim;
    const int64_t n = cloud.size();
    if (n == 0) return stats;

    auto adj = grid.adjacency(2.0 * r_hi);

    std::vector<uint32_t> nbrs;
    std::vector<double> chart;
    std::vector<uint32_t> subset;
    std::vector<double> subset_chart;
    std::vector<std::vector<uint32_t>> cand_stack(d + 1);

    CircumsphereResult sphere;
    sphere.center.resize(d);
    sphere.barycentric.resize(d + 1);
    TorusPoint center_torus;
    std::vector<double> center_coords(d);
    bool stop = false;

    // Depth-first clique expansion; a set on a sphere of radius <= r_hi has
    // diameter <= 2 r_hi, so every candidate is a clique of the 2 r_hi graph.
    std::function<void(int)> extend = [&](int depth) {
        const auto& cand = cand_stack[depth];
        const int k = depth + 1;  // index of the candidate being formed
        for (size_t ci = 0; ci < cand.size() && !stop; ++ci) {
            uint32_t pos = cand[ci];
            uint32_t w = nbrs[pos];
            subset.push_back(w);
            subset_chart.insert(subset_chart.end(), chart.begin() + pos * d,
                                chart.begin() + (pos + 1) * d);

            double radius;
            sphere.barycentric.resize(k + 1);
            bool ok = circumsolve(subset_chart.data(), k + 1, d, sphere.center.data(),
                                  &radius, sphere.barycentric.data());
            if (!ok) {
                ++stats.degenerate_skipped;
            } else if (radius > r_lo && radius <= r_hi) {
                double min_bary = sphere.barycentric[0];
                for (int i = 1; i <= k; ++i) min_bary = std::min(min_bary, sphere.barycentric[i]);
                if (std::fabs(min_bary) <= kBaryTol) {
                    ++stats.boundary_ties;  // measure-zero tie: logged, not counted
                } else if (min_bary > kBaryTol) {
                    for (int a = 0; a < d; ++a)
                        center_coords[a] = wrap_coord(cloud.point(subset[0])[a] + sphere.center[a]);
                    center_torus = TorusPoint(center_coords);
                    if (grid.ball_empty_excluding(center_torus.span(), radius,
                                                  {subset.data(), subset.size()})) {
                        sphere.radius = radius;
                        CandidateView view{{subset.data(), subset.size()},
                                           k,
                                           subset_chart.data(),
                                           sphere,
                                           center_torus};
                        if (!fn(view)) stop = true;
                    }
                }
            }

            if (!stop && k < d) {
                auto& next = cand_stack[depth + 1];
                next.clear();
                const auto& wadj = adj[w];
                for (size_t cj = ci + 1; cj < cand.size(); ++cj) {
                    uint32_t u = nbrs[cand[cj]];
                    if (std::binary_search(wadj.begin(), wadj.end(), u))
                        next.push_back(cand[cj]);
                }
                if (!next.empty()) extend(depth + 1);
            }
            subset.pop_back();
            subset_chart.resize(subset_chart.size() - d);
        }
    };

    for (int64_t v = 0; v < n && !stop; ++v) {
        auto anchor = cloud.point(v);
        nbrs.clear();
        for (uint32_t u : adj[v])
            if (u > v) nbrs.push_back(u);
        if (nbrs.empty()) continue;
        chart.resize(nbrs.size() * d);
        for (size_t i = 0; i < nbrs.size(); ++i)
            lift_point(cloud.point(nbrs[i]), anchor, {chart.data() + i * d, (size_t)d});
        subset.assign(1, static_cast<uint32_t>(v));
        subset_chart.assign(d, 0.0);
        auto& cand0 = cand_stack[0];
        cand0.resize(nbrs.size());
        for (uint32_t i = 0; i < nbrs.size(); ++i) cand0[i] = i;
        extend(0);
    }
    return stats;
}

CriticalCensus enumerate_critical_points(const PointCloud& cloud, double r,
                                         const GeometryContext& ctx) {
    if (cloud.dim() != ctx.dim)
        throw DomainError("enumerate_critical_points: dimension mismatch");
    if (!(r > 0.0) || r >= ctx.r_max)
        throw DomainError("enumerate_critical_points: radius exceeds r_max = r_conv/3");

    CriticalCensus census;
    census.dim = ctx.dim;
    census.r = r;
    census.counts.assign(ctx.dim + 1, 0);
    census.by_index.resize(ctx.dim + 1);
    census.counts[0] = cloud.size();  // all minima sit at distance zero

    NeighborGrid grid(cloud, std::max(2.0 * r, 1e-3));
    auto stats = for_each_critical_point(
        cloud, grid, 0.0, r, ctx, [&](const CandidateView& view) {
            census.counts[view.index_k] += 1;
            CriticalPointRec rec;
            rec.subset.assign(view.subset.begin(), view.subset.end());
            rec.center = view.center_torus;
            rec.value = view.sphere.radius;
            rec.index_k = view.index_k;
            rec.barycentric = view.sphere.barycentric;
            census.by_index[view.index_k].push_back(std::move(rec));
            return true;
        });
    census.degenerate_skipped = stats.degenerate_skipped;
    census.boundary_ties = stats.boundary_ties;
    return census;
}

double expected_Ck(double n, double r, int k, double Dk, const GeometryContext& ctx) {
    if (k < 1 || k > ctx.dim) throw DomainError("expected_Ck: k out of range");
    if (!(Dk > 0.0)) throw DomainError("expected_Ck: Dk must be positive");
    const double lambda = ctx.lambda(n, r);
    double sum = 0.0, term = 1.0;
    for (int j = 0; j < k; ++j) {
        if (j > 0) term *= lambda / j;
        sum += term;
    }
    return Dk * n * (1.0 - std::exp(-lambda) * sum);
}

double expected_euler(double n, double r, std::span<const double> A,
                      const GeometryContext& ctx) {
    if (static_cast<int>(A.size()) != ctx.dim - 1)
        throw DomainError("expected_euler: coefficient list must have length d-1");
    const double lambda = ctx.lambda(n, r);
    double poly = 1.0, lpow = 1.0;
    for (int j = 1; j <= ctx.dim - 1; ++j) {
        lpow *= lambda;
        poly += A[j - 1] * lpow;
    }
    return n * std::exp(-lambda) * poly;
}

bool is_covered(const PointCloud& cloud, double r, const GeometryContext& ctx) {
    if (cloud.dim() != 0 && cloud.dim() != ctx.dim)
        throw DomainError("is_covered: dimension mismatch");
    if (!(r > 0.0) || r >= ctx.r_max)
        throw DomainError("is_covered: radius exceeds r_max = r_conv/3");
    if (cloud.size() == 0) return false;

    const int d = ctx.dim;
    NeighborGrid grid(cloud, std::max(2.0 * r, 1e-3));

    // (r/4)-net of the torus: grid centers with covering radius <= r/4.
    int per_axis = static_cast<int>(std::ceil(2.0 * std::sqrt(double(d)) / r));
    double m = 0.0;  // max over the net of the distance to the cloud
    {
        double q[kMaxDim];
        int idx[kMaxDim];
        for (int a = 0; a < d; ++a) idx[a] = 0;
        for (;;) {
            for (int a = 0; a < d; ++a) q[a] = (idx[a] + 0.5) / per_axis;
            double s = grid.min_dist2({q, (size_t)d});
            if (s > m) m = s;
            int a = 0;
            while (a < d && ++idx[a] == per_axis) idx[a++] = 0;
            if (a == d) break;
        }
        m = std::sqrt(m);
    }

    // The net pins max(rho_n) into [m, m + r/4]; the distance function is
    // 1-Lipschitz and every torus point is within r/4 of a net point.
    if (m > r) return false;           // explicit uncovered witness
    if (m + 0.25 * r <= r) return true;  // triangle-inequality certificate

    // Ambiguous band: the maximum is a critical value, and no critical value
    // can exceed m + r/4, so scan (r, m + r/4] exactly.
    double v_cap = m + 0.25 * r;
    if (v_cap >= ctx.r_max)
        throw EscalationError(
            "is_covered: cannot certify coverage, critical values may exceed r_max; "
            "shrink r or raise the intensity");
    bool found = false;
    for_each_critical_point(cloud, grid, r, v_cap, ctx, [&](const CandidateView&) {
        found = true;
        return false;
    });
    return !found;
}

}  // namespace cechlab
