#include "cechlab/miniball.hpp"

#include <Eigen/Dense>
#include <cstring>

#include "cechlab/small_linalg.hpp"

namespace cechlab {

namespace {

constexpr int kMaxPts = kMaxDim + 2;

struct WelzlState {
    const double* pts;
    int dim;
    int lst[kMaxPts];
    int nsup = 0;
    int sup[kMaxDim + 1];
    double center[kMaxDim];
    double r2 = -1.0;

    double dist2(int p) const {
        const double* x = pts + p * dim;
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
            double t = x[a] - center[a];
            s += t * t;
        }
        return s;
    }

    // Ball with the support points on its boundary and center in their
    // affine hull. Degenerate supports fall back to the least-squares
    // circumcenter (singular-value cutoff 1e-10).
    void solve_support() {
        if (nsup == 0) {
            for (int a = 0; a < dim; ++a) center[a] = 0.0;
            r2 = -1.0;
            return;
        }
        const double* s0 = pts + sup[0] * dim;
        if (nsup == 1) {
            for (int a = 0; a < dim; ++a) center[a] = s0[a];
            r2 = 0.0;
            return;
        }
        int j = nsup - 1;
        double M[kMaxDim + 1][kMaxDim];
        double G0[(kMaxDim + 1) * (kMaxDim + 1)];
        double rhs0[kMaxDim + 1];
        for (int i = 0; i < j; ++i) {
            const double* si = pts + sup[i + 1] * dim;
            double n2 = 0.0;
            for (int a = 0; a < dim; ++a) {
                M[i][a] = si[a] - s0[a];
                n2 += M[i][a] * M[i][a];
            }
            rhs0[i] = 0.5 * n2;
        }
        for (int i = 0; i < j; ++i)
            for (int k = 0; k < j; ++k) {
                double s = 0.0;
                for (int a = 0; a < dim; ++a) s += M[i][a] * M[k][a];
                G0[i * j + k] = s;
            }
        double G[(kMaxDim + 1) * (kMaxDim + 1)];
        double rhs[kMaxDim + 1];
        std::memcpy(G, G0, sizeof(double) * j * j);
        std::memcpy(rhs, rhs0, sizeof(double) * j);
        double alpha[kMaxDim + 1];
        if (!solve_small_system(G, rhs, alpha, j, 1e-10)) {
            // Least-squares circumcenter in the affine hull.
            Eigen::MatrixXd Ge(j, j);
            Eigen::VectorXd be(j);
            for (int i = 0; i < j; ++i) {
                be(i) = rhs0[i];
                for (int k = 0; k < j; ++k) Ge(i, k) = G0[i * j + k];
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ge, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(1e-10);
            Eigen::VectorXd a = svd.solve(be);
            for (int i = 0; i < j; ++i) alpha[i] = a(i);
        }
        double rr = 0.0;
        for (int a = 0; a < dim; ++a) {
            double c = 0.0;
            for (int i = 0; i < j; ++i) c += alpha[i] * M[i][a];
            center[a] = s0[a] + c;
            rr += c * c;
        }
        r2 = rr;
    }

    void mtf_mb(int end) {
        solve_support();
        if (nsup == dim + 1) return;
        int i = 0;
        while (i < end) {
            int p = lst[i];
            double eps = r2 * 1e-12;
            if (r2 < 0.0 || dist2(p) > r2 + eps) {
                sup[nsup++] = p;
                mtf_mb(i);
                --nsup;
                std::memmove(lst + 1, lst, i * sizeof(int));
                lst[0] = p;
            }
            ++i;
        }
    }
};

}  // namespace

double miniball_compute(const double* flat_points, int count, int dim,
                        double* center_out) {
    if (count <= 0) throw DomainError("miniball: empty input");
    if (count == 1) {
        for (int a = 0; a < dim; ++a) center_out[a] = flat_points[a];
        return 0.0;
    }
    if (count == 2) {
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            center_out[a] = 0.5 * (flat_points[a] + flat_points[dim + a]);
            double t = flat_points[a] - center_out[a];
            r2 += t * t;
        }
        return std::sqrt(r2);
    }
    if (count > kMaxPts) throw DomainError("miniball: too many points");

    WelzlState st;
    st.pts = flat_points;
    st.dim = dim;
    for (int i = 0; i < count; ++i) st.lst[i] = i;
    // Fixed-seed shuffle keeps the randomized expected-time guarantee while
    // making output deterministic.
    uint64_t s = 0x9E3779B97F4A7C15ULL;
    for (int i = count - 1; i > 0; --i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        int k = static_cast<int>((s >> 33) % static_cast<uint64_t>(i + 1));
        std::swap(st.lst[i], st.lst[k]);
    }
    st.mtf_mb(count);
    for (int a = 0; a < dim; ++a) center_out[a] = st.center[a];
    return st.r2 > 0.0 ? std::sqrt(st.r2) : 0.0;
}

Miniball miniball_radius(std::span<const double> flat_points, int dim) {
    if (dim < 1 || dim > kMaxDim) throw DomainError("miniball: bad dimension");
    if (flat_points.size() % dim != 0) throw DomainError("miniball: ragged input");
    int count = static_cast<int>(flat_points.size() / dim);
    Miniball out;
    out.center.resize(dim);
    out.radius = miniball_compute(flat_points.data(), count, dim, out.center.data());
    return out;
}

}  // namespace cechlab
