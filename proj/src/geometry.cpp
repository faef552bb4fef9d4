#include "cechlab/geometry.hpp"

#include <algorithm>

namespace cechlab {

double unit_ball_volume(int dim) {
    if (dim < 0) throw DomainError("unit_ball_volume: negative dimension");
    return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

static void check_same_dim(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DomainError("toroidal_distance: dimension mismatch");
}

double toroidal_distance(std::span<const double> a, std::span<const double> b) {
    check_same_dim(a, b);
    return std::sqrt(toroidal_dist2(a, b));
}

double toroidal_distance(const TorusPoint& a, const TorusPoint& b) {
    return toroidal_distance(a.span(), b.span());
}

void lift_point(std::span<const double> p, std::span<const double> center,
                std::span<double> out) {
    for (size_t i = 0; i < p.size(); ++i) {
        double dx = p[i] - center[i];
        out[i] = dx - std::round(dx);
    }
}

std::vector<std::vector<double>> lift_cluster(const std::vector<TorusPoint>& points,
                                              const TorusPoint& center, double radius) {
    if (radius >= 0.5)
        throw DomainError("lift_cluster: radius must be below the convexity radius 1/2");
    const int d = center.dim();
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    for (const TorusPoint& p : points) {
        if (p.dim() != d) throw DomainError("lift_cluster: dimension mismatch");
        std::vector<double> q(d);
        lift_point(p.span(), center.span(), {q.data(), q.size()});
        double n2 = 0.0;
        for (double x : q) n2 += x * x;
        if (n2 > radius * radius * (1.0 + 1e-12))
            throw DomainError("lift_cluster: point farther than radius from center");
        out.push_back(std::move(q));
    }
    return out;
}

double ball_volume(double r, const GeometryContext& ctx) {
    // The torus only ever uses r < r_conv, but omega_d r^d itself is
    // well-defined for any nonnegative radius and the unit-ball sanity
    // checks rely on that.
    if (!(r >= 0.0) || !std::isfinite(r))
        throw DomainError("ball_volume: radius must be finite and nonnegative");
    return ctx.omega_d * std::pow(r, ctx.dim);
}

namespace {

// Adaptive Simpson with the usual Richardson correction.
template <typename F>
double simpson(F&& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double fa, double b, double fb, double m,
                        double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double tol) {
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    return adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace

double intersection_volume_unit(double delta, const GeometryContext& ctx) {
    if (!(delta >= 0.0 && delta <= 2.0))
        throw DomainError("intersection_volume_unit: delta must lie in [0, 2]");
    if (delta == 2.0) return 0.0;
    const int d = ctx.dim;
    const double upper = std::acos(0.5 * delta);
    auto f = [d](double theta) { return std::pow(std::sin(theta), d); };
    return 2.0 * unit_ball_volume(d - 1) * integrate(f, 0.0, upper, 1e-10);
}

}  // namespace cechlab
