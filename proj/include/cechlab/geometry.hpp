// Flat-torus geometry: toroidal metric, local Euclidean lifts, ball volumes.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cechlab {

// Highest torus dimension the fixed-size buffers support.
inline constexpr int kMaxDim = 8;

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Volume of the d-dimensional Euclidean unit ball.
double unit_ball_volume(int dim);

// Fixed geometric constants of the unit flat torus plus the dimension-dependent
// ball volume. r_max = r_conv / 3 is the largest radius at which the distance
// function behaves exactly as in Euclidean space.
struct GeometryContext {
    int dim;
    double r_conv = 0.5;
    double r_max = 0.5 / 3.0;
    double omega_d;

    explicit GeometryContext(int d) : dim(d), omega_d(unit_ball_volume(d)) {
        if (d < 1 || d > kMaxDim)
            throw DomainError("GeometryContext: dimension must be in [1, " +
                              std::to_string(kMaxDim) + "]");
    }

    /// Expected number of points of an intensity-n process in an r-ball.
    double lambda(double n, double r) const { return omega_d * n * std::pow(r, dim); }

    /// Radius at which an intensity-n process has expected ball count lambda.
    double radius_for_lambda(double n, double lambda) const {
        return std::pow(lambda / (omega_d * n), 1.0 / dim);
    }
};

/// Reduce a coordinate to the canonical representative in [0, 1).
inline double wrap_coord(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;  // x just below an integer can round up
    return y + 0.0;         // normalize -0.0
}

// A point on the unit flat torus, coordinates canonicalized to [0,1).
class TorusPoint {
  public:
    TorusPoint() = default;
    explicit TorusPoint(std::vector<double> coords) : c_(std::move(coords)) {
        for (double& x : c_) x = wrap_coord(x);
    }
    TorusPoint(std::initializer_list<double> coords) : TorusPoint(std::vector<double>(coords)) {}

    int dim() const { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[i]; }
    const std::vector<double>& coords() const { return c_; }
    std::span<const double> span() const { return {c_.data(), c_.size()}; }

    bool operator==(const TorusPoint& o) const { return c_ == o.c_; }

  private:
    std::vector<double> c_;
};

/// Squared toroidal distance between canonical coordinate vectors.
inline double toroidal_dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double t = std::fabs(a[i] - b[i]);
        double w = std::min(t, 1.0 - t);
        s += w * w;
    }
    return s;
}

/// Toroidal metric: min over integer shifts of the Euclidean distance.
double toroidal_distance(const TorusPoint& a, const TorusPoint& b);
double toroidal_distance(std::span<const double> a, std::span<const double> b);

// Euclidean representative of `p` in the chart centered at `center` (center
// maps to the origin). Valid whenever the toroidal distance is < 1/2; the
// per-axis nearest-shift reduction realizes the toroidal metric exactly.
void lift_point(std::span<const double> p, std::span<const double> center,
                std::span<double> out);

/// Isometric lift of a point cluster into the chart centered at `center`.
/// Every input must lie within toroidal distance `radius` of `center`,
/// and `radius` must be below the convexity radius.
std::vector<std::vector<double>> lift_cluster(const std::vector<TorusPoint>& points,
                                              const TorusPoint& center, double radius);

/// omega_d * r^d, the volume of a d-ball of radius r.
double ball_volume(double r, const GeometryContext& ctx);

/// Volume of the intersection of two unit d-balls with centers `delta` apart,
/// by adaptive quadrature of 2 w_{d-1} int_0^{acos(delta/2)} sin^d.
double intersection_volume_unit(double delta, const GeometryContext& ctx);

}  // namespace cechlab
