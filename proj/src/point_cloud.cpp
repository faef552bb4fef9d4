#include "cechlab/point_cloud.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cechlab {

PointCloud sample_poisson(double n, const GeometryContext& ctx, RngStream& rng) {
    if (!(n > 0.0) || !std::isfinite(n))
        throw DomainError("sample_poisson: intensity must be positive and finite");
    int64_t count = rng.poisson(n);
    PointCloud cloud(ctx.dim, n, rng.master_seed());
    cloud.reserve(count);
    std::vector<double> p(ctx.dim);
    for (int64_t i = 0; i < count; ++i) {
        for (int a = 0; a < ctx.dim; ++a) p[a] = rng.uniform01();
        cloud.append({p.data(), p.size()});
    }
    return cloud;
}

PointCloud sample_binomial(int64_t count, const GeometryContext& ctx, RngStream& rng) {
    PointCloud cloud(ctx.dim, static_cast<double>(count), rng.master_seed());
    cloud.reserve(count);
    std::vector<double> p(ctx.dim);
    for (int64_t i = 0; i < count; ++i) {
        for (int a = 0; a < ctx.dim; ++a) p[a] = rng.uniform01();
        cloud.append({p.data(), p.size()});
    }
    return cloud;
}

int64_t count_in_ball(const PointCloud& cloud, const TorusPoint& center, double r) {
    if (center.dim() != cloud.dim())
        throw DomainError("count_in_ball: dimension mismatch");
    if (!(r >= 0.0)) throw DomainError("count_in_ball: negative radius");
    const double r2 = r * r;
    int64_t count = 0;
    for (int64_t i = 0; i < cloud.size(); ++i)
        if (toroidal_dist2(cloud.point(i), center.span()) <= r2) ++count;
    return count;
}

void write_point_csv(std::ostream& os, const PointCloud& cloud) {
    for (int a = 0; a < cloud.dim(); ++a) os << (a ? ",x" : "x") << a;
    os << "\n";
    char buf[32];
    for (int64_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud.point(i);
        for (int a = 0; a < cloud.dim(); ++a) {
            std::snprintf(buf, sizeof buf, "%.17g", p[a]);
            os << (a ? "," : "") << buf;
        }
        os << "\n";
    }
}

void write_point_csv(const std::string& path, const PointCloud& cloud) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_point_csv(os, cloud);
}

PointCloud read_point_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("point csv: empty input");
    int dim = 1;
    for (char c : line)
        if (c == ',') ++dim;
    PointCloud cloud(dim, 0.0, 0);
    std::vector<double> p(dim);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        for (int a = 0; a < dim; ++a) {
            if (!std::getline(ls, cell, ','))
                throw std::runtime_error("point csv: short row");
            p[a] = std::stod(cell);
        }
        cloud.append({p.data(), p.size()});
    }
    return cloud;
}

PointCloud read_point_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_point_csv(is);
}

}  // namespace cechlab
