#include "cechlab/cech.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cechlab {

int64_t CechComplex::find_simplex(int k, std::span<const uint32_t> v) const {
    const auto& flat = verts_[k];
    const int w = k + 1;
    int64_t lo = 0, hi = static_cast<int64_t>(radii_[k].size());
    while (lo < hi) {
        int64_t mid = (lo + hi) / 2;
        const uint32_t* s = flat.data() + mid * w;
        int cmp = 0;
        for (int i = 0; i < w; ++i) {
            if (s[i] != v[i]) {
                cmp = s[i] < v[i] ? -1 : 1;
                break;
            }
        }
        if (cmp < 0)
            lo = mid + 1;
        else if (cmp > 0)
            hi = mid;
        else
            return mid;
    }
    return -1;
}

namespace {

// Depth-first clique expansion of the 2r-proximity graph, filtering by
// miniball radius. Rejected simplices prune their subtree (the filtration is
// monotone), so work stays proportional to the output.
struct CechBuilder {
    const PointCloud& cloud;
    const GeometryContext& ctx;
    double r;
    int max_sdim;
    CechComplex& out;
    const std::vector<std::vector<uint32_t>>& adj;

    std::vector<double> chart;           // lifted coords of the anchor's neighbors
    std::vector<uint32_t> nbrs;          // neighbors of the anchor, > anchor
    std::vector<uint32_t> simplex;       // current vertex tuple
    std::vector<double> simplex_chart;   // flat lifted coords of `simplex`
    std::vector<std::vector<uint32_t>> cand_stack;  // positions into nbrs
    double mb_center[kMaxDim];

    void run() {
        const int d = ctx.dim;
        const int64_t n = cloud.size();
        for (int64_t v = 0; v < n; ++v) {
            uint32_t vv = static_cast<uint32_t>(v);
            out.push_simplex(0, {&vv, 1}, 0.0);
        }
        if (max_sdim == 0) return;

        cand_stack.resize(max_sdim + 1);
        for (int64_t v = 0; v < n; ++v) {
            auto anchor = cloud.point(v);
            nbrs.clear();
            for (uint32_t u : adj[v])
                if (u > v) nbrs.push_back(u);
            if (nbrs.empty()) continue;
            chart.resize(nbrs.size() * d);
            for (size_t i = 0; i < nbrs.size(); ++i)
                lift_point(cloud.point(nbrs[i]), anchor, {chart.data() + i * d, (size_t)d});

            simplex.assign(1, static_cast<uint32_t>(v));
            simplex_chart.assign(d, 0.0);  // anchor at the origin
            auto& cand0 = cand_stack[0];
            cand0.resize(nbrs.size());
            for (uint32_t i = 0; i < nbrs.size(); ++i) cand0[i] = i;
            extend(0);
        }
    }

    void extend(int depth) {
        const int d = ctx.dim;
        const auto& cand = cand_stack[depth];
        const int k = depth + 1;  // dimension of the simplex being formed
        for (size_t ci = 0; ci < cand.size(); ++ci) {
            uint32_t pos = cand[ci];
            uint32_t w = nbrs[pos];
            simplex.push_back(w);
            simplex_chart.insert(simplex_chart.end(), chart.begin() + pos * d,
                                 chart.begin() + (pos + 1) * d);
            double radius = miniball_compute(simplex_chart.data(), k + 1, d, mb_center);
            if (radius <= r) {
                out.push_simplex(k, {simplex.data(), simplex.size()}, radius);
                if (k < max_sdim) {
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
            }
            simplex.pop_back();
            simplex_chart.resize(simplex_chart.size() - d);
        }
    }
};

}  // namespace

CechComplex build_complex(const PointCloud& cloud, double r, int max_sdim,
                          const GeometryContext& ctx) {
    if (cloud.dim() != ctx.dim) throw DomainError("build_complex: dimension mismatch");
    if (!(r > 0.0) || r >= ctx.r_max)
        throw DomainError("build_complex: radius exceeds r_max = r_conv/3");
    if (max_sdim < 1 || max_sdim > ctx.dim + 1)
        throw DomainError("build_complex: max_sdim must lie in [1, d+1]");

    CechComplex out(ctx.dim, r, max_sdim);
    NeighborGrid grid(cloud, std::max(2.0 * r, 1e-3));
    auto adj = grid.adjacency(2.0 * r);
    CechBuilder builder{cloud, ctx, r, max_sdim, out, adj, {}, {}, {}, {}, {}, {}};
    builder.run();

    // Monotone filtration: a face never carries a larger value than a coface.
    // True in exact arithmetic; this clamps away rounding noise.
    std::vector<uint32_t> facet(max_sdim + 1);
    for (int k = 2; k <= max_sdim; ++k) {
        const int64_t count = out.simplex_count(k);
        for (int64_t i = 0; i < count; ++i) {
            auto vs = out.vertices(k, i);
            double f = out.filtration(k, i);
            for (int drop = 0; drop <= k; ++drop) {
                int m = 0;
                for (int j = 0; j <= k; ++j)
                    if (j != drop) facet[m++] = vs[j];
                int64_t fi = out.find_simplex(k - 1, {facet.data(), (size_t)k});
                if (fi < 0)
                    throw std::logic_error("build_complex: face closure violated");
                f = std::max(f, out.filtration(k - 1, fi));
            }
            out.set_filtration(k, i, f);
        }
    }
    return out;
}

void write_complex(std::ostream& os, const CechComplex& cplx) {
    os << "# cech dim=" << cplx.dim() << " radius=";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", cplx.radius());
    os << buf << " max_sdim=" << cplx.max_sdim() << "\n";
    for (int k = 0; k <= cplx.max_sdim(); ++k) {
        for (int64_t i = 0; i < cplx.simplex_count(k); ++i) {
            auto vs = cplx.vertices(k, i);
            os << k << ";";
            for (int j = 0; j <= k; ++j) os << (j ? "," : "") << vs[j];
            std::snprintf(buf, sizeof buf, "%.17g", cplx.filtration(k, i));
            os << ";" << buf << "\n";
        }
    }
}

void write_complex(const std::string& path, const CechComplex& cplx) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_complex(os, cplx);
}

CechComplex read_complex(std::istream& is) {
    std::string line;
    int dim = -1, max_sdim = -1;
    double radius = 0.0;
    std::vector<std::vector<uint32_t>> verts;
    std::vector<std::vector<double>> radii;
    int top = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "dim") dim = std::stoi(val);
                else if (key == "radius") radius = std::stod(val);
                else if (key == "max_sdim") max_sdim = std::stoi(val);
            }
            continue;
        }
        auto p1 = line.find(';');
        auto p2 = line.rfind(';');
        if (p1 == std::string::npos || p2 == p1)
            throw std::runtime_error("complex file: malformed line: " + line);
        int k = std::stoi(line.substr(0, p1));
        double f = std::stod(line.substr(p2 + 1));
        std::vector<uint32_t> vs;
        std::istringstream vsec(line.substr(p1 + 1, p2 - p1 - 1));
        std::string cell;
        while (std::getline(vsec, cell, ',')) vs.push_back(std::stoul(cell));
        if (static_cast<int>(vs.size()) != k + 1)
            throw std::runtime_error("complex file: vertex count mismatch");
        if (k > top) {
            top = k;
            verts.resize(top + 1);
            radii.resize(top + 1);
        }
        verts[k].insert(verts[k].end(), vs.begin(), vs.end());
        radii[k].push_back(f);
    }
    if (max_sdim < 0) max_sdim = std::max(top, 0);
    if (dim < 0) dim = std::max(top - 1, 1);
    if (radius == 0.0)
        for (const auto& rs : radii)
            for (double f : rs) radius = std::max(radius, f);
    CechComplex out(dim, radius, max_sdim);
    for (int k = 0; k <= top; ++k) {
        const int w = k + 1;
        for (size_t i = 0; i < radii[k].size(); ++i)
            out.push_simplex(k, {verts[k].data() + i * w, (size_t)w}, radii[k][i]);
    }
    return out;
}

CechComplex read_complex(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_complex(is);
}

}  // namespace cechlab
