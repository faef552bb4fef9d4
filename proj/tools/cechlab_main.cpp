// cechlab CLI: sample clouds, build complexes, compute Betti numbers,
// critical censuses, theta-cycle counts, coverage checks and full sweeps.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "cechlab/experiments.hpp"

using namespace cechlab;

namespace {

// --radius and --lambda are interchangeable; lambda converts through
// r = (L / (omega_d N))^(1/d) with N the cloud intensity (the realized
// point count when a file does not carry one).
double resolve_radius(double radius, double lambda, const PointCloud& cloud,
                      const GeometryContext& ctx) {
    if (radius > 0.0 && lambda > 0.0)
        throw CLI::ValidationError("give either --radius or --lambda, not both");
    if (radius > 0.0) return radius;
    if (lambda > 0.0) {
        double n = cloud.intensity_n() > 0.0 ? cloud.intensity_n()
                                             : static_cast<double>(cloud.size());
        if (!(n > 0.0)) throw CLI::ValidationError("--lambda needs a nonempty cloud");
        return ctx.radius_for_lambda(n, lambda);
    }
    throw CLI::ValidationError("one of --radius or --lambda is required");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for random Cech complexes on the flat torus"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw a Poisson cloud and write CSV");
    int s_dim = 2;
    double s_intensity = 100.0;
    uint64_t s_seed = 0;
    std::string s_out;
    sample->add_option("--dim", s_dim, "torus dimension")->required();
    sample->add_option("--intensity", s_intensity, "Poisson intensity n")->required();
    sample->add_option("--seed", s_seed, "master seed")->required();
    sample->add_option("--out", s_out, "output CSV path (default stdout)");

    // complex
    auto* complex_cmd = app.add_subcommand("complex", "build the Cech complex of a cloud");
    std::string c_in, c_out;
    double c_radius = 0.0, c_lambda = 0.0;
    int c_max_sdim = -1;
    complex_cmd->add_option("--in", c_in, "input point CSV")->required();
    complex_cmd->add_option("--radius", c_radius, "complex radius r < 1/6");
    complex_cmd->add_option("--lambda", c_lambda, "radius via lambda = omega_d n r^d");
    complex_cmd->add_option("--max-sdim", c_max_sdim, "top simplex dimension (default d+1)");
    complex_cmd->add_option("--out", c_out, "output complex path")->required();

    // betti
    auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of a stored complex");
    std::string b_in;
    betti_cmd->add_option("--in", b_in, "input complex file")->required();

    // critical
    auto* crit_cmd = app.add_subcommand("critical", "critical point census of a cloud");
    std::string k_in;
    double k_radius = 0.0, k_lambda = 0.0;
    crit_cmd->add_option("--in", k_in, "input point CSV")->required();
    crit_cmd->add_option("--radius", k_radius, "census radius r < 1/6");
    crit_cmd->add_option("--lambda", k_lambda, "radius via lambda");

    // theta
    auto* theta_cmd = app.add_subcommand("theta", "theta-cycle lower-bound counts");
    std::string t_in;
    double t_radius = 0.0, t_lambda = 0.0, t_eps = 0.1;
    theta_cmd->add_option("--in", t_in, "input point CSV")->required();
    theta_cmd->add_option("--radius", t_radius, "radius r < 1/6");
    theta_cmd->add_option("--lambda", t_lambda, "radius via lambda");
    theta_cmd->add_option("--epsilon", t_eps, "phi threshold in (0,1)")->required();

    // coverage
    auto* cov_cmd = app.add_subcommand("coverage", "does the union of r-balls cover the torus");
    std::string v_in;
    double v_radius = 0.0, v_lambda = 0.0;
    cov_cmd->add_option("--in", v_in, "input point CSV")->required();
    cov_cmd->add_option("--radius", v_radius, "radius r < 1/6");
    cov_cmd->add_option("--lambda", v_lambda, "radius via lambda");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a seeded Monte Carlo sweep");
    std::string w_config;
    sweep_cmd->add_option("--config", w_config, "key=value config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sample) {
            GeometryContext ctx(s_dim);
            RngStream rng(s_seed, 0);
            PointCloud cloud = sample_poisson(s_intensity, ctx, rng);
            if (s_out.empty())
                write_point_csv(std::cout, cloud);
            else
                write_point_csv(s_out, cloud);
            std::cerr << "sampled " << cloud.size() << " points (dim " << s_dim << ")\n";
        } else if (*complex_cmd) {
            PointCloud cloud = read_point_csv(c_in);
            GeometryContext ctx(cloud.dim());
            double r = resolve_radius(c_radius, c_lambda, cloud, ctx);
            int max_sdim = c_max_sdim > 0 ? c_max_sdim : ctx.dim + 1;
            CechComplex cplx = build_complex(cloud, r, max_sdim, ctx);
            write_complex(c_out, cplx);
            std::cerr << "complex at r=" << r << ":";
            for (int k = 0; k <= cplx.max_sdim(); ++k)
                std::cerr << " S_" << k << "=" << cplx.simplex_count(k);
            std::cerr << "\n";
        } else if (*betti_cmd) {
            CechComplex cplx = read_complex(b_in);
            BettiVector bv = betti_numbers(cplx);
            for (size_t k = 0; k < bv.betti.size(); ++k)
                std::cout << "beta_" << k << " = " << bv.betti[k] << "\n";
            std::cout << "euler_characteristic = " << bv.chi_from_betti << "\n";
        } else if (*crit_cmd) {
            PointCloud cloud = read_point_csv(k_in);
            GeometryContext ctx(cloud.dim());
            double r = resolve_radius(k_radius, k_lambda, cloud, ctx);
            CriticalCensus census = enumerate_critical_points(cloud, r, ctx);
            int64_t chi = census.chi_morse();
            for (int k = 0; k <= ctx.dim; ++k)
                std::cout << "C_" << k << " = " << census.counts[k] << "\n";
            std::cout << "chi_morse = " << chi << "\n";
            if (census.degenerate_skipped || census.boundary_ties)
                std::cout << "skipped: degenerate=" << census.degenerate_skipped
                          << " boundary_ties=" << census.boundary_ties << "\n";
        } else if (*theta_cmd) {
            PointCloud cloud = read_point_csv(t_in);
            GeometryContext ctx(cloud.dim());
            double r = resolve_radius(t_radius, t_lambda, cloud, ctx);
            ThetaCount tc = count_theta_cycles(cloud, r, t_eps, ctx);
            for (int k = 1; k <= ctx.dim - 1; ++k)
                std::cout << "theta_" << k << " = " << tc.per_index[k] << "\n";
            std::cout << "total = " << tc.total() << "\n";
            if (!tc.phi_observed.empty()) {
                auto phis = tc.phi_observed;
                std::sort(phis.begin(), phis.end());
                auto q = [&](double p) {
                    return phis[std::min(phis.size() - 1,
                                         static_cast<size_t>(p * phis.size()))];
                };
                std::printf("phi distribution over %zu window candidates: "
                            "min=%.4g q25=%.4g median=%.4g q75=%.4g max=%.4g\n",
                            phis.size(), phis.front(), q(0.25), q(0.5), q(0.75),
                            phis.back());
            }
        } else if (*cov_cmd) {
            PointCloud cloud = read_point_csv(v_in);
            GeometryContext ctx(cloud.dim());
            double r = resolve_radius(v_radius, v_lambda, cloud, ctx);
            bool covered = is_covered(cloud, r, ctx);
            std::cout << (covered ? "covered" : "not covered") << "\n";
        } else if (*sweep_cmd) {
            SweepConfig cfg = parse_sweep_config_file(w_config);
            sweep(cfg, std::cout);
            std::cerr << "wrote " << cfg.outputs << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
