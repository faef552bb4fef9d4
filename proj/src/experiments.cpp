#include "cechlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace cechlab {

int64_t binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0;
    int64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

TrialRecord run_trial(const TrialParams& params, uint64_t master_seed,
                      int64_t trial_index, const GeometryContext& ctx) {
    if (!(params.r > 0.0) || params.r >= ctx.r_max)
        throw DomainError("run_trial: derived radius exceeds r_max = r_conv/3");

    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.seed = derive_stream_seed(master_seed, static_cast<uint64_t>(trial_index));
    rec.lambda = params.lambda;
    rec.r = params.r;
    const int d = params.dim;
    rec.betti.assign(d + 1, 0);
    rec.crit.assign(d + 1, 0);
    rec.theta.assign(std::max(0, d - 1), 0);

    RngStream rng(master_seed, static_cast<uint64_t>(trial_index));
    PointCloud cloud = sample_poisson(params.n, ctx, rng);
    rec.n_realized = cloud.size();

    if (cloud.size() == 0) {
        rec.covered = false;
        rec.torus_homology_match = false;
        return rec;
    }

    CechComplex cplx = build_complex(cloud, params.r, d + 1, ctx);
    BettiVector bv = betti_numbers(cplx);
    CriticalCensus census = enumerate_critical_points(cloud, params.r, ctx);

    for (int k = 0; k <= d; ++k) {
        rec.betti[k] = bv.betti[k];
        rec.crit[k] = census.counts[k];
    }
    rec.chi_betti = bv.chi_from_betti;
    rec.chi_morse = census.chi_morse();
    if (rec.chi_betti != rec.chi_morse)
        throw std::logic_error(
            "run_trial: Morse-Euler identity violated (chi_betti=" +
            std::to_string(rec.chi_betti) + " chi_morse=" + std::to_string(rec.chi_morse) +
            " seed=" + std::to_string(rec.seed) + ")");

    if (d >= 2 && params.lambda > 1.0) {
        ThetaCount tc = count_theta_cycles(cloud, params.r, params.epsilon, ctx);
        for (int k = 1; k <= d - 1; ++k) rec.theta[k - 1] = tc.per_index[k];
    }

    rec.covered = is_covered(cloud, params.r, ctx);
    rec.torus_homology_match = true;
    for (int k = 0; k <= d; ++k)
        if (rec.betti[k] != binomial_coefficient(d, k)) rec.torus_homology_match = false;
    return rec;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string cell;
    while (std::getline(is, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& is) {
    SweepConfig cfg;
    std::string line;
    bool have_rule = false;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "dim") cfg.dim = std::stoi(val);
        else if (key == "n_values") {
            cfg.n_values.clear();
            for (auto& c : split_list(val)) cfg.n_values.push_back(std::stod(c));
        } else if (key == "lambda_rule") {
            if (val == "absolute") cfg.rule = LambdaRule::absolute;
            else if (val == "offset") cfg.rule = LambdaRule::offset;
            else throw DomainError("sweep config: lambda_rule must be absolute or offset");
            have_rule = true;
        } else if (key == "lambda_values") {
            cfg.lambda_values.clear();
            for (auto& c : split_list(val)) cfg.lambda_values.push_back(std::stod(c));
        } else if (key == "c") cfg.c = std::stod(val);
        else if (key == "w_values") {
            cfg.w_values.clear();
            for (auto& c : split_list(val)) cfg.w_values.push_back(std::stod(c));
        } else if (key == "trials") cfg.trials = std::stoll(val);
        else if (key == "master_seed") cfg.master_seed = std::stoull(val);
        else if (key == "epsilon") cfg.epsilon = std::stod(val);
        else if (key == "outputs") cfg.outputs = val;
        else if (key == "threads") cfg.threads = std::stoi(val);
        else throw DomainError("sweep config: unknown key '" + key + "'");
    }
    if (!have_rule) throw DomainError("sweep config: missing lambda_rule");
    if (cfg.trials < 1) throw DomainError("sweep config: trials must be >= 1");
    if (cfg.n_values.empty()) throw DomainError("sweep config: n_values is empty");
    if (cfg.outputs.empty()) throw DomainError("sweep config: outputs path is empty");
    return cfg;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    return parse_sweep_config(is);
}

std::vector<GridPoint> sweep_grid(const SweepConfig& cfg, const GeometryContext& ctx) {
    std::vector<GridPoint> grid;
    for (double n : cfg.n_values) {
        if (!(n > 0.0)) throw DomainError("sweep config: intensities must be positive");
        std::vector<double> lambdas;
        if (cfg.rule == LambdaRule::absolute) {
            lambdas = cfg.lambda_values;
        } else {
            for (double w : cfg.w_values)
                lambdas.push_back(std::log(n) + cfg.c * std::log(std::log(n)) + w);
        }
        // an empty lambda grid is allowed and yields a header-only CSV
        for (double lambda : lambdas) {
            if (!(lambda > 0.0))
                throw DomainError("sweep config: lambda must be positive");
            double r = ctx.radius_for_lambda(n, lambda);
            if (!(r < ctx.r_max))
                throw DomainError("sweep config: derived radius " + std::to_string(r) +
                                  " reaches r_max = r_conv/3; lower lambda or raise n");
            grid.push_back({n, lambda, r});
        }
    }
    return grid;
}

namespace {

struct Moments {
    double mean = 0.0, se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) return m;
    double s = 0.0;
    for (double x : xs) s += x;
    m.mean = s / xs.size();
    if (xs.size() > 1) {
        double v = 0.0;
        for (double x : xs) v += (x - m.mean) * (x - m.mean);
        v /= (xs.size() - 1);
        m.se = std::sqrt(v / xs.size());
    }
    return m;
}

void run_trials_parallel(const TrialParams& params, uint64_t master_seed,
                         int64_t trials, int threads, const GeometryContext& ctx,
                         std::vector<TrialRecord>& out) {
    out.resize(trials);
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = static_cast<int>(std::min<int64_t>(threads, trials));
    if (threads == 1) {
        for (int64_t t = 0; t < trials; ++t) out[t] = run_trial(params, master_seed, t, ctx);
        return;
    }
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int64_t t = next.fetch_add(1);
                if (t >= trials) return;
                try {
                    out[t] = run_trial(params, master_seed, t, ctx);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

void write_record_header(std::ostream& os, int dim) {
    os << "trial_index,seed,n_realized,lambda,r";
    for (int k = 0; k <= dim; ++k) os << ",betti_" << k;
    for (int k = 0; k <= dim; ++k) os << ",C_" << k;
    os << ",chi_betti,chi_morse,covered";
    for (int k = 1; k <= dim - 1; ++k) os << ",theta_" << k;
    os << ",torus_homology_match\n";
}

void write_record(std::ostream& os, const TrialRecord& rec, int dim) {
    char buf[40];
    os << rec.trial_index << "," << rec.seed << "," << rec.n_realized;
    std::snprintf(buf, sizeof buf, "%.17g", rec.lambda);
    os << "," << buf;
    std::snprintf(buf, sizeof buf, "%.17g", rec.r);
    os << "," << buf;
    for (int k = 0; k <= dim; ++k) os << "," << rec.betti[k];
    for (int k = 0; k <= dim; ++k) os << "," << rec.crit[k];
    os << "," << rec.chi_betti << "," << rec.chi_morse << "," << (rec.covered ? 1 : 0);
    for (int k = 1; k <= dim - 1; ++k) os << "," << rec.theta[k - 1];
    os << "," << (rec.torus_homology_match ? 1 : 0) << "\n";
}

std::pair<double, double> wilson_interval(int64_t successes, int64_t total) {
    if (total <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void sweep(const SweepConfig& cfg, std::ostream& summary) {
    GeometryContext ctx(cfg.dim);
    auto grid = sweep_grid(cfg, ctx);

    std::ofstream csv(cfg.outputs);
    if (!csv) throw std::runtime_error("sweep: cannot open output file " + cfg.outputs);
    write_record_header(csv, cfg.dim);

    std::vector<TrialRecord> all;
    for (size_t g = 0; g < grid.size(); ++g) {
        const auto& gp = grid[g];
        TrialParams params{cfg.dim, gp.n, gp.lambda, gp.r, cfg.epsilon};
        // Trials reuse stream indices across grid points: the cloud depends
        // only on (master_seed, trial_index, n, d), which keeps comparisons
        // across the lambda grid on common random numbers.
        std::vector<TrialRecord> recs;
        run_trials_parallel(params, cfg.master_seed, cfg.trials, cfg.threads, ctx, recs);
        for (const auto& rec : recs) write_record(csv, rec, cfg.dim);

        std::vector<double> b(cfg.dim + 1), se_b(cfg.dim + 1);
        int64_t covered = 0, matched = 0;
        std::vector<std::vector<double>> bk(cfg.dim + 1), ck(cfg.dim + 1), tk(cfg.dim + 1);
        for (const auto& rec : recs) {
            covered += rec.covered;
            matched += rec.torus_homology_match;
            for (int k = 0; k <= cfg.dim; ++k) {
                bk[k].push_back(static_cast<double>(rec.betti[k]));
                ck[k].push_back(static_cast<double>(rec.crit[k]));
            }
            for (int k = 1; k <= cfg.dim - 1; ++k)
                tk[k].push_back(static_cast<double>(rec.theta[k - 1]));
        }
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "grid n=%g lambda=%.6g r=%.6g trials=%lld", gp.n, gp.lambda, gp.r,
                      static_cast<long long>(cfg.trials));
        summary << buf << "\n";
        auto [clo, chi_] = wilson_interval(covered, cfg.trials);
        auto [mlo, mhi] = wilson_interval(matched, cfg.trials);
        std::snprintf(buf, sizeof buf,
                      "  coverage=%.4f wilson=[%.4f,%.4f]  homology_match=%.4f wilson=[%.4f,%.4f]",
                      double(covered) / cfg.trials, clo, chi_, double(matched) / cfg.trials,
                      mlo, mhi);
        summary << buf << "\n";
        for (int k = 0; k <= cfg.dim; ++k) {
            auto mb = moments(bk[k]);
            auto mc = moments(ck[k]);
            std::snprintf(buf, sizeof buf, "  k=%d  beta=%.5g+-%.3g  C=%.5g+-%.3g", k,
                          mb.mean, mb.se, mc.mean, mc.se);
            summary << buf;
            if (k >= 1 && k <= cfg.dim - 1) {
                auto mt = moments(tk[k]);
                std::snprintf(buf, sizeof buf, "  theta=%.5g+-%.3g", mt.mean, mt.se);
                summary << buf;
            }
            summary << "\n";
        }
        all.insert(all.end(), recs.begin(), recs.end());
    }

    // Constant estimation when the grid supports it (single intensity,
    // >= 4 distinct lambdas, >= 100 trials each).
    if (cfg.n_values.size() == 1 && cfg.trials >= 100) {
        std::map<double, int64_t> lambdas;
        for (const auto& rec : all) lambdas[rec.lambda]++;
        if (lambdas.size() >= 4) {
            auto fit = estimate_constants({all.data(), all.size()}, cfg.dim);
            summary << "fitted constants (incomplete-gamma shapes):\n";
            char buf[160];
            for (int k = 1; k <= cfg.dim; ++k) {
                std::snprintf(buf, sizeof buf, "  D_%d = %.6g +- %.2g", k, fit.D[k - 1],
                              1.96 * fit.D_se[k - 1]);
                summary << buf << "\n";
            }
            for (int j = 1; j <= cfg.dim - 1; ++j) {
                std::snprintf(buf, sizeof buf, "  A_%d = %.6g +- %.2g", j, fit.A[j - 1],
                              1.96 * fit.A_se[j - 1]);
                summary << buf << "\n";
            }
            std::snprintf(buf, sizeof buf,
                          "  A_0 consistency: sum (-1)^(k-1) D_k = %.6g (expect 1)",
                          fit.a0_stat);
            summary << buf << "\n";
        }
    }
}

ConstantsFit estimate_constants(std::span<const TrialRecord> records, int dim) {
    std::map<double, std::vector<const TrialRecord*>> groups;
    for (const auto& rec : records) groups[rec.lambda].push_back(&rec);
    if (groups.size() < 2)
        throw DomainError("estimate_constants: singular design (need distinct lambdas)");

    // Intensity is recoverable from (lambda, r): n = lambda / (omega_d r^d).
    GeometryContext ctx(dim);

    ConstantsFit fit;
    fit.D.assign(dim, 0.0);
    fit.D_se.assign(dim, 0.0);
    fit.residual_rel.assign(dim, {});
    for (auto& [lambda, _] : groups) fit.grid_lambda.push_back(lambda);

    auto shape = [](double lambda, int k) {
        double sum = 0.0, term = 1.0;
        for (int j = 0; j < k; ++j) {
            if (j > 0) term *= lambda / j;
            sum += term;
        }
        return 1.0 - std::exp(-lambda) * sum;
    };

    for (int k = 1; k <= dim; ++k) {
        double sxy = 0.0, sxx = 0.0;
        std::vector<double> ys, ses, ss;
        for (auto& [lambda, recs] : groups) {
            double n_int = lambda / (ctx.omega_d * std::pow(recs.front()->r, dim));
            std::vector<double> vals;
            vals.reserve(recs.size());
            for (auto* rec : recs) vals.push_back(rec->crit[k] / n_int);
            auto m = moments(vals);
            double s = shape(lambda, k);
            ys.push_back(m.mean);
            ses.push_back(m.se);
            ss.push_back(s);
            sxy += s * m.mean;
            sxx += s * s;
        }
        if (sxx <= 0.0) throw DomainError("estimate_constants: singular design");
        double Dk = sxy / sxx;
        fit.D[k - 1] = Dk;
        double var = 0.0;
        for (size_t g = 0; g < ys.size(); ++g) {
            double w = ss[g] / sxx;
            var += w * w * ses[g] * ses[g];
        }
        fit.D_se[k - 1] = std::sqrt(var);
        for (size_t g = 0; g < ys.size(); ++g) {
            double pred = Dk * ss[g];
            fit.residual_rel[k - 1].push_back(pred != 0.0 ? (ys[g] - pred) / pred : 0.0);
        }
    }

    fit.A.assign(std::max(0, dim - 1), 0.0);
    fit.A_se.assign(std::max(0, dim - 1), 0.0);
    double fact = 1.0;
    for (int j = 1; j <= dim - 1; ++j) {
        fact *= j;
        double a = 0.0, var = 0.0;
        for (int k = j + 1; k <= dim; ++k) {
            double sign = (k - 1) % 2 ? -1.0 : 1.0;
            a += sign * fit.D[k - 1];
            var += fit.D_se[k - 1] * fit.D_se[k - 1];
        }
        fit.A[j - 1] = a / fact;
        fit.A_se[j - 1] = std::sqrt(var) / fact;
    }
    fit.a0_stat = 0.0;
    for (int k = 1; k <= dim; ++k)
        fit.a0_stat += ((k - 1) % 2 ? -1.0 : 1.0) * fit.D[k - 1];
    return fit;
}

}  // namespace cechlab
