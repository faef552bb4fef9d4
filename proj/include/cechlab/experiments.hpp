// Monte Carlo sweep harness: seeded trials, CSV reporting and the
// incomplete-gamma constant fits.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cechlab/homology.hpp"
#include "cechlab/theta.hpp"

namespace cechlab {

struct TrialParams {
    int dim = 2;
    double n = 0.0;       // process intensity
    double lambda = 0.0;  // omega_d n r^d
    double r = 0.0;
    double epsilon = 0.1;
};

struct TrialRecord {
    int64_t trial_index = 0;
    uint64_t seed = 0;  // derived stream seed for this trial
    int64_t n_realized = 0;
    double lambda = 0.0;
    double r = 0.0;
    std::vector<int64_t> betti;  // beta_0 .. beta_d
    std::vector<int64_t> crit;   // C_0 .. C_d
    int64_t chi_betti = 0;
    int64_t chi_morse = 0;
    bool covered = false;
    std::vector<int64_t> theta;  // k = 1 .. d-1
    bool torus_homology_match = false;
};

/// One full trial: sample, build, reduce, census, theta, coverage.
/// Deterministic given (master_seed, trial_index). Throws std::logic_error if
/// the Morse-Euler identity fails (that is a geometry bug, never statistics).
TrialRecord run_trial(const TrialParams& params, uint64_t master_seed,
                      int64_t trial_index, const GeometryContext& ctx);

enum class LambdaRule { absolute, offset };

struct SweepConfig {
    int dim = 2;
    std::vector<double> n_values;
    LambdaRule rule = LambdaRule::absolute;
    std::vector<double> lambda_values;  // absolute rule
    double c = 0.0;                     // offset rule: Lambda = log n + c log log n + w
    std::vector<double> w_values;
    int64_t trials = 1;
    uint64_t master_seed = 0;
    double epsilon = 0.1;
    std::string outputs;
    int threads = 0;  // 0 = hardware
};

SweepConfig parse_sweep_config(std::istream& is);
SweepConfig parse_sweep_config_file(const std::string& path);

struct GridPoint {
    double n, lambda, r;
};

/// Expands and validates the grid; every derived radius must stay below r_max.
std::vector<GridPoint> sweep_grid(const SweepConfig& cfg, const GeometryContext& ctx);

/// Runs all trials, writes one CSV row per trial to cfg.outputs and prints
/// per-grid-point summary lines (means, standard errors, Wilson intervals).
void sweep(const SweepConfig& cfg, std::ostream& summary);

void write_record_header(std::ostream& os, int dim);
void write_record(std::ostream& os, const TrialRecord& rec, int dim);

struct ConstantsFit {
    std::vector<double> D;        // D_1 .. D_d
    std::vector<double> D_se;
    std::vector<double> A;        // A_1 .. A_{d-1}
    std::vector<double> A_se;
    double a0_stat = 0.0;         // sum_k (-1)^{k-1} D_k, should be 1
    // residual_rel[k-1][g]: relative residual of grid point g against the fit
    std::vector<std::vector<double>> residual_rel;
    std::vector<double> grid_lambda;
};

/// Least-squares fit of Ehat[C_k]/n against the incomplete-gamma shapes over
/// a Lambda grid (>= 4 distinct values required; records grouped by lambda).
ConstantsFit estimate_constants(std::span<const TrialRecord> records, int dim);

/// Wilson score interval for a binomial proportion at ~95% confidence.
std::pair<double, double> wilson_interval(int64_t successes, int64_t total);

int64_t binomial_coefficient(int n, int k);

}  // namespace cechlab
