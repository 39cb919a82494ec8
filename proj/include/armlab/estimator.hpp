#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "armlab/events.hpp"
#include "armlab/exponents.hpp"

namespace armlab {

// ----------------------------------------------------------------------------
// Monte Carlo experiments: per-path work fans out across OpenMP threads with
// counter-based per-path seeds; results land in preallocated per-path slots
// and are reduced serially, so output is independent of thread count.  The
// serial runner is the reference implementation used by tests and the
// benchmark.
// ----------------------------------------------------------------------------

int resolve_threads(int requested);  // env SLE_ARMLAB_THREADS > request > omp default

void for_each_path_parallel(long n, int threads, const std::function<void(long)>& fn);
void for_each_path_serial(long n, const std::function<void(long)>& fn);

// ----------------------------------------------------------------------------
// Probability estimation and exponent fits.
// ----------------------------------------------------------------------------

enum class GridVariable { epsilon, ratio };  // ratio = x/(x-y)

struct EstimateConfig {
    EventSpec event;           // template; epsilon (or y) substituted per point
    std::vector<double> grid;  // strictly monotone, log-spaced
    GridVariable grid_var = GridVariable::epsilon;
    double x_over_eps = 0.0;  // > 0 couples x = x_over_eps * epsilon
    long paths = 1000;
    std::uint64_t seed = 0;
    StepPolicy dt;
    EventConstants consts;
    bool importance = false;  // sample under SLE_kappa(nu), reweight by M0/M
    bool coupled = false;     // reuse per-path noise across grid points
    int threads = 0;
    bool serial = false;  // force the serial reference runner

    void validate() const;
};

struct PointStats {
    double grid_value = 0.0;
    long trials = 0;
    long hits = 0;
    long horizon_failures = 0;
    double p_hat = 0.0;
    double se = 0.0;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double se_slope = 0.0;
    double r_squared = 0.0;
    int excluded = 0;
    bool valid = false;
};

struct ExperimentResult {
    std::vector<PointStats> points;
    FitResult fit;
    double predicted = 0.0;
    long clamped_steps = 0;
};

// Weighted least squares on (log g, log v) with delta-method weights
// w = (v/se)^2; points with v <= 0 are excluded.  Needs >= 3 usable points.
FitResult fit_loglog(const std::vector<PointStats>& pts);

// Predicted slope for the configured grid variable, from the exponent table.
double predicted_event_exponent(const EstimateConfig& cfg);

ExperimentResult estimate_probability(const EstimateConfig& cfg);

// ----------------------------------------------------------------------------
// Moment-scaling experiments.
// ----------------------------------------------------------------------------

enum class MomentKind { lemma24, lemma25, prop31, prop42 };

struct MomentConfig {
    MomentKind kind = MomentKind::prop31;
    double kappa = 6.0;
    double nu = 0.0;      // force-point weight for the lemma kinds
    double lambda = 0.0;  // moment exponents
    double b = 0.0;
    double x = 1.0;              // mark/force point (prop kinds; lemma25 fixes x)
    double dist_frac = 0.0;      // lemma25 event F: Upsilon_sigma >= dist_frac * x
    std::vector<double> grid;    // eps (props) or x-y (lemmas)
    long paths = 1000;
    std::uint64_t seed = 0;
    StepPolicy dt;
    double horizon_mult = 50.0;
    int threads = 0;

    void validate() const;
    double predicted_slope() const;
};

ExperimentResult moment_scaling_test(const MomentConfig& cfg);

// ----------------------------------------------------------------------------
// Martingale and density checks.
// ----------------------------------------------------------------------------

struct DriftTestResult {
    double mean = 0.0;   // mean of M_tau / M_0
    double se = 0.0;
    double z = 0.0;      // (mean - 1)/se
    long paths = 0;
    long frozen_early = 0;  // stopped by the safe-gap rule before the horizon
};

// Plain SLE_kappa paths; M evaluated at min(horizon, first time any tracked
// force gap < 10 * delta_hit * scale).
DriftTestResult martingale_drift_test(const MartingaleSpec& spec, long paths, double horizon,
                                      std::uint64_t seed, const StepPolicy& pol,
                                      int threads = 0);

struct GirsanovResult {
    double p_direct = 0.0, se_direct = 0.0;
    double p_weighted = 0.0, se_weighted = 0.0;
    double z = 0.0;  // discrepancy over combined se
};

// F = {conformal-radius proxy of x drops below frac * x before the stop}.
GirsanovResult girsanov_check(double kappa, double rho, double x, double frac, long paths,
                              double horizon, std::uint64_t seed, const StepPolicy& pol,
                              int threads = 0);

struct DensityTestResult {
    double ks = 0.0;
    double mean = 0.0;
    double se_mean = 0.0;
    double beta_a = 0.0, beta_b = 0.0;
    long samples = 0;
};

// Time-changed J-diffusion dJ = (k-nu-4 - (k-nu-2) J) ds + sqrt(k J(1-J)) dB
// from J0 = 1; KS distance against Beta(2(k-nu-4)/k, 4/k) after burn-in.
// Requires 8 + 2 nu < 2 kappa.
DensityTestResult invariant_density_test(double kappa, double nu, long n_samples,
                                         double burn_in, std::uint64_t seed,
                                         double dt = 1e-4, double stride = 0.5);

// ----------------------------------------------------------------------------
// Small statistics toolbox.
// ----------------------------------------------------------------------------

double betainc_regularized(double a, double b, double x);  // I_x(a,b)
double beta_cdf(double a, double b, double x);
double gamma_p(double a, double x);  // regularized lower incomplete gamma
double ks_statistic_sorted(const std::vector<double>& sorted,
                           const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double normal_cdf(double z);

}  // namespace armlab
