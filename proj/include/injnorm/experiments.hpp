#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "injnorm/bounds.hpp"
#include "injnorm/estimator.hpp"
#include "injnorm/metric_space.hpp"
#include "injnorm/models.hpp"

namespace injnorm {

struct RunConfig {
    explicit RunConfig(ModelSpec model_spec) : model(std::move(model_spec)) {}

    ModelSpec model;
    int trials = 200;
    EstimatorConfig estimator;
    std::uint64_t master_seed = 0;
    double bound_constant_C = 1.0;
    std::vector<double> tail_grid{0.5, 1.0, 2.0, 3.0};
    // Concentration tail constants for the bounded/bernoulli models
    // (min(1, C exp(-c t^2 / K^2))); the Gaussian model always uses
    // min(1, 2 exp(-t^2 / (2 b_max^2))).
    double tail_C = 2.0;
    double tail_c = 0.5;
    int workers = 0;  // 0 = available parallelism; never serialized
};

struct TrialRecord {
    int trial_index = 0;
    double norm_estimate = 0.0;
    double witness_value = 0.0;
    // Wall time is kept for live diagnostics only and never serialized,
    // so reruns of the same config are byte-identical.
    double wall_time_seconds = 0.0;
    double symmetrized_estimate = 0.0;  // meaningful only when has_symmetrized
};

struct Verdict {
    bool holds = false;
    double margin = 0.0;
};

struct ExperimentReport {
    explicit ExperimentReport(RunConfig run_config) : config(std::move(run_config)) {}

    RunConfig config;
    std::vector<TrialRecord> trials;

    double mean_estimate = 0.0;
    double mean_square_estimate = 0.0;
    double witness_rms = 0.0;  // sqrt(mean witness_value^2)
    bool has_symmetrized = false;
    double symmetrized_mean = 0.0;  // sqrt(2 pi) * mean symmetrized estimate

    std::vector<double> tail_frequency;  // per tail_grid value
    std::vector<double> tail_bound;
    std::vector<double> tail_allowance;  // 3 binomial standard errors

    BoundBreakdown upper_bound;
    double lower_bound = 0.0;          // max slice statistic
    double witness_rms_ratio = 0.0;    // witness_rms / lower_bound (0 when lower is 0)
    bool witness_side_ok = false;      // witness_rms >= 0.9 * lower_bound (side statistic)

    Verdict upper_holds;
    Verdict lower_holds;
    Verdict concentration_holds;
};

/// Monte Carlo verification run: per trial, sample the model, compute the
/// certificate estimate and the slice witness, then aggregate means, tail
/// frequencies and verdicts. Deterministic for a fixed config regardless
/// of worker count.
ExperimentReport run_monte_carlo(const RunConfig& cfg);

/// The upper bound matching a model: the Gaussian-coefficient bound for
/// the gaussian variant, the variance-slice bound otherwise.
BoundBreakdown upper_bound_for_model(const ModelSpec& model, double constant_C);

/// max_k sigma_k of the model's per-entry standard deviation tensor.
double lower_bound_for_model(const ModelSpec& model);

struct ComparisonReport {
    int trials = 0;
    double mean_sup_z = 0.0;
    double mean_sup_w = 0.0;
    double gap = 0.0;  // mean_sup_z - mean_sup_w
    double sd_sup_z = 0.0;
    double sd_sup_w = 0.0;
    double dudley = 0.0;
    double c_check = 0.0;
    Verdict within_bound;           // gap <= c_check * dudley
    double max_increment_excess = 0.0;  // max over pairs of EZ2 - EW2 - rho^2
};

/// Empirical two-process comparison: samples centered Gaussian processes
/// with the given covariances (PSD factorization), estimates both sup
/// means, and checks the gap against c_check times the Dudley estimate of
/// rho. Errors when a covariance is not PSD or the increment condition
/// E(Z_t - Z_s)^2 <= E(W_t - W_s)^2 + rho(t,s)^2 fails beyond 1e-9.
ComparisonReport comparison_experiment(const FiniteMetricSpace& rho,
                                       const std::vector<std::vector<double>>& cov_z,
                                       const std::vector<std::vector<double>>& cov_w, int trials,
                                       const SampleSeed& seed, double c_check = 10.0, int workers = 0);

struct SweepRow {
    int order = 0;
    int dim = 0;
    int trials = 0;
    double mean_estimate = 0.0;
    double ratio_sqrt_d = 0.0;   // mean_estimate / sqrt(d)
    double upper_bound_c1 = 0.0;
    double lower_bound = 0.0;    // sqrt(d) for all-ones coefficients
};

/// All-ones-coefficient Gaussian scaling table over (d, r) cells, guarded
/// to d^r <= 1e7 per cell.
std::vector<SweepRow> scaling_sweep(std::span<const int> d_list, std::span<const int> r_list, int trials,
                                    std::uint64_t master_seed, const EstimatorConfig& estimator, int workers = 0);

}  // namespace injnorm
