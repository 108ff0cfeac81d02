#include "injnorm/experiments.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "injnorm/errors.hpp"
#include "injnorm/log.hpp"
#include "injnorm/parallel.hpp"

namespace injnorm {

BoundBreakdown upper_bound_for_model(const ModelSpec& model, double constant_C) {
    if (model.kind() == ModelKind::gaussian)
        return tensor_upper_bound(coeff_stats(model.tensor()), model.order(), model.dim(), constant_C);
    return bounded_model_upper_bound(coeff_stats(model.stddev_tensor()), model.order(), model.dim(),
                                     model.bound_K(), constant_C);
}

double lower_bound_for_model(const ModelSpec& model) {
    return slice_lower_bound(coeff_stats(model.stddev_tensor()));
}

ExperimentReport run_monte_carlo(const RunConfig& cfg) {
    if (cfg.trials < 1) throw InputError("trials must be >= 1");
    for (std::size_t i = 0; i + 1 < cfg.tail_grid.size(); ++i)
        if (!(cfg.tail_grid[i] < cfg.tail_grid[i + 1]))
            throw InputError("tail grid must be increasing");
    for (const double t : cfg.tail_grid)
        if (t < 0.0) throw InputError("tail grid values must be nonnegative");

    ExperimentReport report(cfg);
    report.trials.resize(static_cast<std::size_t>(cfg.trials));
    report.has_symmetrized = cfg.model.kind() != ModelKind::gaussian;

    const bool symmetrized = report.has_symmetrized;
    parallel_for(cfg.trials, cfg.workers, [&](int i) {
        const auto start = std::chrono::steady_clock::now();
        const SampleSeed seed{cfg.master_seed, static_cast<std::uint64_t>(i)};
        const TensorSample sample = sample_model(cfg.model, seed);
        const EstimateResult est = alt_max_estimate(sample, cfg.estimator);
        TrialRecord rec;
        rec.trial_index = i;
        rec.norm_estimate = est.value;
        rec.witness_value = slice_witness(sample, cfg.model.tensor()).value;
        if (symmetrized) {
            const TensorSample sym = symmetrize_sample(sample, seed);
            rec.symmetrized_estimate = alt_max_estimate(sym, cfg.estimator).value;
        }
        rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.trials[static_cast<std::size_t>(i)] = rec;
    });

    double sum = 0.0, sum_sq = 0.0, witness_sq = 0.0, sym_sum = 0.0;
    for (const TrialRecord& rec : report.trials) {
        sum += rec.norm_estimate;
        sum_sq += rec.norm_estimate * rec.norm_estimate;
        witness_sq += rec.witness_value * rec.witness_value;
        sym_sum += rec.symmetrized_estimate;
    }
    const double n = static_cast<double>(cfg.trials);
    report.mean_estimate = sum / n;
    report.mean_square_estimate = sum_sq / n;
    report.witness_rms = std::sqrt(witness_sq / n);
    if (symmetrized) report.symmetrized_mean = std::sqrt(2.0 * std::numbers::pi) * sym_sum / n;

    // Bounds and verdicts.
    report.upper_bound = upper_bound_for_model(cfg.model, cfg.bound_constant_C);
    report.lower_bound = lower_bound_for_model(cfg.model);
    report.upper_holds.margin = report.upper_bound.total - report.mean_estimate;
    report.upper_holds.holds = report.upper_holds.margin >= 0.0;

    double chain_margin = std::numeric_limits<double>::infinity();
    for (const TrialRecord& rec : report.trials)
        chain_margin = std::min(chain_margin, rec.norm_estimate - rec.witness_value);
    report.lower_holds.margin = chain_margin;
    report.lower_holds.holds = chain_margin >= -1e-9;
    report.witness_rms_ratio = report.lower_bound > 0.0 ? report.witness_rms / report.lower_bound : 0.0;
    report.witness_side_ok = report.witness_rms >= 0.9 * report.lower_bound;

    // Empirical tails around the empirical mean; the unknown true mean is
    // absorbed into the 3-standard-error allowance.
    const double b_max = cfg.model.kind() == ModelKind::gaussian ? coeff_stats(cfg.model.tensor()).b_max
                                                                 : cfg.model.bound_K();
    double conc_margin = std::numeric_limits<double>::infinity();
    bool conc_holds = true;
    for (const double t : cfg.tail_grid) {
        int count = 0;
        for (const TrialRecord& rec : report.trials)
            if (std::abs(rec.norm_estimate - report.mean_estimate) >= t) ++count;
        const double freq = static_cast<double>(count) / n;
        double bound = 1.0;
        if (b_max > 0.0)
            bound = cfg.model.kind() == ModelKind::gaussian
                        ? gaussian_tail_bound(b_max, t)
                        : subgaussian_tail_bound(b_max, t, cfg.tail_C, cfg.tail_c);
        const double allowance = 3.0 * std::sqrt(std::max(freq * (1.0 - freq), 0.0) / n);
        report.tail_frequency.push_back(freq);
        report.tail_bound.push_back(bound);
        report.tail_allowance.push_back(allowance);
        const double margin = bound + allowance - freq;
        conc_margin = std::min(conc_margin, margin);
        if (margin < 0.0) conc_holds = false;
    }
    report.concentration_holds.holds = conc_holds;
    report.concentration_holds.margin = cfg.tail_grid.empty() ? 0.0 : conc_margin;

    INJNORM_LOG_INFO("monte carlo run: %d trials, mean estimate %.6g, upper margin %.6g", cfg.trials,
                     report.mean_estimate, report.upper_holds.margin);
    return report;
}

namespace {

// PSD square root via eigenfactorization; eigenvalues below
// -1e-9 * max(1, lambda_max) reject the matrix, small negatives clamp to 0.
Eigen::MatrixXd psd_factor(const std::vector<std::vector<double>>& cov, const char* name) {
    const int n = static_cast<int>(cov.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(cov[static_cast<std::size_t>(i)].size()) != n)
            throw DimensionError(std::string(name) + " covariance matrix is not square");
        for (int j = 0; j < n; ++j) m(i, j) = cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw InputError(std::string(name) + " covariance matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw InputError(std::string(name) + " covariance eigenfactorization failed");
    const double lambda_max = std::max(1.0, solver.eigenvalues().maxCoeff());
    if (solver.eigenvalues().minCoeff() < -1e-9 * lambda_max)
        throw InputError(std::string(name) + " covariance matrix is not positive semidefinite");
    Eigen::VectorXd scale = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * scale.asDiagonal();
}

}  // namespace

ComparisonReport comparison_experiment(const FiniteMetricSpace& rho,
                                       const std::vector<std::vector<double>>& cov_z,
                                       const std::vector<std::vector<double>>& cov_w, int trials,
                                       const SampleSeed& seed, double c_check, int workers) {
    const int n = rho.size();
    if (static_cast<int>(cov_z.size()) != n || static_cast<int>(cov_w.size()) != n)
        throw DimensionError("covariance matrices must match the metric space size");
    if (trials < 1) throw InputError("trials must be >= 1");

    const Eigen::MatrixXd fz = psd_factor(cov_z, "Z");
    const Eigen::MatrixXd fw = psd_factor(cov_w, "W");

    // Increment condition E(Z_t - Z_s)^2 <= E(W_t - W_s)^2 + rho(t, s)^2.
    double max_excess = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto inc = [&](const std::vector<std::vector<double>>& c) {
                return c[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] +
                       c[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] -
                       2.0 * c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            };
            max_excess = std::max(max_excess, inc(cov_z) - inc(cov_w) - rho.dist(i, j) * rho.dist(i, j));
        }
    if (max_excess > 1e-9)
        throw InputError("increment condition violated by " + std::to_string(max_excess));

    std::vector<double> sup_z(static_cast<std::size_t>(trials), 0.0);
    std::vector<double> sup_w(static_cast<std::size_t>(trials), 0.0);
    parallel_for(trials, workers, [&](int trial) {
        RngStream base = RngStream(seed).fork(stream_tag::process).fork(static_cast<std::uint64_t>(trial));
        Eigen::VectorXd gz(n), gw(n);
        for (int i = 0; i < n; ++i) gz(i) = base.gaussian();
        for (int i = 0; i < n; ++i) gw(i) = base.gaussian();
        sup_z[static_cast<std::size_t>(trial)] = (fz * gz).maxCoeff();
        sup_w[static_cast<std::size_t>(trial)] = (fw * gw).maxCoeff();
    });

    ComparisonReport rep;
    rep.trials = trials;
    rep.c_check = c_check;
    rep.max_increment_excess = max_excess;
    double mz = 0.0, mw = 0.0;
    for (int i = 0; i < trials; ++i) {
        mz += sup_z[static_cast<std::size_t>(i)];
        mw += sup_w[static_cast<std::size_t>(i)];
    }
    mz /= trials;
    mw /= trials;
    double vz = 0.0, vw = 0.0;
    for (int i = 0; i < trials; ++i) {
        vz += (sup_z[static_cast<std::size_t>(i)] - mz) * (sup_z[static_cast<std::size_t>(i)] - mz);
        vw += (sup_w[static_cast<std::size_t>(i)] - mw) * (sup_w[static_cast<std::size_t>(i)] - mw);
    }
    rep.mean_sup_z = mz;
    rep.mean_sup_w = mw;
    rep.gap = mz - mw;
    rep.sd_sup_z = trials > 1 ? std::sqrt(vz / (trials - 1)) : 0.0;
    rep.sd_sup_w = trials > 1 ? std::sqrt(vw / (trials - 1)) : 0.0;
    rep.dudley = dudley_estimate(rho, dyadic_eps_grid(std::max(rho.diameter(), 1e-12)));
    rep.within_bound.margin = c_check * rep.dudley - rep.gap;
    rep.within_bound.holds = rep.within_bound.margin >= 0.0;
    return rep;
}

std::vector<SweepRow> scaling_sweep(std::span<const int> d_list, std::span<const int> r_list, int trials,
                                    std::uint64_t master_seed, const EstimatorConfig& estimator, int workers) {
    std::vector<SweepRow> rows;
    for (const int r : r_list)
        for (const int d : d_list) {
            const std::int64_t size = checked_pow(d, r);
            if (size > 10'000'000)
                throw GuardError("sweep cell r=" + std::to_string(r) + ", d=" + std::to_string(d) +
                                 " exceeds the 1e7-entry guard");
            RunConfig cfg(ModelSpec::gaussian(CoeffTensor::constant(r, d, 1.0)));
            cfg.trials = trials;
            cfg.estimator = estimator;
            cfg.master_seed = RngStream::mix(master_seed ^ (static_cast<std::uint64_t>(r) << 32 |
                                                            static_cast<std::uint64_t>(d)));
            cfg.workers = workers;
            const ExperimentReport rep = run_monte_carlo(cfg);
            SweepRow row;
            row.order = r;
            row.dim = d;
            row.trials = trials;
            row.mean_estimate = rep.mean_estimate;
            row.ratio_sqrt_d = rep.mean_estimate / std::sqrt(static_cast<double>(d));
            row.upper_bound_c1 = upper_bound_for_model(cfg.model, 1.0).total;
            row.lower_bound = rep.lower_bound;
            rows.push_back(row);
            INJNORM_LOG_INFO("sweep cell r=%d d=%d: mean %.6g, ratio %.6g", r, d, row.mean_estimate,
                             row.ratio_sqrt_d);
        }
    return rows;
}

}  // namespace injnorm
