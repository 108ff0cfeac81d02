// Command-line surface for the injective-norm toolkit: bound evaluation,
// Monte Carlo estimates and verification verdicts, covering/Dudley/Maurey
// demos, scaling sweeps, and property sweeps for the chaining machinery.
//
// Exit codes: 0 success, 1 failed verification verdict, 2 usage or input
// errors. All randomness is controlled by --seed. INJNORM_LOG
// (error|info|debug) controls stderr verbosity.

#include <CLI11.hpp>
#include <array>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "injnorm/bounds.hpp"
#include "injnorm/chaining.hpp"
#include "injnorm/errors.hpp"
#include "injnorm/estimator.hpp"
#include "injnorm/experiments.hpp"
#include "injnorm/log.hpp"
#include "injnorm/metric_space.hpp"
#include "injnorm/models.hpp"
#include "injnorm/serialize.hpp"

namespace {

using namespace injnorm;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerdictFailed = 1;
constexpr int kExitUsage = 2;

// Option values before precedence resolution. CLI flags override the
// optional --config JSON document, which overrides defaults.
struct RawOptions {
    std::string input;
    std::string out;
    std::string config_path;
    std::string model = "gaussian";
    std::uint64_t seed = 0;
    int trials = 200;
    int starts = 0;
    double constant = 1.0;
    double epsilon = 0.25;
    double K = 1.0;
    double resolution = 0.05;
    int workers = 0;
    int sweep_count = 500;
};

struct OptionSources {
    json config;  // parsed --config document (empty object when absent)
    CLI::App* cmd = nullptr;
};

// Flag wins when given on the command line; otherwise the config file
// value; otherwise the built-in default already present in `value`.
template <typename T>
void resolve(const OptionSources& src, const char* flag, const char* config_key, T& value) {
    if (src.cmd->count(flag) > 0) return;
    if (src.config.contains(config_key)) value = src.config.at(config_key).get<T>();
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    const json j = json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InputError("config file must hold a JSON object: " + path);
    return j;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::fputs(content.c_str(), stdout);
        std::fputc('\n', stdout);
    } else {
        write_text_file(out_path, content);
    }
}

ModelSpec build_model(const RawOptions& opt) {
    const CoeffTensor tensor = load_tensor(opt.input);
    switch (model_kind_from_name(opt.model)) {
        case ModelKind::gaussian: return ModelSpec::gaussian(tensor);
        case ModelKind::bounded: return ModelSpec::bounded(opt.K, tensor);
        case ModelKind::bernoulli: return ModelSpec::bernoulli(tensor);
    }
    throw InputError("unknown model variant");
}

RunConfig build_run_config(const RawOptions& opt, const json& config) {
    RunConfig cfg(build_model(opt));
    cfg.trials = opt.trials;
    cfg.estimator.num_starts = opt.starts;
    cfg.master_seed = opt.seed;
    cfg.bound_constant_C = opt.constant;
    cfg.workers = opt.workers;
    if (config.contains("tail_grid")) cfg.tail_grid = config.at("tail_grid").get<std::vector<double>>();
    if (config.contains("tail_C")) cfg.tail_C = config.at("tail_C").get<double>();
    if (config.contains("tail_c")) cfg.tail_c = config.at("tail_c").get<double>();
    if (config.contains("max_iterations")) cfg.estimator.max_iterations = config.at("max_iterations").get<int>();
    if (config.contains("witness_starts"))
        cfg.estimator.include_slice_witness_starts = config.at("witness_starts").get<bool>();
    return cfg;
}

int run_bound(const RawOptions& opt) {
    const CoeffTensor b = load_tensor(opt.input);
    const SliceStats stats = coeff_stats(b);

    JsonWriter w;
    w.begin_object();
    w.kv("r", b.order());
    w.kv("d", b.dim());
    w.key("gaussian_upper");
    write_bound(w, tensor_upper_bound(stats, b.order(), b.dim(), opt.constant));
    w.kv("slice_lower", slice_lower_bound(stats));
    if (b.order() == 2) {
        w.key("matrix_epsilon_upper");
        write_bound(w, bvh_matrix_bound(stats, b.dim(), opt.epsilon));
        const LatalaTerms lat = latala_matrix_terms(b);
        w.key("latala_terms");
        w.begin_object();
        w.kv("row", lat.row);
        w.kv("col", lat.col);
        w.kv("fourth", lat.fourth);
        w.end_object();
    }
    w.key("stats");
    w.begin_object();
    w.key("sigma");
    w.begin_array();
    for (const double s : stats.sigma) w.value(s);
    w.end_array();
    w.kv("b_max", stats.b_max);
    w.kv("frobenius", stats.frobenius);
    w.end_object();
    w.end_object();
    emit(opt.out, w.take());
    return kExitOk;
}

int run_estimate(const RawOptions& opt, const json& config, bool gate_verdicts) {
    const ExperimentReport report = run_monte_carlo(build_run_config(opt, config));
    emit(opt.out, report_to_json(report));
    if (gate_verdicts) {
        const bool all = report.upper_holds.holds && report.lower_holds.holds &&
                         report.concentration_holds.holds;
        std::fprintf(stderr, "upper_holds=%s margin=%.6g\n", report.upper_holds.holds ? "true" : "false",
                     report.upper_holds.margin);
        std::fprintf(stderr, "lower_holds=%s margin=%.6g\n", report.lower_holds.holds ? "true" : "false",
                     report.lower_holds.margin);
        std::fprintf(stderr, "concentration_holds=%s margin=%.6g\n",
                     report.concentration_holds.holds ? "true" : "false", report.concentration_holds.margin);
        if (!all) return kExitVerdictFailed;
    }
    return kExitOk;
}

// Covering numbers, the Dudley estimate, and a Maurey sparsification demo.
// A metric-space JSON input (field "dist") is used as-is; a tensor input
// is sampled under its axis-1 profile metric, and the Maurey demo runs on
// the tensor's normalized squared fibers (the convex hull whose square
// roots the profile map ranges over).
int run_cover(const RawOptions& opt, const json& config) {
    const std::string text = read_text_file(opt.input);
    const json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) throw InputError("malformed JSON input: " + opt.input);

    JsonWriter w;
    w.begin_object();
    if (parsed.is_object() && parsed.contains("dist")) {
        const FiniteMetricSpace space = space_from_json_text(text);
        if (space.size() <= 512) space.validate_metric();
        const GreedyCover cover = greedy_cover(space, opt.epsilon);
        w.kv("n", space.size());
        w.kv("epsilon", opt.epsilon);
        w.kv("cover_size", cover.size());
        w.key("cover_indices");
        w.begin_array();
        for (const int c : cover.centers) w.value(c);
        w.end_array();
        w.kv("dudley", dudley_estimate(space, dyadic_eps_grid(std::max(space.diameter(), 1e-12))));
    } else {
        const CoeffTensor b = tensor_from_json_text(text);
        const int axis = config.contains("axis") ? config.at("axis").get<int>() : 1;
        const FiniteMetricSpace space =
            profile_sample_space(b, axis, opt.trials, SampleSeed{opt.seed, 0});
        const GreedyCover cover = greedy_cover(space, opt.epsilon);
        w.kv("n", space.size());
        w.kv("axis", axis);
        w.kv("epsilon", opt.epsilon);
        w.kv("cover_size", cover.size());
        w.kv("dudley", dudley_estimate(space, dyadic_eps_grid(std::max(space.diameter(), 1e-12))));
        if (b.order() <= 3 && b.dim() <= 4)
            w.kv("grid_oracle_value", grid_oracle(b, opt.resolution));

        // Maurey demo on the tensor's normalized squared fibers.
        const double b_max = b.max_abs_entry();
        if (b_max > 0.0) {
            const std::vector<double> sq = axis_square_sums(b, axis);
            std::vector<std::vector<double>> S;
            for (int i = 1; i <= b.dim(); ++i) {
                std::vector<double> point(sq.size());
                std::vector<int> full(static_cast<std::size_t>(b.order()), 1);
                for (std::size_t t = 0; t < point.size(); ++t) {
                    const std::vector<int> off = decode_off_axis(b.order(), b.dim(), static_cast<std::int64_t>(t));
                    std::size_t src = 0;
                    for (int k = 1; k <= b.order(); ++k)
                        full[static_cast<std::size_t>(k - 1)] = (k == axis) ? i : off[src++];
                    const double v = b.at(full);
                    point[t] = v * v / (b_max * b_max);
                }
                S.push_back(std::move(point));
            }
            S.emplace_back(sq.size(), 0.0);
            RngStream rng = RngStream(SampleSeed{opt.seed, 1}).fork(stream_tag::sample);
            std::vector<double> weights(S.size());
            double total = 0.0;
            for (auto& wt : weights) {
                wt = rng.uniform() + 1e-3;
                total += wt;
            }
            for (auto& wt : weights) wt /= total;
            std::vector<double> z(sq.size(), 0.0);
            for (std::size_t s = 0; s < S.size(); ++s)
                for (std::size_t t = 0; t < z.size(); ++t) z[t] += weights[s] * S[s][t];
            const MaureyResult maurey = maurey_sparsify(S, weights, z, opt.epsilon, SampleSeed{opt.seed, 2});
            w.key("maurey");
            w.begin_object();
            w.kv("d0", static_cast<std::int64_t>(z.size()));
            w.kv("set_size", static_cast<std::int64_t>(S.size()));
            w.kv("sample_count", maurey.sample_count);
            w.kv("attempts", maurey.attempts);
            w.end_object();
        }
    }
    w.end_object();
    emit(opt.out, w.take());
    return kExitOk;
}

int run_sweep(const RawOptions& opt, const json& config) {
    std::vector<int> d_list{5, 10, 25, 50};
    std::vector<int> r_list{1, 2, 3};
    if (config.contains("d_list")) d_list = config.at("d_list").get<std::vector<int>>();
    if (config.contains("r_list")) r_list = config.at("r_list").get<std::vector<int>>();
    EstimatorConfig est;
    est.num_starts = opt.starts;
    const std::vector<SweepRow> rows = scaling_sweep(d_list, r_list, opt.trials, opt.seed, est, opt.workers);
    emit(opt.out, sweep_to_csv(rows));
    return kExitOk;
}

// Property sweeps: Lipschitz residuals of the stddev and diagonal maps,
// the square-root gap implication on a grid, and an ultrametric
// construction + embedding round trip.
int run_lemmas(const RawOptions& opt) {
    RngStream rng(opt.seed, 0);
    double min_stddev_residual = std::numeric_limits<double>::infinity();
    double min_diag_residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.sweep_count; ++i) {
        const int r = 1 + static_cast<int>(rng.next_u64() % 3);
        const int d = 1 + static_cast<int>(rng.next_u64() % 5);
        std::vector<double> entries(static_cast<std::size_t>(checked_pow(d, r)));
        for (auto& e : entries) e = 2.0 * rng.gaussian();
        const CoeffTensor b(r, d, entries);
        std::vector<std::vector<double>> xs, ys;
        for (int k = 0; k < r; ++k) {
            xs.push_back(rng.unit_vector(d));
            ys.push_back(rng.unit_vector(d));
        }
        const UnitVectorTuple xt(xs), yt(ys);
        min_stddev_residual = std::min(min_stddev_residual, stddev_lipschitz_residual(b, xt, yt));
        if (r >= 2) {
            const int axis = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(r));
            min_diag_residual =
                std::min(min_diag_residual, diag_lipschitz_residual(b, axis, xt.drop_axis(axis), yt.drop_axis(axis)));
        }
    }

    bool gap_all_true = true;
    for (int ia = 0; ia <= 100 && gap_all_true; ++ia)
        for (int ib = 0; ib <= 100 && gap_all_true; ++ib)
            for (int it = 0; it <= 30; ++it)
                if (!sqrt_gap_holds(0.1 * ia, 0.1 * ib, 0.1 * it)) {
                    gap_all_true = false;
                    break;
                }

    // Ultrametric + embedding round trip on a seeded random point cloud.
    bool ultra_ok = true;
    {
        const int n = 32;
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < n; ++i) {
            std::vector<double> p(4);
            for (auto& v : p) v = rng.gaussian();
            pts.push_back(std::move(p));
        }
        std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double s = 0.0;
                for (int c = 0; c < 4; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
                dist[i][j] = dist[j][i] = std::sqrt(s);
            }
        const FiniteMetricSpace space(dist);
        const AdmissibleResult adm = build_admissible_sequence(space);
        const UltrametricResult ultra = ultrametric_construct(space, adm.tree);
        for (int i = 0; i < n && ultra_ok; ++i)
            for (int j = 0; j < n; ++j)
                if (ultra.dist_hat[i][j] < space.dist(i, j) - 1e-9) {
                    ultra_ok = false;
                    break;
                }
        const FiniteMetricSpace hat(ultra.dist_hat);
        const auto embedded = hilbert_embed(hat);
        for (int i = 0; i < n && ultra_ok; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t c = 0; c < embedded[i].size(); ++c)
                    s += (embedded[i][c] - embedded[j][c]) * (embedded[i][c] - embedded[j][c]);
                if (std::abs(std::sqrt(s) - hat.dist(i, j)) > 1e-8) {
                    ultra_ok = false;
                    break;
                }
            }
    }

    if (!std::isfinite(min_stddev_residual)) min_stddev_residual = 0.0;
    if (!std::isfinite(min_diag_residual)) min_diag_residual = 0.0;
    std::printf("stddev_lipschitz_min_residual %s\n", format_double17(min_stddev_residual).c_str());
    std::printf("diag_lipschitz_min_residual %s\n", format_double17(min_diag_residual).c_str());
    std::printf("sqrt_gap_grid_all_true %s\n", gap_all_true ? "true" : "false");
    std::printf("ultrametric_embedding_ok %s\n", ultra_ok ? "true" : "false");

    const bool pass = min_stddev_residual >= -1e-10 && min_diag_residual >= -1e-10 && gap_all_true && ultra_ok;
    return pass ? kExitOk : kExitVerdictFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"injective norms of random tensors: bounds, certificates, and chaining experiments"};
    app.require_subcommand(1);

    // Each subcommand owns its option storage so identically named flags
    // can carry different defaults.
    std::array<RawOptions, 6> opts;
    RawOptions& bound_opt = opts[0];
    RawOptions& estimate_opt = opts[1];
    RawOptions& verify_opt = opts[2];
    RawOptions& cover_opt = opts[3];
    RawOptions& sweep_opt = opts[4];
    RawOptions& lemmas_opt = opts[5];

    auto add_common = [](CLI::App* cmd, RawOptions& opt, bool needs_seed) {
        cmd->add_option("--out", opt.out, "Output file path (stdout when omitted)");
        cmd->add_option("--config", opt.config_path, "JSON config file (flags override it)");
        cmd->add_option("--workers", opt.workers, "Worker threads (0 = available parallelism)")
            ->capture_default_str();
        auto* seed = cmd->add_option("--seed", opt.seed, "Master seed for all randomness");
        if (needs_seed)
            seed->required();
        else
            seed->capture_default_str();
        return cmd;
    };

    CLI::App* bound = app.add_subcommand("bound", "Evaluate the closed-form bounds for a tensor");
    add_common(bound, bound_opt, false);
    bound->add_option("--input", bound_opt.input, "Coefficient tensor JSON file")->required();
    bound->add_option("--constant", bound_opt.constant, "Universal constant C for the upper bounds")
        ->capture_default_str();
    bound->add_option("--epsilon", bound_opt.epsilon, "Epsilon for the matrix bound (r = 2)")
        ->capture_default_str();

    auto add_estimate_flags = [](CLI::App* cmd, RawOptions& opt) {
        cmd->add_option("--input", opt.input, "Coefficient tensor JSON file")->required();
        cmd->add_option("--model", opt.model, "Model variant: gaussian, bounded or bernoulli")
            ->capture_default_str();
        cmd->add_option("--K", opt.K, "Range bound K for the bounded model")->capture_default_str();
        cmd->add_option("--trials", opt.trials, "Monte Carlo trials")->capture_default_str();
        cmd->add_option("--starts", opt.starts, "Estimator starts (0 = automatic)")->capture_default_str();
        cmd->add_option("--constant", opt.constant, "Universal constant C for the upper bound")
            ->capture_default_str();
    };
    CLI::App* estimate = app.add_subcommand("estimate", "Monte Carlo norm estimates and a full report");
    add_common(estimate, estimate_opt, true);
    add_estimate_flags(estimate, estimate_opt);
    CLI::App* verify = app.add_subcommand("verify", "Run estimates and gate the exit code on the verdicts");
    add_common(verify, verify_opt, true);
    add_estimate_flags(verify, verify_opt);

    CLI::App* cover = app.add_subcommand("cover", "Covering numbers, Dudley estimate, Maurey demo");
    add_common(cover, cover_opt, true);
    cover_opt.epsilon = 0.3;
    cover_opt.trials = 256;
    cover->add_option("--input", cover_opt.input, "Metric space or tensor JSON file")->required();
    cover->add_option("--epsilon", cover_opt.epsilon, "Cover radius / sparsifier accuracy")
        ->capture_default_str();
    cover->add_option("--trials", cover_opt.trials, "Sample points for tensor inputs")->capture_default_str();
    cover->add_option("--resolution", cover_opt.resolution, "Grid oracle resolution for small tensor inputs")
        ->capture_default_str();

    CLI::App* sweep = app.add_subcommand("sweep", "Scaling table over (d, r) cells as CSV");
    add_common(sweep, sweep_opt, true);
    sweep_opt.trials = 50;
    sweep->add_option("--trials", sweep_opt.trials, "Trials per cell")->capture_default_str();
    sweep->add_option("--starts", sweep_opt.starts, "Estimator starts (0 = automatic)")->capture_default_str();

    CLI::App* lemmas = app.add_subcommand("lemmas", "Property sweeps for the chaining machinery");
    add_common(lemmas, lemmas_opt, true);
    lemmas->add_option("--sweep,--trials", lemmas_opt.sweep_count, "Instances per property sweep")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        RawOptions& opt = opts[static_cast<std::size_t>(
            active == bound      ? 0
            : active == estimate ? 1
            : active == verify   ? 2
            : active == cover    ? 3
            : active == sweep    ? 4
                                 : 5)];
        const json config = load_config(opt.config_path);
        OptionSources src{config, active};
        resolve(src, "--seed", "seed", opt.seed);
        resolve(src, "--workers", "workers", opt.workers);
        if (active->get_option_no_throw("--trials") != nullptr) resolve(src, "--trials", "trials", opt.trials);
        if (active->get_option_no_throw("--starts") != nullptr) resolve(src, "--starts", "starts", opt.starts);
        if (active->get_option_no_throw("--constant") != nullptr)
            resolve(src, "--constant", "constant", opt.constant);
        if (active->get_option_no_throw("--epsilon") != nullptr)
            resolve(src, "--epsilon", "epsilon", opt.epsilon);
        if (active->get_option_no_throw("--model") != nullptr) resolve(src, "--model", "model", opt.model);
        if (active->get_option_no_throw("--K") != nullptr) resolve(src, "--K", "K", opt.K);
        if (active->get_option_no_throw("--resolution") != nullptr)
            resolve(src, "--resolution", "resolution", opt.resolution);
        if (active == lemmas) resolve(src, "--sweep", "sweep", opt.sweep_count);

        if (active == bound) return run_bound(opt);
        if (active == estimate) return run_estimate(opt, config, false);
        if (active == verify) return run_estimate(opt, config, true);
        if (active == cover) return run_cover(opt, config);
        if (active == sweep) return run_sweep(opt, config);
        if (active == lemmas) return run_lemmas(opt);
        return kExitUsage;
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}
