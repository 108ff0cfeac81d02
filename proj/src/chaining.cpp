#include "injnorm/chaining.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "injnorm/errors.hpp"

namespace injnorm {

namespace {

void check_unit_ball(std::span<const double> x, int dim) {
    if (static_cast<int>(x.size()) != dim)
        throw DimensionError("vector length " + std::to_string(x.size()) + " != d = " + std::to_string(dim));
    double s = 0.0;
    for (const double v : x) s += v * v;
    if (std::sqrt(s) > 1.0 + 1e-12) throw DimensionError("vector lies outside the unit ball");
}

}  // namespace

FiberProfile fiber_profile(const CoeffTensor& b, int axis, std::span<const double> x) {
    if (axis < 1 || axis > b.order())
        throw DimensionError("axis " + std::to_string(axis) + " outside [1, " + std::to_string(b.order()) + "]");
    check_unit_ball(x, b.dim());
    std::vector<double> weights(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) weights[i] = x[i] * x[i];
    std::vector<double> values = axis_square_sums(b, axis, weights);
    for (auto& v : values) v = std::sqrt(std::max(0.0, v));
    return FiberProfile{axis, std::move(values)};
}

double profile_distance(const CoeffTensor& b, int axis, std::span<const double> x, std::span<const double> y) {
    const FiberProfile px = fiber_profile(b, axis, x);
    const FiberProfile py = fiber_profile(b, axis, y);
    double m = 0.0;
    for (std::size_t i = 0; i < px.values.size(); ++i) m = std::max(m, std::abs(px.values[i] - py.values[i]));
    return m;
}

double profile_distance_sum(const CoeffTensor& b, const UnitVectorTuple& xs, const UnitVectorTuple& ys) {
    if (xs.order() != b.order() || ys.order() != b.order())
        throw DimensionError("tuple order does not match the tensor");
    double s = 0.0;
    for (int k = 1; k <= b.order(); ++k) s += profile_distance(b, k, xs.vec(k), ys.vec(k));
    return s;
}

double stddev_lipschitz_residual(const CoeffTensor& b, const UnitVectorTuple& xs, const UnitVectorTuple& ys) {
    return profile_distance_sum(b, xs, ys) - (rank1_stddev(b, xs) - rank1_stddev(b, ys));
}

double diag_lipschitz_residual(const CoeffTensor& b, int axis,
                               const std::vector<std::vector<double>>& xs_off,
                               const std::vector<std::vector<double>>& ys_off) {
    if (static_cast<int>(xs_off.size()) != b.order() - 1 || static_cast<int>(ys_off.size()) != b.order() - 1)
        throw DimensionError("expected " + std::to_string(b.order() - 1) + " off-axis vectors");
    const DiagonalSliceMatrix dx = diag_slice_matrix(b, axis, xs_off);
    const DiagonalSliceMatrix dy = diag_slice_matrix(b, axis, ys_off);
    double diff = 0.0;
    for (std::size_t i = 0; i < dx.diag.size(); ++i) diff = std::max(diff, std::abs(dx.diag[i] - dy.diag[i]));

    double sum = 0.0;
    std::size_t src = 0;
    for (int j = 1; j <= b.order(); ++j) {
        if (j == axis) continue;
        sum += profile_distance(b, j, xs_off[src], ys_off[src]);
        ++src;
    }
    return sum - diff;
}

bool sqrt_gap_holds(double alpha, double beta, double t0) {
    if (alpha < 0.0 || beta < 0.0 || t0 < 0.0) throw InputError("sqrt gap check requires nonnegative inputs");
    if (std::abs(std::sqrt(alpha) - std::sqrt(beta)) < t0) return true;  // premise fails
    return std::abs(alpha - beta) >= std::max(t0 * std::sqrt(beta), t0 * t0);
}

int maurey_sample_count(int d0, double epsilon) {
    if (d0 < 2) throw InputError("ambient dimension must be >= 2");
    if (!(epsilon > 0.0)) throw InputError("epsilon must be > 0");
    return static_cast<int>(std::ceil(4.0 * std::log(4.0 * static_cast<double>(d0)) / (epsilon * epsilon)));
}

namespace {

void check_maurey_inputs(const std::vector<std::vector<double>>& S, std::span<const double> weights,
                         std::span<const double> z) {
    if (S.empty()) throw InputError("sample set S must be nonempty");
    const std::size_t d0 = S.front().size();
    if (d0 < 2) throw InputError("ambient dimension must be >= 2");
    for (const auto& s : S) {
        if (s.size() != d0) throw InputError("sample set points have inconsistent dimensions");
        for (const double v : s)
            if (v < 0.0 || v > 1.0) throw InputError("sample set points must lie in [0, 1]^d0");
    }
    if (weights.size() != S.size()) throw InputError("weight count does not match |S|");
    double total = 0.0;
    for (const double w : weights) {
        if (w < 0.0) throw InputError("weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("weights must sum to 1");
    if (z.size() != d0) throw InputError("target point dimension does not match S");
    for (std::size_t i = 0; i < d0; ++i) {
        double combo = 0.0;
        for (std::size_t s = 0; s < S.size(); ++s) combo += weights[s] * S[s][i];
        if (std::abs(combo - z[i]) > 1e-9)
            throw InputError("z is not the stated convex combination of S (coordinate " + std::to_string(i) + ")");
    }
}

}  // namespace

MaureyAttempt maurey_attempt(const std::vector<std::vector<double>>& S, std::span<const double> weights,
                             std::span<const double> z, double epsilon, RngStream& rng) {
    check_maurey_inputs(S, weights, z);
    if (!(epsilon > 0.0)) throw InputError("epsilon must be > 0");
    const std::size_t d0 = S.front().size();
    const int n = maurey_sample_count(static_cast<int>(d0), epsilon);

    std::vector<double> cumulative(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;

    MaureyAttempt attempt;
    attempt.chosen.reserve(static_cast<std::size_t>(n));
    std::vector<double> mean(d0, 0.0);
    for (int k = 0; k < n; ++k) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const int idx = static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                  static_cast<std::ptrdiff_t>(weights.size()) - 1));
        attempt.chosen.push_back(idx);
        for (std::size_t i = 0; i < d0; ++i) mean[i] += S[static_cast<std::size_t>(idx)][i];
    }
    attempt.sqrt_mean.resize(d0);
    double sup = 0.0;
    for (std::size_t i = 0; i < d0; ++i) {
        attempt.sqrt_mean[i] = std::sqrt(mean[i] / n);
        sup = std::max(sup, std::abs(attempt.sqrt_mean[i] - std::sqrt(z[i])));
    }
    attempt.sup_error = sup;
    attempt.success = sup <= epsilon;
    return attempt;
}

MaureyResult maurey_sparsify(const std::vector<std::vector<double>>& S, std::span<const double> weights,
                             std::span<const double> z, double epsilon, const SampleSeed& seed) {
    constexpr int kMaxAttempts = 64;
    RngStream rng(seed);
    MaureyResult out;
    for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        MaureyAttempt a = maurey_attempt(S, weights, z, epsilon, rng);
        if (a.success) {
            out.chosen = std::move(a.chosen);
            out.approx = std::move(a.sqrt_mean);
            out.attempts = attempt;
            out.sample_count = static_cast<int>(out.chosen.size());
            return out;
        }
    }
    // Per-attempt success probability is at least 1/2, so 64 straight
    // failures indicate a violated precondition rather than bad luck.
    throw InputError("sparsification failed 64 consecutive attempts; check the inputs");
}

FiniteMetricSpace profile_sample_space(const CoeffTensor& b, int axis, int n_points, const SampleSeed& seed) {
    if (axis < 1 || axis > b.order())
        throw DimensionError("axis " + std::to_string(axis) + " outside [1, " + std::to_string(b.order()) + "]");
    const int d = b.dim();
    if (n_points < 1) throw InputError("sample space needs at least one point");

    std::vector<std::vector<double>> points;
    points.reserve(static_cast<std::size_t>(n_points));
    points.emplace_back(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d && static_cast<int>(points.size()) < n_points; ++i) {
        std::vector<double> e(static_cast<std::size_t>(d), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        points.push_back(e);
        if (static_cast<int>(points.size()) < n_points) {
            e[static_cast<std::size_t>(i)] = -1.0;
            points.push_back(std::move(e));
        }
    }
    RngStream rng = RngStream(seed).fork(stream_tag::sample);
    while (static_cast<int>(points.size()) < n_points) points.push_back(rng.unit_vector(d));

    std::vector<std::vector<double>> profiles;
    profiles.reserve(points.size());
    for (const auto& p : points) profiles.push_back(fiber_profile(b, axis, p).values);

    const std::size_t n = points.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double m = 0.0;
            for (std::size_t t = 0; t < profiles[i].size(); ++t)
                m = std::max(m, std::abs(profiles[i][t] - profiles[j][t]));
            dist[i][j] = m;
            dist[j][i] = m;
        }
    return FiniteMetricSpace(std::move(dist));
}

}  // namespace injnorm
