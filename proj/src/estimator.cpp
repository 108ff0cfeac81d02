#include "injnorm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "injnorm/errors.hpp"

namespace injnorm {

namespace {

constexpr double kZeroContractionTol = 1e-14;
constexpr int kMaxWitnessStarts = 64;

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

void check_finite(const CoeffTensor& t) {
    // CoeffTensor construction already rejects non-finite entries; this
    // guards tensors arriving through sample arithmetic.
    for (const double v : t.entries())
        if (!std::isfinite(v)) throw DimensionError("estimator input has non-finite entries");
}

}  // namespace

int default_num_starts(int order, int dim) {
    return 4 * order * static_cast<int>(std::ceil(std::log(static_cast<double>(dim) + 1.0)));
}

AltMaxRun alt_max_single_run(const CoeffTensor& t, UnitVectorTuple start, const EstimatorConfig& cfg,
                             RngStream& redraw_stream) {
    const int r = t.order();
    std::vector<std::vector<double>> xs = start.vectors();
    auto tuple = [&] { return UnitVectorTuple(xs); };

    AltMaxRun run;
    double previous = rank1_inner(t, tuple());
    for (int sweep = 0; sweep < cfg.max_iterations; ++sweep) {
        for (int k = 1; k <= r; ++k) {
            std::vector<double> v = mode_contraction(t, tuple(), k);
            const double norm = l2_norm(v);
            if (norm < kZeroContractionTol) {
                // Degenerate contraction; redraw this axis and move on.
                xs[static_cast<std::size_t>(k - 1)] = redraw_stream.unit_vector(t.dim());
                continue;
            }
            for (auto& e : v) e /= norm;
            xs[static_cast<std::size_t>(k - 1)] = std::move(v);
        }
        const double objective = rank1_inner(t, tuple());
        run.sweep_values.push_back(objective);
        ++run.sweeps;
        if (objective - previous < cfg.convergence_tol) {
            run.converged = true;
            break;
        }
        previous = objective;
    }
    run.value = rank1_inner(t, tuple());
    run.tuple = tuple();
    return run;
}

namespace {

std::vector<UnitVectorTuple> witness_starts(const CoeffTensor& t) {
    // Largest realized fibers over all axes, capped at kMaxWitnessStarts.
    struct Entry {
        double value;
        int axis;
        std::int64_t offset;
    };
    std::vector<Entry> entries;
    for (int k = 1; k <= t.order(); ++k) {
        const std::vector<double> sums = axis_square_sums(t, k);
        for (std::int64_t off = 0; off < static_cast<std::int64_t>(sums.size()); ++off)
            entries.push_back({sums[static_cast<std::size_t>(off)], k, off});
    }
    const std::size_t keep = std::min<std::size_t>(kMaxWitnessStarts, entries.size());
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep), entries.end(),
                      [](const Entry& a, const Entry& b) {
                          if (a.value != b.value) return a.value > b.value;
                          if (a.axis != b.axis) return a.axis < b.axis;
                          return a.offset < b.offset;
                      });
    entries.resize(keep);

    std::vector<UnitVectorTuple> starts;
    starts.reserve(keep);
    for (const Entry& e : entries) {
        SliceWitness w;
        w.value = std::sqrt(e.value);
        w.axis = e.axis;
        w.off_indices = decode_off_axis(t.order(), t.dim(), e.offset);
        starts.push_back(w.tuple(t));
    }
    return starts;
}

}  // namespace

EstimateResult alt_max_estimate(const CoeffTensor& t, const EstimatorConfig& cfg, const SampleSeed& seed) {
    check_finite(t);
    const int random_starts = cfg.num_starts > 0 ? cfg.num_starts : default_num_starts(t.order(), t.dim());
    const RngStream base = RngStream(seed).fork(stream_tag::estimator);

    std::vector<UnitVectorTuple> starts;
    starts.reserve(static_cast<std::size_t>(random_starts));
    for (int s = 0; s < random_starts; ++s) {
        RngStream stream = base.fork(static_cast<std::uint64_t>(s));
        std::vector<std::vector<double>> vecs;
        vecs.reserve(static_cast<std::size_t>(t.order()));
        for (int k = 0; k < t.order(); ++k) vecs.push_back(stream.unit_vector(t.dim()));
        starts.emplace_back(std::move(vecs));
    }
    if (cfg.include_slice_witness_starts)
        for (auto& w : witness_starts(t)) starts.push_back(std::move(w));

    EstimateResult best;
    best.starts_used = static_cast<int>(starts.size());
    bool have_best = false;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        RngStream redraw = base.fork(0x10000000ull + s);
        AltMaxRun run = alt_max_single_run(t, starts[s], cfg, redraw);
        best.iterations += run.sweeps;
        if (!have_best || run.value > best.value) {
            best.value = run.value;
            best.witness = run.tuple;
            best.converged = run.converged;
            have_best = true;
        }
    }
    return best;
}

EstimateResult alt_max_estimate(const TensorSample& sample, const EstimatorConfig& cfg) {
    return alt_max_estimate(sample.values, cfg, sample.seed);
}

namespace {

// Unit sphere grid from hyperspherical angles: d-2 polar angles in [0, pi]
// and one azimuthal angle in [0, 2 pi). Per-angle step is chosen so every
// sphere point has a grid point within Euclidean distance resolution * pi.
std::vector<std::vector<double>> sphere_grid(int dim, double resolution) {
    const double pi = std::numbers::pi;
    std::vector<std::vector<double>> points;
    if (dim == 1) {
        points.push_back({1.0});
        points.push_back({-1.0});
        return points;
    }
    const int num_angles = dim - 1;
    const double step = (dim == 2) ? resolution * pi : 2.0 * resolution * pi / num_angles;

    std::vector<std::vector<double>> angle_values(static_cast<std::size_t>(num_angles));
    for (int a = 0; a < num_angles - 1; ++a) {
        const int n = static_cast<int>(std::ceil(pi / step)) + 1;
        for (int i = 0; i < n; ++i)
            angle_values[static_cast<std::size_t>(a)].push_back(pi * i / (n - 1));
    }
    {
        const int n = static_cast<int>(std::ceil(2.0 * pi / step));
        for (int i = 0; i < n; ++i)
            angle_values[static_cast<std::size_t>(num_angles - 1)].push_back(2.0 * pi * i / n);
    }

    std::vector<int> idx(static_cast<std::size_t>(num_angles), 0);
    for (;;) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        double sin_prod = 1.0;
        for (int a = 0; a < num_angles; ++a) {
            const double theta = angle_values[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
            x[static_cast<std::size_t>(a)] = sin_prod * std::cos(theta);
            sin_prod *= std::sin(theta);
        }
        x[static_cast<std::size_t>(dim - 1)] = sin_prod;
        points.push_back(std::move(x));

        int a = num_angles - 1;
        while (a >= 0) {
            if (++idx[static_cast<std::size_t>(a)] < static_cast<int>(angle_values[static_cast<std::size_t>(a)].size())) break;
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return points;
}

// Contracts the leading axis of a flat [d x rest] buffer against x.
std::vector<double> contract_leading(const std::vector<double>& buf, int dim, std::span<const double> x) {
    const std::int64_t rest = static_cast<std::int64_t>(buf.size()) / dim;
    std::vector<double> out(static_cast<std::size_t>(rest), 0.0);
    for (int i = 0; i < dim; ++i) {
        const double w = x[static_cast<std::size_t>(i)];
        if (w == 0.0) continue;
        const double* src = buf.data() + static_cast<std::int64_t>(i) * rest;
        for (std::int64_t t = 0; t < rest; ++t) out[static_cast<std::size_t>(t)] += w * src[t];
    }
    return out;
}

double grid_oracle_recurse(const std::vector<double>& buf, int axes_left, int dim,
                           const std::vector<std::vector<double>>& grid) {
    if (axes_left == 1) return l2_norm(buf);  // closed-form last axis
    double best = 0.0;
    for (const auto& u : grid) {
        const std::vector<double> next = contract_leading(buf, dim, u);
        best = std::max(best, grid_oracle_recurse(next, axes_left - 1, dim, grid));
    }
    return best;
}

}  // namespace

double grid_oracle(const CoeffTensor& t, double resolution) {
    if (t.order() > 3 || t.dim() > 4)
        throw GuardError("grid oracle is limited to r <= 3 and d <= 4 (got r=" + std::to_string(t.order()) +
                         ", d=" + std::to_string(t.dim()) + ")");
    if (!(resolution > 0.0) || resolution > 0.5) throw InputError("resolution must lie in (0, 1/2]");
    const std::vector<std::vector<double>> grid = sphere_grid(t.dim(), resolution);
    const std::vector<double> buf(t.entries().begin(), t.entries().end());
    return grid_oracle_recurse(buf, t.order(), t.dim(), grid);
}

UnitVectorTuple SliceWitness::tuple(const CoeffTensor& t) const {
    std::vector<std::vector<double>> vecs(static_cast<std::size_t>(t.order()),
                                          std::vector<double>(static_cast<std::size_t>(t.dim()), 0.0));
    std::vector<int> full(static_cast<std::size_t>(t.order()), 0);
    std::size_t src = 0;
    for (int k = 1; k <= t.order(); ++k) {
        if (k == axis) continue;
        const int i = off_indices[src++];
        full[static_cast<std::size_t>(k - 1)] = i;
        vecs[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)] = 1.0;
    }
    // Fiber along the witness axis at the fixed off-axis indices.
    std::vector<double>& fiber = vecs[static_cast<std::size_t>(axis - 1)];
    for (int i = 1; i <= t.dim(); ++i) {
        full[static_cast<std::size_t>(axis - 1)] = i;
        fiber[static_cast<std::size_t>(i - 1)] = t.at(full);
    }
    const double norm = l2_norm(fiber);
    if (norm > kZeroContractionTol) {
        for (auto& v : fiber) v /= norm;
    } else {
        std::fill(fiber.begin(), fiber.end(), 0.0);
        fiber[0] = 1.0;
    }
    return UnitVectorTuple(std::move(vecs));
}

SliceWitness slice_witness(const CoeffTensor& t) {
    SliceWitness best;
    best.value = -1.0;
    for (int k = 1; k <= t.order(); ++k) {
        const std::vector<double> sums = axis_square_sums(t, k);
        for (std::int64_t off = 0; off < static_cast<std::int64_t>(sums.size()); ++off) {
            const double value = std::sqrt(sums[static_cast<std::size_t>(off)]);
            if (value > best.value) {
                best.value = value;
                best.axis = k;
                best.off_indices = decode_off_axis(t.order(), t.dim(), off);
            }
        }
    }
    return best;
}

SliceWitness slice_witness(const TensorSample& sample, const CoeffTensor& b) {
    if (sample.values.order() != b.order() || sample.values.dim() != b.dim())
        throw DimensionError("sample shape (r=" + std::to_string(sample.values.order()) + ", d=" +
                             std::to_string(sample.values.dim()) + ") does not match coefficients (r=" +
                             std::to_string(b.order()) + ", d=" + std::to_string(b.dim()) + ")");
    return slice_witness(sample.values);
}

double fiber_norm(const CoeffTensor& t, int axis, std::span<const int> off_indices) {
    if (axis < 1 || axis > t.order())
        throw DimensionError("axis " + std::to_string(axis) + " outside [1, " + std::to_string(t.order()) + "]");
    if (static_cast<int>(off_indices.size()) != t.order() - 1)
        throw DimensionError("expected " + std::to_string(t.order() - 1) + " off-axis indices");
    std::vector<int> full(static_cast<std::size_t>(t.order()), 0);
    std::size_t src = 0;
    for (int k = 1; k <= t.order(); ++k)
        if (k != axis) full[static_cast<std::size_t>(k - 1)] = off_indices[src++];
    double s = 0.0;
    for (int i = 1; i <= t.dim(); ++i) {
        full[static_cast<std::size_t>(axis - 1)] = i;
        const double v = t.at(full);
        s += v * v;
    }
    return std::sqrt(s);
}

}  // namespace injnorm
