#include "injnorm/metric_space.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "injnorm/errors.hpp"

namespace injnorm {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::vector<double>> dist, std::vector<std::string> labels)
    : n_(static_cast<int>(dist.size())), dist_(std::move(dist)), labels_(std::move(labels)) {
    if (n_ == 0) throw DimensionError("metric space needs at least one point");
    for (int i = 0; i < n_; ++i) {
        if (static_cast<int>(dist_[static_cast<std::size_t>(i)].size()) != n_)
            throw DimensionError("distance matrix row " + std::to_string(i) + " has wrong length");
        if (dist_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] != 0.0)
            throw DimensionError("distance matrix diagonal must be zero");
        for (int j = 0; j < n_; ++j) {
            const double v = dist_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!(v >= 0.0) || !std::isfinite(v))
                throw DimensionError("distances must be finite and nonnegative");
            if (std::abs(v - dist_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) > 1e-12)
                throw DimensionError("distance matrix must be symmetric");
        }
    }
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n_)
        throw DimensionError("label count does not match point count");
}

double FiniteMetricSpace::diameter() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) m = std::max(m, dist(i, j));
    return m;
}

double FiniteMetricSpace::max_triangle_violation() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            if (j == i) continue;
            for (int k = 0; k < n_; ++k)
                worst = std::max(worst, dist(i, k) - dist(i, j) - dist(j, k));
        }
    return worst;
}

void FiniteMetricSpace::validate_metric(double tol) const {
    if (max_triangle_violation() > tol)
        throw DimensionError("distance matrix violates the triangle inequality");
}

GreedyCover greedy_cover(const FiniteMetricSpace& space, double epsilon) {
    if (!(epsilon > 0.0)) throw InputError("cover radius must be > 0");
    const int n = space.size();

    // Seed: maximal average distance, ties to the lowest index.
    int seed = 0;
    double best_avg = -1.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += space.dist(i, j);
        if (s > best_avg) {
            best_avg = s;
            seed = i;
        }
    }

    GreedyCover cover;
    cover.centers.push_back(seed);
    std::vector<double> nearest(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) nearest[static_cast<std::size_t>(i)] = space.dist(i, seed);
    for (;;) {
        int far = 0;
        double far_dist = -1.0;
        for (int i = 0; i < n; ++i)
            if (nearest[static_cast<std::size_t>(i)] > far_dist) {
                far_dist = nearest[static_cast<std::size_t>(i)];
                far = i;
            }
        if (far_dist <= epsilon) break;
        cover.centers.push_back(far);
        for (int i = 0; i < n; ++i)
            nearest[static_cast<std::size_t>(i)] = std::min(nearest[static_cast<std::size_t>(i)], space.dist(i, far));
    }
    return cover;
}

std::vector<double> dyadic_eps_grid(double diameter, int octaves) {
    if (!(diameter > 0.0)) return {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(octaves) + 1);
    for (int j = 0; j <= octaves; ++j) grid.push_back(diameter * std::ldexp(1.0, -j));
    return grid;
}

double dudley_estimate(const FiniteMetricSpace& space, std::span<const double> eps_grid) {
    if (eps_grid.empty()) throw InputError("dudley estimate needs a nonempty epsilon grid");
    if (eps_grid.size() < 8) throw InputError("dudley estimate needs at least 8 grid values");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (!(eps_grid[i] > eps_grid[i + 1])) throw InputError("epsilon grid must be strictly decreasing");
    if (!(eps_grid.back() > 0.0)) throw InputError("epsilon grid values must be positive");

    const double diam = space.diameter();
    if (diam == 0.0) return 0.0;

    std::vector<double> grid(eps_grid.begin(), eps_grid.end());
    if (grid.front() < diam) grid.insert(grid.begin(), diam);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double hi = std::min(grid[i], diam);
        const double lo = grid[i + 1];
        if (lo >= hi) continue;
        const double count = static_cast<double>(greedy_cover(space, lo).size());
        total += (hi - lo) * std::sqrt(std::log(count));
    }
    return total;
}

namespace {

double block_diameter(const FiniteMetricSpace& space, const std::vector<int>& block) {
    double m = 0.0;
    for (std::size_t i = 0; i < block.size(); ++i)
        for (std::size_t j = i + 1; j < block.size(); ++j)
            m = std::max(m, space.dist(block[i], block[j]));
    return m;
}

// Splits a block by a greedy cover at the given radius, capped at
// max_blocks centers; points go to their nearest center (ties to the
// earliest center).
std::vector<std::vector<int>> split_block(const FiniteMetricSpace& space, const std::vector<int>& block,
                                          double radius, std::int64_t max_blocks) {
    if (block.size() == 1 || max_blocks <= 1) return {block};

    std::vector<int> centers;
    std::vector<double> nearest(block.size(), std::numeric_limits<double>::infinity());
    std::vector<int> owner(block.size(), 0);

    // Seed at the maximal-average-distance point within the block.
    std::size_t seed = 0;
    double best_avg = -1.0;
    for (std::size_t i = 0; i < block.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < block.size(); ++j) s += space.dist(block[i], block[j]);
        if (s > best_avg) {
            best_avg = s;
            seed = i;
        }
    }
    centers.push_back(static_cast<int>(seed));
    for (std::size_t i = 0; i < block.size(); ++i) {
        nearest[i] = space.dist(block[i], block[seed]);
        owner[i] = 0;
    }
    while (static_cast<std::int64_t>(centers.size()) < max_blocks) {
        std::size_t far = 0;
        double far_dist = -1.0;
        for (std::size_t i = 0; i < block.size(); ++i)
            if (nearest[i] > far_dist) {
                far_dist = nearest[i];
                far = i;
            }
        if (far_dist <= radius) break;
        const int c = static_cast<int>(centers.size());
        centers.push_back(static_cast<int>(far));
        for (std::size_t i = 0; i < block.size(); ++i) {
            const double d = space.dist(block[i], block[far]);
            if (d < nearest[i]) {
                nearest[i] = d;
                owner[i] = c;
            }
        }
    }

    std::vector<std::vector<int>> parts(centers.size());
    for (std::size_t i = 0; i < block.size(); ++i) parts[static_cast<std::size_t>(owner[i])].push_back(block[i]);
    parts.erase(std::remove_if(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); }), parts.end());
    return parts;
}

}  // namespace

AdmissibleResult build_admissible_sequence(const FiniteMetricSpace& space) {
    const int n = space.size();
    if (n > 4096) throw GuardError("admissible sequence construction is limited to 4096 points");

    PartitionTree tree;
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    tree.levels.push_back({all});

    const double diam = space.diameter();
    constexpr int kMaxLevels = 48;
    for (int m = 1; diam > 0.0 && m <= kMaxLevels; ++m) {
        const auto& prev = tree.levels.back();
        bool all_zero = true;
        for (const auto& block : prev)
            if (block_diameter(space, block) > 0.0) {
                all_zero = false;
                break;
            }
        if (all_zero) break;

        // Per-level cardinality cap 2^(2^m), shared across parent blocks.
        std::int64_t level_cap = std::numeric_limits<std::int64_t>::max();
        if (m <= 5) level_cap = static_cast<std::int64_t>(1) << (1 << m);
        const std::int64_t per_block_cap =
            std::max<std::int64_t>(1, level_cap == std::numeric_limits<std::int64_t>::max()
                                          ? level_cap
                                          : level_cap / static_cast<std::int64_t>(prev.size()));

        const double radius = diam * std::ldexp(1.0, -m);
        const bool last_chance = (m == kMaxLevels);
        std::vector<std::vector<int>> level;
        for (const auto& block : prev) {
            // A final singleton level keeps the functional finite for
            // adversarially small positive distances.
            const double split_radius = last_chance && per_block_cap >= static_cast<std::int64_t>(block.size())
                                            ? 0.0
                                            : radius;
            for (auto& part : split_block(space, block, split_radius, per_block_cap))
                level.push_back(std::move(part));
        }
        tree.levels.push_back(std::move(level));
    }

    AdmissibleResult out;
    out.functional = chaining_functional(space, tree);
    out.tree = std::move(tree);
    return out;
}

namespace {

void check_tree(const FiniteMetricSpace& space, const PartitionTree& tree) {
    if (tree.levels.empty()) throw DimensionError("partition tree has no levels");
    const int n = space.size();
    for (const auto& level : tree.levels) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (const auto& block : level)
            for (const int p : block) {
                if (p < 0 || p >= n) throw DimensionError("partition tree references a point outside the space");
                if (seen[static_cast<std::size_t>(p)]) throw DimensionError("partition level repeats a point");
                seen[static_cast<std::size_t>(p)] = 1;
            }
        for (const char s : seen)
            if (!s) throw DimensionError("partition level does not cover the space");
    }
}

}  // namespace

double chaining_functional(const FiniteMetricSpace& space, const PartitionTree& tree) {
    check_tree(space, tree);
    const int n = space.size();
    std::vector<double> per_point(static_cast<std::size_t>(n), 0.0);
    for (std::size_t m = 0; m < tree.levels.size(); ++m) {
        const double weight = std::exp2(static_cast<double>(m) / 2.0);
        for (const auto& block : tree.levels[m]) {
            const double diam = block_diameter(space, block);
            for (const int p : block) per_point[static_cast<std::size_t>(p)] += weight * diam;
        }
    }
    return *std::max_element(per_point.begin(), per_point.end());
}

UltrametricResult ultrametric_construct(const FiniteMetricSpace& space, const PartitionTree& tree) {
    check_tree(space, tree);
    const int n = space.size();
    const int depth = tree.depth();

    // Block id per point per level, plus per-block diameters.
    std::vector<std::vector<int>> block_of(static_cast<std::size_t>(depth),
                                           std::vector<int>(static_cast<std::size_t>(n), -1));
    std::vector<std::vector<double>> diam_of(static_cast<std::size_t>(depth));
    for (int m = 0; m < depth; ++m) {
        const auto& level = tree.levels[static_cast<std::size_t>(m)];
        diam_of[static_cast<std::size_t>(m)].reserve(level.size());
        for (std::size_t b = 0; b < level.size(); ++b) {
            for (const int p : level[b]) block_of[static_cast<std::size_t>(m)][static_cast<std::size_t>(p)] = static_cast<int>(b);
            diam_of[static_cast<std::size_t>(m)].push_back(block_diameter(space, level[b]));
        }
    }

    UltrametricResult out;
    out.source = tree;
    out.dist_hat.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int level = depth - 1;
            while (level >= 0 && block_of[static_cast<std::size_t>(level)][static_cast<std::size_t>(i)] !=
                                     block_of[static_cast<std::size_t>(level)][static_cast<std::size_t>(j)])
                --level;
            if (level < 0) throw DimensionError("partition tree level 0 must contain every pair");
            const double v =
                diam_of[static_cast<std::size_t>(level)][static_cast<std::size_t>(
                    block_of[static_cast<std::size_t>(level)][static_cast<std::size_t>(i)])];
            out.dist_hat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            out.dist_hat[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    return out;
}

std::vector<std::vector<double>> hilbert_embed(const FiniteMetricSpace& space) {
    const int n = space.size();
    if (n > 2048) throw GuardError("hilbert embedding is limited to 2048 points");

    // Double centering: G = -1/2 J D2 J with J = I - 11^T / n.
    Eigen::MatrixXd d2(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = space.dist(i, j);
            d2(i, j) = v * v;
        }
    const Eigen::VectorXd row_mean = d2.rowwise().mean();
    const double grand_mean = d2.mean();
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gram(i, j) = -0.5 * (d2(i, j) - row_mean(i) - row_mean(j) + grand_mean);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw NotEmbeddableError("eigenfactorization failed");
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const double lambda_max = std::max(0.0, lambda.maxCoeff());
    const double lambda_min = lambda.minCoeff();
    if (lambda_min < -1e-8 * std::max(lambda_max, 1e-30) && lambda_min < -1e-12)
        throw NotEmbeddableError("metric is not Euclidean-embeddable (centered Gram eigenvalue " +
                                 std::to_string(lambda_min) + ")");

    std::vector<std::vector<double>> points(static_cast<std::size_t>(n),
                                            std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int c = 0; c < n; ++c) {
        const double scale = std::sqrt(std::max(0.0, lambda(c)));
        if (scale == 0.0) continue;
        for (int i = 0; i < n; ++i)
            points[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = scale * solver.eigenvectors()(i, c);
    }
    return points;
}

}  // namespace injnorm
