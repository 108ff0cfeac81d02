#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace injnorm {

/// A finite point list with a symmetric nonnegative distance matrix.
/// Distances between distinct points may be zero (relaxed metric). Point
/// indices are 0-based. The constructor checks symmetry, the zero
/// diagonal and nonnegativity; the cubic triangle check is a separate
/// call so large spaces stay cheap to build.
class FiniteMetricSpace {
public:
    explicit FiniteMetricSpace(std::vector<std::vector<double>> dist, std::vector<std::string> labels = {});

    int size() const { return n_; }
    double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const std::vector<std::vector<double>>& dist_matrix() const { return dist_; }
    const std::vector<std::string>& labels() const { return labels_; }

    double diameter() const;
    /// Largest triangle violation dist(i,k) - dist(i,j) - dist(j,k); a
    /// valid metric stays below tol (default 1e-9).
    double max_triangle_violation() const;
    void validate_metric(double tol = 1e-9) const;

private:
    int n_;
    std::vector<std::vector<double>> dist_;
    std::vector<std::string> labels_;
};

struct GreedyCover {
    std::vector<int> centers;
    int size() const { return static_cast<int>(centers.size()); }
};

/// Farthest-point greedy cover: seeds at the point of maximal average
/// distance, then repeatedly adds the point farthest from the cover until
/// every point is within epsilon. The result is a valid epsilon-cover and
/// an upper bound on the covering number (minimality is not claimed).
GreedyCover greedy_cover(const FiniteMetricSpace& space, double epsilon);

/// diam, diam/2, ..., diam/2^octaves (15 values for octaves = 14).
std::vector<double> dyadic_eps_grid(double diameter, int octaves = 14);

/// Upper Riemann sum of sqrt(ln N(eps)) over the grid using greedy-cover
/// sizes, integrated from the diameter down to the smallest grid value.
double dudley_estimate(const FiniteMetricSpace& space, std::span<const double> eps_grid);

/// Nested partitions A_0 (everything), A_1, ... where level n has at most
/// 2^(2^n) blocks and each block refines the previous level.
struct PartitionTree {
    std::vector<std::vector<std::vector<int>>> levels;

    int depth() const { return static_cast<int>(levels.size()); }
};

struct AdmissibleResult {
    PartitionTree tree;
    double functional = 0.0;  // sup_t sum_n 2^(n/2) diam(A_n(t))
};

/// Greedy admissible sequence: level m covers each parent block at radius
/// diameter / 2^m with the per-level cardinality cap, assigning points to
/// their nearest center. The functional value is an upper estimate of the
/// chaining functional (never claimed to be the infimum).
AdmissibleResult build_admissible_sequence(const FiniteMetricSpace& space);

/// sup_t sum_n 2^(n/2) diam(A_n(t)) for an existing tree, evaluated
/// against this space's metric.
double chaining_functional(const FiniteMetricSpace& space, const PartitionTree& tree);

struct UltrametricResult {
    std::vector<std::vector<double>> dist_hat;
    PartitionTree source;
};

/// Ultrametric extension of the metric along a partition tree:
/// dist_hat(t, s) is the diameter of the deepest block containing both.
/// Dominates the original metric and satisfies the ultrametric triangle
/// inequality; per-block diameters never increase.
UltrametricResult ultrametric_construct(const FiniteMetricSpace& space, const PartitionTree& tree);

class NotEmbeddableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Isometric Euclidean embedding of a finite metric via double centering
/// of the squared distances and an eigenfactorization of the centered
/// Gram matrix. Throws NotEmbeddableError when the Gram matrix has an
/// eigenvalue below -1e-8 times the largest one (never happens for
/// ultrametrics). Returned vectors satisfy ||phi(i) - phi(j)|| = dist(i,j)
/// to within 1e-8.
std::vector<std::vector<double>> hilbert_embed(const FiniteMetricSpace& space);

}  // namespace injnorm
