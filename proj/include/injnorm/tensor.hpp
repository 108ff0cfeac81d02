#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace injnorm {

/// Largest entry count a tensor constructor accepts (desk-scale guard).
inline constexpr std::int64_t kMaxTensorEntries = 100'000'000;

/// d^r with overflow detection; throws GuardError past kMaxTensorEntries.
std::int64_t checked_pow(int dim, int order);

/// Dense order-r coefficient array over [d]^r, row-major with the last
/// index fastest. Index tuples and axis numbers are 1-based at the API
/// surface; flat offsets are 0-based. Immutable after construction.
class CoeffTensor {
public:
    CoeffTensor(int order, int dim, std::vector<double> entries);

    static CoeffTensor zeros(int order, int dim);
    static CoeffTensor constant(int order, int dim, double value);

    int order() const { return order_; }
    int dim() const { return dim_; }
    std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }
    std::span<const double> entries() const { return entries_; }

    /// Entry at a 1-based index tuple of length order().
    double at(std::span<const int> indices) const;
    double flat(std::int64_t offset) const { return entries_[static_cast<std::size_t>(offset)]; }

    std::int64_t flat_offset(std::span<const int> indices) const;

    double frobenius_norm() const;
    double max_abs_entry() const;

private:
    int order_;
    int dim_;
    std::vector<double> entries_;
};

/// r vectors of length d, each inside the Euclidean unit ball
/// (norm <= 1 + 1e-12 slack for normalization drift).
class UnitVectorTuple {
public:
    UnitVectorTuple() = default;  // empty placeholder; order() == 0
    explicit UnitVectorTuple(std::vector<std::vector<double>> vectors);

    static UnitVectorTuple basis(int order, int dim, std::span<const int> axes_indices);

    int order() const { return static_cast<int>(vectors_.size()); }
    int dim() const { return vectors_.empty() ? 0 : static_cast<int>(vectors_.front().size()); }

    /// Vector for axis k, 1-based.
    const std::vector<double>& vec(int k) const;
    const std::vector<std::vector<double>>& vectors() const { return vectors_; }

    /// The r-1 vectors for the axes other than k, in ascending axis order.
    std::vector<std::vector<double>> drop_axis(int k) const;

private:
    std::vector<std::vector<double>> vectors_;
};

/// D^(k): the d x d diagonal matrix carrying the per-fiber weighted norms
/// for axis k once the other r-1 vectors are fixed. Entries nonnegative.
struct DiagonalSliceMatrix {
    int axis = 1;  // 1-based
    std::vector<double> diag;

    double infinity_norm() const;
    /// || D x ||_2
    double apply_l2(std::span<const double> x) const;
};

/// Slice statistics of a coefficient tensor: sigma[k-1] is the largest
/// l2 norm over the d^(r-1) axis-k fibers, b_max the largest |entry|,
/// frobenius the full l2 norm. Always b_max <= sigma_k <= frobenius.
struct SliceStats {
    std::vector<double> sigma;
    double b_max = 0.0;
    double frobenius = 0.0;

    double sigma_sum() const;
    double sigma_max() const;
};

/// <T, x1 (x) ... (x) xr> evaluated by sequential axis contraction
/// (last axis first), O(d^r) time and O(d^(r-1)) scratch.
double rank1_inner(const CoeffTensor& t, const UnitVectorTuple& xs);

/// l2 norm of the entrywise product of b with the rank-one tensor of xs:
/// (sum b^2 prod_k <x_k, e_{i_k}>^2)^(1/2). For a Gaussian tensor with
/// coefficients b this is the standard deviation of the pairing at xs,
/// and it equals ||D^(k) x_k||_2 for every axis k.
double rank1_stddev(const CoeffTensor& b, const UnitVectorTuple& xs);

/// Diagonal of D^(k) for axis k given the other r-1 vectors
/// (ascending axis order, each of length d).
DiagonalSliceMatrix diag_slice_matrix(const CoeffTensor& b, int axis,
                                      const std::vector<std::vector<double>>& off_axis_vectors);

SliceStats coeff_stats(const CoeffTensor& b);

/// Contraction of t against all vectors except the kept axis; returns the
/// length-d fiber of partial inner products. keep_axis is 1-based.
std::vector<double> mode_contraction(const CoeffTensor& t, const UnitVectorTuple& xs, int keep_axis);

/// Per-fiber sums of squared entries along axis k, optionally weighted by
/// weight[i_k]: out[t] = sum_{i_k} entry^2 * w(i_k), indexed row-major by
/// the off-axis tuple (last off-axis index fastest), length d^(r-1).
std::vector<double> axis_square_sums(const CoeffTensor& t, int axis, std::span<const double> weights = {});

/// Decodes a 0-based off-axis row-major offset into r-1 1-based indices
/// (ascending order of the remaining axes).
std::vector<int> decode_off_axis(int order, int dim, std::int64_t offset);

}  // namespace injnorm
