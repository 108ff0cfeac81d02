#include "injnorm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "injnorm/errors.hpp"

namespace injnorm {

std::int64_t checked_pow(int dim, int order) {
    if (dim < 1 || order < 1) throw DimensionError("tensor shape requires r >= 1 and d >= 1");
    std::int64_t n = 1;
    for (int k = 0; k < order; ++k) {
        if (n > kMaxTensorEntries / dim)
            throw GuardError("tensor with d=" + std::to_string(dim) + ", r=" + std::to_string(order) +
                             " exceeds the 1e8-entry guard");
        n *= dim;
    }
    return n;
}

CoeffTensor::CoeffTensor(int order, int dim, std::vector<double> entries)
    : order_(order), dim_(dim), entries_(std::move(entries)) {
    const std::int64_t expected = checked_pow(dim, order);
    if (static_cast<std::int64_t>(entries_.size()) != expected)
        throw DimensionError("entries length " + std::to_string(entries_.size()) + " != d^r = " +
                             std::to_string(expected));
    for (const double v : entries_)
        if (!std::isfinite(v)) throw DimensionError("tensor entries must be finite");
}

CoeffTensor CoeffTensor::zeros(int order, int dim) {
    return CoeffTensor(order, dim, std::vector<double>(static_cast<std::size_t>(checked_pow(dim, order)), 0.0));
}

CoeffTensor CoeffTensor::constant(int order, int dim, double value) {
    return CoeffTensor(order, dim, std::vector<double>(static_cast<std::size_t>(checked_pow(dim, order)), value));
}

std::int64_t CoeffTensor::flat_offset(std::span<const int> indices) const {
    if (static_cast<int>(indices.size()) != order_)
        throw DimensionError("index tuple length " + std::to_string(indices.size()) + " != r = " +
                             std::to_string(order_));
    std::int64_t offset = 0;
    for (int k = 0; k < order_; ++k) {
        const int i = indices[static_cast<std::size_t>(k)];
        if (i < 1 || i > dim_)
            throw DimensionError("index " + std::to_string(i) + " at axis " + std::to_string(k + 1) +
                                 " outside [1, " + std::to_string(dim_) + "]");
        offset = offset * dim_ + (i - 1);
    }
    return offset;
}

double CoeffTensor::at(std::span<const int> indices) const {
    return entries_[static_cast<std::size_t>(flat_offset(indices))];
}

double CoeffTensor::frobenius_norm() const {
    double s = 0.0;
    for (const double v : entries_) s += v * v;
    return std::sqrt(s);
}

double CoeffTensor::max_abs_entry() const {
    double m = 0.0;
    for (const double v : entries_) m = std::max(m, std::abs(v));
    return m;
}

UnitVectorTuple::UnitVectorTuple(std::vector<std::vector<double>> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw DimensionError("unit vector tuple must have at least one vector");
    const std::size_t d = vectors_.front().size();
    for (std::size_t k = 0; k < vectors_.size(); ++k) {
        if (vectors_[k].size() != d)
            throw DimensionError("vector at axis " + std::to_string(k + 1) + " has length " +
                                 std::to_string(vectors_[k].size()) + ", expected " + std::to_string(d));
        double norm_sq = 0.0;
        for (const double v : vectors_[k]) norm_sq += v * v;
        if (std::sqrt(norm_sq) > 1.0 + 1e-12)
            throw DimensionError("vector at axis " + std::to_string(k + 1) + " lies outside the unit ball");
    }
}

UnitVectorTuple UnitVectorTuple::basis(int order, int dim, std::span<const int> axes_indices) {
    if (static_cast<int>(axes_indices.size()) != order)
        throw DimensionError("basis tuple needs one index per axis");
    std::vector<std::vector<double>> vecs(static_cast<std::size_t>(order),
                                          std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    for (int k = 0; k < order; ++k) {
        const int i = axes_indices[static_cast<std::size_t>(k)];
        if (i < 1 || i > dim)
            throw DimensionError("basis index " + std::to_string(i) + " at axis " + std::to_string(k + 1) +
                                 " outside [1, " + std::to_string(dim) + "]");
        vecs[static_cast<std::size_t>(k)][static_cast<std::size_t>(i - 1)] = 1.0;
    }
    return UnitVectorTuple(std::move(vecs));
}

const std::vector<double>& UnitVectorTuple::vec(int k) const {
    if (k < 1 || k > order())
        throw DimensionError("axis " + std::to_string(k) + " outside [1, " + std::to_string(order()) + "]");
    return vectors_[static_cast<std::size_t>(k - 1)];
}

std::vector<std::vector<double>> UnitVectorTuple::drop_axis(int k) const {
    if (k < 1 || k > order())
        throw DimensionError("axis " + std::to_string(k) + " outside [1, " + std::to_string(order()) + "]");
    std::vector<std::vector<double>> out;
    out.reserve(vectors_.size() - 1);
    for (int j = 1; j <= order(); ++j)
        if (j != k) out.push_back(vectors_[static_cast<std::size_t>(j - 1)]);
    return out;
}

double DiagonalSliceMatrix::infinity_norm() const {
    double m = 0.0;
    for (const double v : diag) m = std::max(m, std::abs(v));
    return m;
}

double DiagonalSliceMatrix::apply_l2(std::span<const double> x) const {
    if (x.size() != diag.size()) throw DimensionError("diagonal apply: vector length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double v = diag[i] * x[i];
        s += v * v;
    }
    return std::sqrt(s);
}

double SliceStats::sigma_sum() const {
    double s = 0.0;
    for (const double v : sigma) s += v;
    return s;
}

double SliceStats::sigma_max() const {
    double m = 0.0;
    for (const double v : sigma) m = std::max(m, v);
    return m;
}

namespace {

void check_tuple_shape(const CoeffTensor& t, const UnitVectorTuple& xs) {
    if (xs.order() != t.order())
        throw DimensionError("tuple has " + std::to_string(xs.order()) + " vectors, tensor order is " +
                             std::to_string(t.order()));
    if (xs.dim() != t.dim())
        throw DimensionError("tuple vectors have length " + std::to_string(xs.dim()) + ", tensor dim is " +
                             std::to_string(t.dim()));
}

// Contracts the trailing axis of a [outer x d] buffer against x.
void contract_last(std::vector<double>& buf, std::int64_t outer, int d, std::span<const double> x) {
    for (std::int64_t i = 0; i < outer; ++i) {
        const double* row = buf.data() + i * d;
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += row[j] * x[static_cast<std::size_t>(j)];
        buf[static_cast<std::size_t>(i)] = s;
    }
    buf.resize(static_cast<std::size_t>(outer));
}

// Contracts the middle axis of a [outer x d x inner] buffer against x.
void contract_middle(std::vector<double>& buf, std::int64_t outer, int d, std::int64_t inner,
                     std::span<const double> x) {
    std::vector<double> next(static_cast<std::size_t>(outer * inner), 0.0);
    for (std::int64_t o = 0; o < outer; ++o) {
        const double* block = buf.data() + o * d * inner;
        double* dst = next.data() + o * inner;
        for (int j = 0; j < d; ++j) {
            const double w = x[static_cast<std::size_t>(j)];
            if (w == 0.0) continue;
            const double* src = block + static_cast<std::int64_t>(j) * inner;
            for (std::int64_t t = 0; t < inner; ++t) dst[t] += w * src[t];
        }
    }
    buf = std::move(next);
}

// Contracts every axis except keep_axis (1-based; 0 keeps nothing and
// reduces to a scalar in buf[0]). transform(x) is applied elementwise to
// tensor entries and vectors before contracting when squared is true.
std::vector<double> contract_core(std::span<const double> entries, int order, int dim,
                                  const std::vector<std::vector<double>>& xs, int keep_axis, bool squared) {
    std::vector<double> buf(entries.begin(), entries.end());
    if (squared)
        for (auto& v : buf) v *= v;

    // Axes still present in buf, in original order.
    std::vector<int> axes(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) axes[static_cast<std::size_t>(k)] = k + 1;

    auto vector_for = [&](int axis) {
        std::vector<double> x = xs[static_cast<std::size_t>(axis - 1)];
        if (squared)
            for (auto& v : x) v *= v;
        return x;
    };

    while (static_cast<int>(axes.size()) > (keep_axis > 0 ? 1 : 0)) {
        // Contract the last remaining axis unless it is the kept one.
        int pos = static_cast<int>(axes.size()) - 1;
        if (axes[static_cast<std::size_t>(pos)] == keep_axis) --pos;
        if (pos < 0) break;
        const int axis = axes[static_cast<std::size_t>(pos)];
        const std::vector<double> x = vector_for(axis);
        const int remaining = static_cast<int>(axes.size());
        if (pos == remaining - 1) {
            contract_last(buf, static_cast<std::int64_t>(buf.size()) / dim, dim, x);
        } else {
            // Kept axis is the trailing one; contract the axis before it.
            std::int64_t inner = 1;
            for (int q = pos + 1; q < remaining; ++q) inner *= dim;
            const std::int64_t outer = static_cast<std::int64_t>(buf.size()) / (inner * dim);
            contract_middle(buf, outer, dim, inner, x);
        }
        axes.erase(axes.begin() + pos);
    }
    return buf;
}

}  // namespace

double rank1_inner(const CoeffTensor& t, const UnitVectorTuple& xs) {
    check_tuple_shape(t, xs);
    return contract_core(t.entries(), t.order(), t.dim(), xs.vectors(), 0, false)[0];
}

double rank1_stddev(const CoeffTensor& b, const UnitVectorTuple& xs) {
    check_tuple_shape(b, xs);
    const double s = contract_core(b.entries(), b.order(), b.dim(), xs.vectors(), 0, true)[0];
    return std::sqrt(std::max(0.0, s));
}

std::vector<double> mode_contraction(const CoeffTensor& t, const UnitVectorTuple& xs, int keep_axis) {
    check_tuple_shape(t, xs);
    if (keep_axis < 1 || keep_axis > t.order())
        throw DimensionError("axis " + std::to_string(keep_axis) + " outside [1, " + std::to_string(t.order()) + "]");
    return contract_core(t.entries(), t.order(), t.dim(), xs.vectors(), keep_axis, false);
}

DiagonalSliceMatrix diag_slice_matrix(const CoeffTensor& b, int axis,
                                      const std::vector<std::vector<double>>& off_axis_vectors) {
    if (axis < 1 || axis > b.order())
        throw DimensionError("axis " + std::to_string(axis) + " outside [1, " + std::to_string(b.order()) + "]");
    if (static_cast<int>(off_axis_vectors.size()) != b.order() - 1)
        throw DimensionError("expected " + std::to_string(b.order() - 1) + " off-axis vectors, got " +
                             std::to_string(off_axis_vectors.size()));
    std::vector<std::vector<double>> full;
    full.reserve(static_cast<std::size_t>(b.order()));
    std::size_t src = 0;
    for (int k = 1; k <= b.order(); ++k) {
        if (k == axis) {
            full.emplace_back(static_cast<std::size_t>(b.dim()), 0.0);
        } else {
            if (static_cast<int>(off_axis_vectors[src].size()) != b.dim())
                throw DimensionError("off-axis vector " + std::to_string(src + 1) + " has length " +
                                     std::to_string(off_axis_vectors[src].size()) + ", expected " +
                                     std::to_string(b.dim()));
            full.push_back(off_axis_vectors[src]);
            ++src;
        }
    }
    std::vector<double> diag = contract_core(b.entries(), b.order(), b.dim(), full, axis, true);
    for (auto& v : diag) v = std::sqrt(std::max(0.0, v));
    return DiagonalSliceMatrix{axis, std::move(diag)};
}

std::vector<double> axis_square_sums(const CoeffTensor& t, int axis, std::span<const double> weights) {
    if (axis < 1 || axis > t.order())
        throw DimensionError("axis " + std::to_string(axis) + " outside [1, " + std::to_string(t.order()) + "]");
    if (!weights.empty() && static_cast<int>(weights.size()) != t.dim())
        throw DimensionError("weight vector length mismatch");
    const int d = t.dim();
    std::int64_t stride = 1;  // stride of the chosen axis
    for (int k = axis + 1; k <= t.order(); ++k) stride *= d;
    const std::int64_t n = t.size();
    std::vector<double> out(static_cast<std::size_t>(n / d), 0.0);
    const std::span<const double> e = t.entries();
    for (std::int64_t f = 0; f < n; ++f) {
        const std::int64_t ik = (f / stride) % d;
        const std::int64_t off = (f / (stride * d)) * stride + f % stride;
        const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(ik)];
        out[static_cast<std::size_t>(off)] += e[static_cast<std::size_t>(f)] * e[static_cast<std::size_t>(f)] * w;
    }
    return out;
}

std::vector<int> decode_off_axis(int order, int dim, std::int64_t offset) {
    std::vector<int> indices(static_cast<std::size_t>(order - 1));
    for (int pos = order - 2; pos >= 0; --pos) {
        indices[static_cast<std::size_t>(pos)] = static_cast<int>(offset % dim) + 1;
        offset /= dim;
    }
    return indices;
}

SliceStats coeff_stats(const CoeffTensor& b) {
    SliceStats stats;
    stats.sigma.resize(static_cast<std::size_t>(b.order()), 0.0);
    for (int k = 1; k <= b.order(); ++k) {
        const std::vector<double> sums = axis_square_sums(b, k);
        double m = 0.0;
        for (const double s : sums) m = std::max(m, s);
        stats.sigma[static_cast<std::size_t>(k - 1)] = std::sqrt(m);
    }
    stats.b_max = b.max_abs_entry();
    stats.frobenius = b.frobenius_norm();
    return stats;
}

}  // namespace injnorm
