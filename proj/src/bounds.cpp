#include "injnorm/bounds.hpp"

#include <cmath>

#include "injnorm/errors.hpp"

namespace injnorm {

BoundBreakdown tensor_upper_bound(const SliceStats& stats, int order, int dim, double constant_C) {
    if (!(constant_C > 0.0)) throw InputError("bound constant C must be > 0");
    if (dim < 1 || order < 1) throw DimensionError("bound requires r >= 1 and d >= 1");
    const double r = static_cast<double>(order);
    const double log_d = std::log(static_cast<double>(dim));
    BoundBreakdown out;
    out.name = "gaussian_tensor_upper";
    out.constant_C = constant_C;
    out.slice_term = std::sqrt(2.0 * r) * stats.sigma_sum();
    out.log_term = constant_C * r * r * r * log_d * log_d * stats.b_max;
    out.total = out.slice_term + out.log_term;
    out.extra["b_max"] = stats.b_max;
    out.extra["sigma_sum"] = stats.sigma_sum();
    return out;
}

double slice_lower_bound(const SliceStats& stats) { return stats.sigma_max(); }

BoundBreakdown bvh_matrix_bound(const SliceStats& stats, int dim, double epsilon) {
    if (stats.sigma.size() != 2) throw DimensionError("matrix bound requires r = 2 slice statistics");
    if (!(epsilon > 0.0) || epsilon > 0.5) throw InputError("epsilon must lie in (0, 1/2]");
    if (dim < 1) throw DimensionError("bound requires d >= 1");
    const double log_d = std::log(static_cast<double>(dim));
    // sigma[1] maximizes over rows (sums over the column index), sigma[0]
    // over columns; same statistics as the fourth-moment bracket terms.
    const double row = stats.sigma[1];
    const double col = stats.sigma[0];
    BoundBreakdown out;
    out.name = "matrix_epsilon_upper";
    out.constant_C = 1.0 + epsilon;
    out.slice_term = (1.0 + epsilon) * (row + col);
    out.log_term = (1.0 + epsilon) * 5.0 * std::sqrt(log_d) / std::sqrt(std::log1p(epsilon)) * stats.b_max;
    out.total = out.slice_term + out.log_term;
    out.extra["epsilon"] = epsilon;
    out.extra["row_term"] = row;
    out.extra["col_term"] = col;
    return out;
}

LatalaTerms latala_matrix_terms(const CoeffTensor& b) {
    if (b.order() != 2) throw DimensionError("fourth-moment terms require r = 2");
    const SliceStats stats = coeff_stats(b);
    double fourth = 0.0;
    for (const double v : b.entries()) fourth += v * v * v * v;
    return LatalaTerms{stats.sigma[1], stats.sigma[0], std::pow(fourth, 0.25)};
}

BoundBreakdown bounded_model_upper_bound(const SliceStats& stddev_stats, int order, int dim, double K,
                                         double constant_C) {
    if (!(K > 0.0)) throw InputError("bounded model bound requires K > 0");
    if (!(constant_C > 0.0)) throw InputError("bound constant C must be > 0");
    if (dim < 1 || order < 1) throw DimensionError("bound requires r >= 1 and d >= 1");
    const double r = static_cast<double>(order);
    const double log_d = std::log(static_cast<double>(dim));
    BoundBreakdown out;
    out.name = "bounded_tensor_upper";
    out.constant_C = constant_C;
    out.slice_term = 4.0 * std::sqrt(r) * stddev_stats.sigma_sum();
    out.log_term = constant_C * r * r * r * log_d * log_d * K;
    out.total = out.slice_term + out.log_term;
    out.extra["K"] = K;
    out.extra["variance_sigma_sum"] = stddev_stats.sigma_sum();
    return out;
}

double gaussian_tail_bound(double scale, double t) {
    if (!(scale > 0.0)) throw InputError("tail bound requires scale > 0");
    if (t < 0.0) throw InputError("tail bound requires t >= 0");
    return std::min(1.0, 2.0 * std::exp(-t * t / (2.0 * scale * scale)));
}

double subgaussian_tail_bound(double K, double t, double tail_C, double tail_c) {
    if (!(K > 0.0)) throw InputError("tail bound requires K > 0");
    if (t < 0.0) throw InputError("tail bound requires t >= 0");
    if (!(tail_C > 0.0) || !(tail_c > 0.0)) throw InputError("tail constants must be > 0");
    return std::min(1.0, tail_C * std::exp(-tail_c * t * t / (K * K)));
}

}  // namespace injnorm
