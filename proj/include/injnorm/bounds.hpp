#pragma once

#include <map>
#include <string>

#include "injnorm/tensor.hpp"

namespace injnorm {

/// A bound value decomposed into its named terms. The universal constant
/// is exposed as a parameter (default 1.0); every report states which
/// value was used. total == slice_term + log_term to within 1e-12.
struct BoundBreakdown {
    std::string name;
    double total = 0.0;
    double slice_term = 0.0;
    double log_term = 0.0;
    double constant_C = 1.0;
    std::map<std::string, double> extra;
};

/// Upper bound on E||Z|| for the Gaussian-coefficient model:
///   sqrt(2r) * sum_k sigma_k  +  C * r^3 * (ln d)^2 * b_max.
/// At d = 1 the log term vanishes.
BoundBreakdown tensor_upper_bound(const SliceStats& stats, int order, int dim, double constant_C);

/// Lower bound max_k sigma_k on (E||Z||^2)^(1/2), realized by aligning
/// one vector with the largest coefficient fiber.
double slice_lower_bound(const SliceStats& stats);

/// Matrix (r = 2) bound with a tunable epsilon in (0, 1/2]:
///   (1+eps) * [sigma_row + sigma_col + 5 sqrt(ln d)/sqrt(ln(1+eps)) * b_max].
BoundBreakdown bvh_matrix_bound(const SliceStats& stats, int dim, double epsilon);

/// The three bracket terms of the fourth-moment matrix bound; the bound
/// itself is C * (row + col + fourth) with C left to the caller.
struct LatalaTerms {
    double row = 0.0;     // max_i1 (sum_i2 b^2)^(1/2)
    double col = 0.0;     // max_i2 (sum_i1 b^2)^(1/2)
    double fourth = 0.0;  // (sum b^4)^(1/4)
};
LatalaTerms latala_matrix_terms(const CoeffTensor& b);

/// Upper bound on E||X|| for mean-zero entries in [-K, K]:
///   4 sqrt(r) * sum_k max (sum_{i_k} E X^2)^(1/2)  +  C r^3 (ln d)^2 K.
/// stddev_stats must be the slice statistics of the per-entry standard
/// deviation tensor, so its sigma_k are exactly the variance slice roots.
BoundBreakdown bounded_model_upper_bound(const SliceStats& stddev_stats, int order, int dim, double K,
                                         double constant_C);

/// min(1, 2 exp(-t^2 / (2 scale^2))): two-sided deviation tail for a
/// 1-Lipschitz function of Gaussians with Lipschitz constant `scale`.
double gaussian_tail_bound(double scale, double t);

/// min(1, C exp(-c t^2 / K^2)) with caller-chosen constants,
/// default (C, c) = (2, 1/2).
double subgaussian_tail_bound(double K, double t, double tail_C = 2.0, double tail_c = 0.5);

}  // namespace injnorm
