#pragma once

#include <span>
#include <vector>

#include "injnorm/metric_space.hpp"
#include "injnorm/rng.hpp"
#include "injnorm/tensor.hpp"

namespace injnorm {

/// Image of a unit-ball vector under the axis-k square-root fiber map:
/// values[t] = (sum_{i_k} b^2 <x, e_{i_k}>^2)^(1/2) over the d^(r-1)
/// off-axis tuples t (row-major, last off-axis index fastest).
struct FiberProfile {
    int axis = 1;
    std::vector<double> values;
};

FiberProfile fiber_profile(const CoeffTensor& b, int axis, std::span<const double> x);

/// Sup-norm distance between the axis-k fiber profiles of x and y; a
/// metric on the unit ball (zero distance between distinct points is
/// allowed).
double profile_distance(const CoeffTensor& b, int axis, std::span<const double> x, std::span<const double> y);

/// Sum over axes of the per-axis profile distances; the product metric
/// used on tuples of unit-ball vectors.
double profile_distance_sum(const CoeffTensor& b, const UnitVectorTuple& xs, const UnitVectorTuple& ys);

/// sum_k profile_distance(x_k, y_k)  -  (rank1_stddev(xs) - rank1_stddev(ys)).
/// Nonnegative up to roundoff: the stddev map is 1-Lipschitz for the
/// summed profile metric.
double stddev_lipschitz_residual(const CoeffTensor& b, const UnitVectorTuple& xs, const UnitVectorTuple& ys);

/// sum_{j != k} profile_distance(x_j, y_j)  -  ||D^(k)(xs) - D^(k)(ys)||_inf.
/// Nonnegative up to roundoff.
double diag_lipschitz_residual(const CoeffTensor& b, int axis,
                               const std::vector<std::vector<double>>& xs_off,
                               const std::vector<std::vector<double>>& ys_off);

/// Whether the square-root gap implication holds at (alpha, beta, t0):
/// if |sqrt(alpha) - sqrt(beta)| >= t0 then |alpha - beta| >=
/// max(t0 sqrt(beta), t0^2). Vacuously true when the premise fails.
bool sqrt_gap_holds(double alpha, double beta, double t0);

/// Number of empirical samples for a sup-norm sparsification of accuracy
/// epsilon in ambient dimension d0: ceil(4 ln(4 d0) / epsilon^2).
int maurey_sample_count(int d0, double epsilon);

struct MaureyAttempt {
    bool success = false;
    std::vector<int> chosen;          // indices into S, length n
    std::vector<double> sqrt_mean;    // entrywise sqrt of the empirical mean
    double sup_error = 0.0;           // || sqrt(mean) - sqrt(z) ||_inf
};

/// One empirical draw of n points from S according to `weights`; succeeds
/// when the square-root empirical mean is within epsilon of sqrt(z) in
/// sup norm (probability >= 1/2 per draw).
MaureyAttempt maurey_attempt(const std::vector<std::vector<double>>& S, std::span<const double> weights,
                             std::span<const double> z, double epsilon, RngStream& rng);

struct MaureyResult {
    std::vector<int> chosen;
    std::vector<double> approx;  // sqrt of the empirical mean
    int attempts = 0;
    int sample_count = 0;
};

/// Retries whole draws until success; caps at 64 attempts (a trip at
/// that cap signals a precondition bug, not bad luck).
MaureyResult maurey_sparsify(const std::vector<std::vector<double>>& S, std::span<const double> weights,
                             std::span<const double> z, double epsilon, const SampleSeed& seed);

/// Finite sample of the unit ball under the axis-k profile metric:
/// the zero vector, all +-e_i, then seeded random unit vectors up to
/// n_points total.
FiniteMetricSpace profile_sample_space(const CoeffTensor& b, int axis, int n_points, const SampleSeed& seed);

}  // namespace injnorm
