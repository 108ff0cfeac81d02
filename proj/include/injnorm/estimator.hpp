#pragma once

#include <vector>

#include "injnorm/models.hpp"
#include "injnorm/rng.hpp"
#include "injnorm/tensor.hpp"

namespace injnorm {

struct EstimatorConfig {
    int num_starts = 0;  // 0 => 4 * r * ceil(ln(d + 1)) random starts
    int max_iterations = 500;
    double convergence_tol = 1e-10;
    bool include_slice_witness_starts = true;
};

/// Lower-bound certificate for the injective norm: value equals the
/// rank-one pairing at the reported witness (never an upper bound).
struct EstimateResult {
    double value = 0.0;
    UnitVectorTuple witness;
    int starts_used = 0;
    int iterations = 0;  // total sweeps across all starts
    bool converged = false;
};

/// One alternating-maximization run from a given start. sweep_values[s]
/// is the objective after sweep s; it is nondecreasing to within 1e-12.
struct AltMaxRun {
    double value = 0.0;
    UnitVectorTuple tuple;
    int sweeps = 0;
    bool converged = false;
    std::vector<double> sweep_values;
};

AltMaxRun alt_max_single_run(const CoeffTensor& t, UnitVectorTuple start, const EstimatorConfig& cfg,
                             RngStream& redraw_stream);

/// Multi-start alternating maximization (higher-order power iteration).
/// Starts are random unit tuples plus, when enabled, up to 64 slice
/// witness starts seeded from the largest realized fibers. The best value
/// wins; ties keep the earliest start.
EstimateResult alt_max_estimate(const CoeffTensor& t, const EstimatorConfig& cfg, const SampleSeed& seed);
EstimateResult alt_max_estimate(const TensorSample& sample, const EstimatorConfig& cfg);

/// Exhaustive maximization over a deterministic angular grid of each unit
/// sphere for the first r-1 axes (the last axis is optimized in closed
/// form). Guarded to r <= 3, d <= 4, resolution in (0, 1/2]. The result
/// never exceeds the true norm, and the true norm is at most
/// result + frobenius(T) * resolution * pi * r.
double grid_oracle(const CoeffTensor& t, double resolution);

/// The best realized fiber of a sample: the maximal l2 norm over every
/// axis k and off-axis index tuple, with the axis and 1-based off-axis
/// indices achieving it. Always a valid lower bound on the injective norm.
struct SliceWitness {
    double value = 0.0;
    int axis = 1;
    std::vector<int> off_indices;  // r-1 entries, ascending axis order

    /// Unit tuple realizing the witness: basis vectors off-axis, the
    /// normalized fiber on the witness axis.
    UnitVectorTuple tuple(const CoeffTensor& t) const;
};

SliceWitness slice_witness(const CoeffTensor& t);
/// Shape-checked variant for samples drawn against coefficients b.
SliceWitness slice_witness(const TensorSample& sample, const CoeffTensor& b);

/// Realized l2 norm of one fixed fiber (1-based axis and off-axis tuple).
double fiber_norm(const CoeffTensor& t, int axis, std::span<const int> off_indices);

int default_num_starts(int order, int dim);

}  // namespace injnorm
