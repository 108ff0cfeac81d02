#pragma once

#include <string>

#include "injnorm/rng.hpp"
#include "injnorm/tensor.hpp"

namespace injnorm {

enum class ModelKind { gaussian, bounded, bernoulli };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

/// One of the three independent-entry random tensor models:
///   gaussian:  entry = b * g,              g standard normal
///   bounded:   entry = K * shape * sign,   sign Rademacher, shape in [0,1]
///   bernoulli: entry = Ber(p) - p,         p in [0,1] (centered)
class ModelSpec {
public:
    static ModelSpec gaussian(CoeffTensor b);
    static ModelSpec bounded(double K, CoeffTensor shape);
    static ModelSpec bernoulli(CoeffTensor p);

    ModelKind kind() const { return kind_; }
    double bound_K() const { return K_; }
    const CoeffTensor& tensor() const { return tensor_; }
    int order() const { return tensor_.order(); }
    int dim() const { return tensor_.dim(); }

    /// Per-entry standard deviation sqrt(E X^2): |b|, K*shape, sqrt(p - p^2).
    CoeffTensor stddev_tensor() const;

private:
    ModelSpec(ModelKind kind, double K, CoeffTensor tensor);

    ModelKind kind_;
    double K_;
    CoeffTensor tensor_;
};

/// One realization of a random tensor model.
struct TensorSample {
    CoeffTensor values;
    SampleSeed seed;
    std::string provenance;
};

TensorSample sample_gaussian(const CoeffTensor& b, const SampleSeed& seed);
TensorSample sample_bernoulli_centered(const CoeffTensor& p, const SampleSeed& seed);
TensorSample sample_bounded(double K, const CoeffTensor& shape, const SampleSeed& seed);
TensorSample sample_model(const ModelSpec& spec, const SampleSeed& seed);

/// Entrywise product with fresh standard Gaussians from the seed's
/// symmetrization stream; used to compare E||X|| against
/// sqrt(2 pi) * E||g o X||.
TensorSample symmetrize_sample(const TensorSample& x, const SampleSeed& seed);

}  // namespace injnorm
