#include "injnorm/models.hpp"

#include <cmath>
#include <utility>

#include "injnorm/errors.hpp"

namespace injnorm {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::gaussian: return "gaussian";
        case ModelKind::bounded: return "bounded";
        case ModelKind::bernoulli: return "bernoulli";
    }
    return "unknown";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "gaussian") return ModelKind::gaussian;
    if (name == "bounded") return ModelKind::bounded;
    if (name == "bernoulli") return ModelKind::bernoulli;
    throw InputError("unknown model variant \"" + name + "\" (expected gaussian, bounded or bernoulli)");
}

ModelSpec::ModelSpec(ModelKind kind, double K, CoeffTensor tensor)
    : kind_(kind), K_(K), tensor_(std::move(tensor)) {}

ModelSpec ModelSpec::gaussian(CoeffTensor b) { return ModelSpec(ModelKind::gaussian, 0.0, std::move(b)); }

ModelSpec ModelSpec::bounded(double K, CoeffTensor shape) {
    if (!(K > 0.0)) throw InputError("bounded model requires K > 0");
    for (const double s : shape.entries())
        if (s < 0.0 || s > 1.0) throw InputError("bounded model shape factors must lie in [0, 1]");
    return ModelSpec(ModelKind::bounded, K, std::move(shape));
}

ModelSpec ModelSpec::bernoulli(CoeffTensor p) {
    for (const double v : p.entries())
        if (v < 0.0 || v > 1.0) throw InputError("bernoulli probabilities must lie in [0, 1]");
    return ModelSpec(ModelKind::bernoulli, 1.0, std::move(p));
}

CoeffTensor ModelSpec::stddev_tensor() const {
    std::vector<double> out(tensor_.entries().begin(), tensor_.entries().end());
    switch (kind_) {
        case ModelKind::gaussian:
            for (auto& v : out) v = std::abs(v);
            break;
        case ModelKind::bounded:
            for (auto& v : out) v = K_ * v;
            break;
        case ModelKind::bernoulli:
            for (auto& v : out) v = std::sqrt(std::max(0.0, v - v * v));
            break;
    }
    return CoeffTensor(tensor_.order(), tensor_.dim(), std::move(out));
}

TensorSample sample_gaussian(const CoeffTensor& b, const SampleSeed& seed) {
    RngStream rng = RngStream(seed).fork(stream_tag::sample);
    std::vector<double> out(b.entries().begin(), b.entries().end());
    for (auto& v : out) v *= rng.gaussian();
    return TensorSample{CoeffTensor(b.order(), b.dim(), std::move(out)), seed, "gaussian"};
}

TensorSample sample_bernoulli_centered(const CoeffTensor& p, const SampleSeed& seed) {
    for (const double v : p.entries())
        if (v < 0.0 || v > 1.0) throw InputError("bernoulli probabilities must lie in [0, 1]");
    RngStream rng = RngStream(seed).fork(stream_tag::sample);
    std::vector<double> out(p.entries().begin(), p.entries().end());
    for (auto& v : out) v = (rng.bernoulli(v) ? 1.0 : 0.0) - v;
    return TensorSample{CoeffTensor(p.order(), p.dim(), std::move(out)), seed, "bernoulli"};
}

TensorSample sample_bounded(double K, const CoeffTensor& shape, const SampleSeed& seed) {
    if (!(K > 0.0)) throw InputError("bounded model requires K > 0");
    RngStream rng = RngStream(seed).fork(stream_tag::sample);
    std::vector<double> out(shape.entries().begin(), shape.entries().end());
    for (auto& v : out) v = K * v * rng.rademacher();
    return TensorSample{CoeffTensor(shape.order(), shape.dim(), std::move(out)), seed,
                        "bounded(K=" + std::to_string(K) + ")"};
}

TensorSample sample_model(const ModelSpec& spec, const SampleSeed& seed) {
    switch (spec.kind()) {
        case ModelKind::gaussian: return sample_gaussian(spec.tensor(), seed);
        case ModelKind::bounded: return sample_bounded(spec.bound_K(), spec.tensor(), seed);
        case ModelKind::bernoulli: return sample_bernoulli_centered(spec.tensor(), seed);
    }
    throw InputError("invalid model kind");
}

TensorSample symmetrize_sample(const TensorSample& x, const SampleSeed& seed) {
    RngStream rng = RngStream(seed).fork(stream_tag::symmetrize);
    std::vector<double> out(x.values.entries().begin(), x.values.entries().end());
    for (auto& v : out) v *= rng.gaussian();
    return TensorSample{CoeffTensor(x.values.order(), x.values.dim(), std::move(out)), seed,
                        "symmetrized:" + x.provenance};
}

}  // namespace injnorm
