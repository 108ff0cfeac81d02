#include "injnorm/rng.hpp"

#include <cmath>

#include "injnorm/errors.hpp"

namespace injnorm {

std::uint64_t RngStream::mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t master, std::uint64_t stream_id)
    : key_(mix(mix(master) ^ mix(stream_id ^ 0x632be59bd9b4e019ull))), engine_(key_) {}

double RngStream::uniform() {
    // 53-bit mantissa; avoids distribution-object state so streams fork cleanly.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    // Marsaglia polar transform on the raw uniform stream.
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

double RngStream::rademacher() { return (engine_() & 1u) ? 1.0 : -1.0; }

bool RngStream::bernoulli(double p) { return uniform() < p; }

std::vector<double> RngStream::unit_vector(int dim) {
    if (dim < 1) throw DimensionError("unit_vector: dim must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (;;) {
        double norm_sq = 0.0;
        for (auto& x : v) {
            x = gaussian();
            norm_sq += x * x;
        }
        if (norm_sq > 1e-200) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& x : v) x *= inv;
            return v;
        }
    }
}

}  // namespace injnorm
