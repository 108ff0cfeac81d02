#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace injnorm {

/// Identifies one reproducible random stream: the stream consumed for
/// (master_seed, trial_index) is a pure function of both, so parallel
/// trials never share generator state.
struct SampleSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

/// Deterministic random stream keyed by (master, stream_id) through a
/// splitmix-style hash. fork(tag) derives a statistically independent
/// stream from the same key material, which is how per-start and
/// per-purpose sub-streams are produced without shared state.
class RngStream {
public:
    RngStream(std::uint64_t master, std::uint64_t stream_id);
    explicit RngStream(const SampleSeed& seed) : RngStream(seed.master_seed, seed.trial_index) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                    // [0, 1)
    double gaussian();                   // N(0, 1)
    double rademacher();                 // +1 or -1, equiprobable
    bool bernoulli(double p);
    std::vector<double> unit_vector(int dim);

    RngStream fork(std::uint64_t tag) const { return RngStream(key_, tag); }

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

/// Stream-purpose tags; keeping them distinct means the sampler, the
/// estimator and the symmetrization transform never consume from the
/// same stream even when handed the same SampleSeed.
namespace stream_tag {
inline constexpr std::uint64_t sample = 0x5a4d504cu;
inline constexpr std::uint64_t estimator = 0x45535449u;
inline constexpr std::uint64_t symmetrize = 0x53594d4du;
inline constexpr std::uint64_t process = 0x50524f43u;
}  // namespace stream_tag

}  // namespace injnorm
