#pragma once

#include <cstdint>
#include <string>

#include "ckls/errors.hpp"

namespace ckls {

/// Identifies the random number generation scheme used by a simulation.
///
/// The pair (algorithm, normal_method) is frozen: "splitmix64" streams with
/// inverse-CDF normal variates ("icdf-rational"). Identical RngSpec plus
/// identical simulation arguments give bit-identical paths; there is no
/// hidden global state and no platform-dependent entropy source.
struct RngSpec {
    std::uint64_t master_seed = 0;
    std::string algorithm = "splitmix64";
    std::string normal_method = "icdf-rational";
};

/// Throws InvalidParameter if the spec names an unknown generator or
/// normal-variate method.
void validate_rng_spec(const RngSpec& spec);

namespace rng {

/// SplitMix64 finalizer (Steele/Lea/Flood mixing function). Bijective on
/// 64-bit integers; used both as the stream output function and to derive
/// per-replicate stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Stream seed for a given (master_seed, stream_key) pair. Distinct keys
/// yield statistically independent SplitMix64 streams.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                           std::uint64_t stream_key) {
    return mix64(master_seed ^ mix64(stream_key + kGolden));
}

/// SplitMix64 sequential generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform draw in the open interval (0, 1): bin centers of a 2^53
    /// partition, so 0 and 1 are never returned and the inverse normal
    /// CDF below is always finite.
    double next_uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw via the inverse CDF.
    double next_normal() { return normal_icdf(next_uniform01()); }

    /// Inverse of the standard normal CDF by piecewise rational
    /// approximation (three regions, degree 7/7), monotone in p with
    /// relative error below 1e-15. p must be in (0,1).
    static double normal_icdf(double p);

private:
    std::uint64_t state_;
};

} // namespace rng
} // namespace ckls
