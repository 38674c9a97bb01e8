#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ckls/errors.hpp"
#include "ckls/rng.hpp"

namespace ckls {

/// Parameters of the mean-reverting diffusion
///
///     dr = (a - b r) dt + sigma r^beta dW.
///
/// The long-run mean is a/b; beta controls the state-elasticity of the
/// volatility. Validity: a, b, sigma > 0, beta in [1/2, 1), and at
/// beta = 1/2 additionally 2a > sigma^2 so the process stays positive.
/// r0 = 0 is admitted (the drift a > 0 lifts the path off zero
/// immediately) but callers estimating with negative powers of r must
/// handle the initial zero observation.
struct ModelParams {
    double a = 3.0;
    double b = 2.0;
    double sigma = 1.0;
    double beta = 0.7;
    double r0 = 1.0;

    double long_run_mean() const { return a / b; }
};

/// Throws InvalidParameter naming the violated constraint; returns p
/// unchanged otherwise.
ModelParams validate_params(const ModelParams& p);

/// A trajectory observed on a uniform time grid t0, t0+dt, ..., t0+N*dt.
struct SamplePath {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    std::size_t n_cells() const { return values.empty() ? 0 : values.size() - 1; }
    double duration() const { return static_cast<double>(n_cells()) * dt; }
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }

    /// First n_points values (n_points >= 2), same origin and step.
    SamplePath prefix(std::size_t n_points) const;
    /// Path with the first k values removed and time re-anchored at t0.
    SamplePath without_front(std::size_t k) const;
};

/// Throws InvalidParameter unless the path has dt > 0, at least two
/// points, and only finite values.
void validate_path(const SamplePath& path);

/// Noise source for simulate_path. `zero` replaces every normal draw by
/// 0, reducing the scheme to the drift ODE; it exists for tests (sigma=0
/// itself is not a valid parameter).
enum class NoiseMode { gaussian, zero };

/// One full-truncation Euler update: drift at the current value,
/// diffusion at max(r,0)^beta, result clamped at 0 so fractional powers
/// stay defined on the next step.
double euler_step(const ModelParams& p, double r, double dt, double z);

/// Simulates the Euler path on [0, T] with n_steps uniform steps.
///
/// values[0] = r0 and each subsequent value comes from euler_step with an
/// independent standard normal draw from the stream derived as
/// derive_stream_seed(rng.master_seed, replicate_index). Deterministic:
/// equal arguments give byte-equal paths. Throws NonFinite if the path
/// overflows (pathological parameters).
SamplePath simulate_path(const ModelParams& p, double T, std::size_t n_steps,
                         const RngSpec& rng, std::uint64_t replicate_index,
                         NoiseMode mode = NoiseMode::gaussian);

} // namespace ckls
