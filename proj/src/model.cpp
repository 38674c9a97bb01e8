#include "ckls/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ckls {

ModelParams validate_params(const ModelParams& p) {
    if (!(p.a > 0.0) || !std::isfinite(p.a)) {
        throw InvalidParameter("a must be > 0 (got " + std::to_string(p.a) + ")");
    }
    if (!(p.b > 0.0) || !std::isfinite(p.b)) {
        throw InvalidParameter("b must be > 0 (got " + std::to_string(p.b) + ")");
    }
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
        throw InvalidParameter("sigma must be > 0 (got " + std::to_string(p.sigma) + ")");
    }
    if (!(p.beta >= 0.5) || !(p.beta < 1.0)) {
        throw InvalidParameter("beta must lie in [0.5, 1) (got " +
                               std::to_string(p.beta) + ")");
    }
    if (p.beta == 0.5 && !(2.0 * p.a > p.sigma * p.sigma)) {
        throw InvalidParameter("at beta = 0.5 the condition 2a > sigma^2 must hold "
                               "(got 2a = " + std::to_string(2.0 * p.a) +
                               ", sigma^2 = " + std::to_string(p.sigma * p.sigma) + ")");
    }
    if (!(p.r0 >= 0.0) || !std::isfinite(p.r0)) {
        throw InvalidParameter("r0 must be >= 0 (got " + std::to_string(p.r0) + ")");
    }
    return p;
}

SamplePath SamplePath::prefix(std::size_t n_points) const {
    if (n_points < 2 || n_points > values.size()) {
        throw InvalidParameter("prefix length must be in [2, n_points]");
    }
    return SamplePath{t0, dt, std::vector<double>(values.begin(),
                                                  values.begin() + static_cast<std::ptrdiff_t>(n_points))};
}

SamplePath SamplePath::without_front(std::size_t k) const {
    if (values.size() < k + 2) {
        throw InvalidParameter("without_front would leave fewer than 2 points");
    }
    return SamplePath{t0, dt, std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(k),
                                                  values.end())};
}

void validate_path(const SamplePath& path) {
    if (!(path.dt > 0.0) || !std::isfinite(path.dt)) {
        throw InvalidParameter("path dt must be > 0");
    }
    if (path.values.size() < 2) {
        throw InvalidParameter("path must have at least 2 points");
    }
    for (double v : path.values) {
        if (!std::isfinite(v)) throw InvalidParameter("path values must be finite");
    }
}

double euler_step(const ModelParams& p, double r, double dt, double z) {
    const double drift = (p.a - p.b * r) * dt;
    const double vol = p.sigma * std::pow(std::max(r, 0.0), p.beta) * std::sqrt(dt);
    return std::max(0.0, r + drift + vol * z);
}

SamplePath simulate_path(const ModelParams& p, double T, std::size_t n_steps,
                         const RngSpec& rng, std::uint64_t replicate_index,
                         NoiseMode mode) {
    validate_params(p);
    validate_rng_spec(rng);
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidParameter("T must be > 0");
    if (n_steps < 1) throw InvalidParameter("n_steps must be >= 1");

    const double dt = T / static_cast<double>(n_steps);
    rng::SplitMix64 stream(rng::derive_stream_seed(rng.master_seed, replicate_index));

    SamplePath path;
    path.t0 = 0.0;
    path.dt = dt;
    path.values.reserve(n_steps + 1);
    double r = p.r0;
    path.values.push_back(r);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double z = (mode == NoiseMode::zero) ? 0.0 : stream.next_normal();
        r = euler_step(p, r, dt, z);
        if (!std::isfinite(r)) {
            throw NonFinite("simulated value became non-finite at step " +
                            std::to_string(k + 1));
        }
        path.values.push_back(r);
    }
    return path;
}

} // namespace ckls
