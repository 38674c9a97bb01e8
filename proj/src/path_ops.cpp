#include "ckls/path_ops.hpp"

#include <cmath>
#include <string>

namespace ckls {

namespace {

// Neumaier compensated accumulator; keeps the long estimator sums exact
// to a few ulp so the noiseless-recovery identities hold at 1e-10.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

double pow_mu(double v, double mu) {
    if (mu == 0.0) return 1.0;
    if (mu == 1.0) return v;
    return std::pow(v, mu);
}

void check_t_hi(const SamplePath& path, double t_hi) {
    const double T = path.duration();
    if (!(t_hi > 0.0) || t_hi > T * (1.0 + 1e-12) + 1e-300) {
        throw InvalidParameter("t_hi must lie in (0, T]; got " + std::to_string(t_hi) +
                               " with T = " + std::to_string(T));
    }
}

} // namespace

std::size_t cells_within(const SamplePath& path, double t_hi) {
    const double raw = t_hi / path.dt;
    // Relative slack so grid-aligned t_hi resolves to the exact cell count.
    auto n = static_cast<std::size_t>(std::floor(raw * (1.0 + 4e-12) + 1e-12));
    return std::min(n, path.n_cells());
}

double riemann_integral(const SamplePath& path, double mu, double t_hi) {
    validate_path(path);
    check_t_hi(path, t_hi);
    const std::size_t n_full = cells_within(path, t_hi);
    // Prorated remainder of a cell straddling t_hi (left-point value).
    const double rest = t_hi - static_cast<double>(n_full) * path.dt;
    const bool use_rest = rest > path.dt * 1e-9 && n_full < path.n_cells();
    const std::size_t n_used = n_full + (use_rest ? 1 : 0);
    if (mu < 0.0) {
        for (std::size_t k = 0; k < n_used; ++k) {
            if (path.values[k] <= 0.0) {
                throw ZeroValueNegativePower(
                    "grid value " + std::to_string(path.values[k]) + " at index " +
                    std::to_string(k) + " with negative exponent mu = " + std::to_string(mu));
            }
        }
    }
    CompensatedSum acc;
    for (std::size_t k = 0; k < n_full; ++k) {
        acc.add(pow_mu(path.values[k], mu) * path.dt);
    }
    if (use_rest) acc.add(pow_mu(path.values[n_full], mu) * rest);
    return acc.value();
}

double riemann_integral(const SamplePath& path, double mu) {
    return riemann_integral(path, mu, path.duration());
}

double ito_integral(const SamplePath& path, double mu) {
    validate_path(path);
    const std::size_t n = path.n_cells();
    if (mu < 0.0) {
        for (std::size_t k = 0; k < n; ++k) {
            if (path.values[k] <= 0.0) {
                throw ZeroValueNegativePower(
                    "grid value " + std::to_string(path.values[k]) + " at index " +
                    std::to_string(k) + " with negative exponent mu = " + std::to_string(mu));
            }
        }
    }
    CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
        acc.add(pow_mu(path.values[k], mu) * (path.values[k + 1] - path.values[k]));
    }
    return acc.value();
}

double quadratic_variation(const SamplePath& path, double t_hi) {
    validate_path(path);
    check_t_hi(path, t_hi);
    const std::size_t n = cells_within(path, t_hi);
    CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = path.values[k + 1] - path.values[k];
        acc.add(d * d);
    }
    return acc.value();
}

double quadratic_variation(const SamplePath& path) {
    return quadratic_variation(path, path.duration());
}

PathFunctionals::PathFunctionals(const SamplePath& path) : path_(path) {
    validate_path(path_);
}

std::pair<double, double> PathFunctionals::compute_sums(double mu) const {
    const std::size_t n = path_.n_cells();
    if (mu < 0.0) {
        for (std::size_t k = 0; k < n; ++k) {
            if (path_.values[k] <= 0.0) {
                throw ZeroValueNegativePower(
                    "grid value " + std::to_string(path_.values[k]) + " at index " +
                    std::to_string(k) + " with negative exponent mu = " + std::to_string(mu));
            }
        }
    }
    CompensatedSum riem;
    CompensatedSum ito;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = pow_mu(path_.values[k], mu);
        riem.add(p * path_.dt);
        ito.add(p * (path_.values[k + 1] - path_.values[k]));
    }
    return {riem.value(), ito.value()};
}

double PathFunctionals::riemann(double mu) const {
    auto it = sums_.find(mu);
    if (it == sums_.end()) it = sums_.emplace(mu, compute_sums(mu)).first;
    return it->second.first;
}

double PathFunctionals::ito(double mu) const {
    auto it = sums_.find(mu);
    if (it == sums_.end()) it = sums_.emplace(mu, compute_sums(mu)).first;
    return it->second.second;
}

const std::vector<double>& PathFunctionals::cumulative_qv() const {
    if (cum_qv_.empty()) {
        const std::size_t n = path_.n_cells();
        cum_qv_.resize(n + 1);
        cum_qv_[0] = 0.0;
        CompensatedSum acc;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = path_.values[k + 1] - path_.values[k];
            acc.add(d * d);
            cum_qv_[k + 1] = acc.value();
        }
    }
    return cum_qv_;
}

double PathFunctionals::qv_at(double t_hi) const {
    check_t_hi(path_, t_hi);
    return cumulative_qv()[cells_within(path_, t_hi)];
}

} // namespace ckls
