#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "ckls/model.hpp"

namespace ckls {

/// Left-point Riemann integral of r_t^mu over [0, t_hi]:
///
///     sum_{k : t_k < t_hi} values[k]^mu * (cell length inside [0, t_hi])
///
/// A cell straddling t_hi is prorated with its left-point value.
/// t_hi must lie in (0, T]. Throws ZeroValueNegativePower if mu < 0 and a
/// used grid value is 0.
double riemann_integral(const SamplePath& path, double mu, double t_hi);
double riemann_integral(const SamplePath& path, double mu);

/// Left-point Ito sum over the full grid:
///
///     sum_k values[k]^mu * (values[k+1] - values[k]).
///
/// Same zero-value rule as riemann_integral for mu < 0 (left endpoints).
double ito_integral(const SamplePath& path, double mu);

/// Realized quadratic variation: the sum of squared consecutive
/// increments over grid cells contained in [0, t_hi].
double quadratic_variation(const SamplePath& path, double t_hi);
double quadratic_variation(const SamplePath& path);

/// Number of whole grid cells of `path` contained in [0, t_hi] (t_hi is
/// measured from path.t0).
std::size_t cells_within(const SamplePath& path, double t_hi);

/// Per-path cache of the functionals the estimators consume. Holds a
/// reference to the path, which must outlive the cache. Caches are
/// per-instance; do not share one instance mutably across threads.
class PathFunctionals {
public:
    explicit PathFunctionals(const SamplePath& path);

    /// Cached riemann_integral(path, mu) over the full horizon.
    double riemann(double mu) const;
    /// Cached ito_integral(path, mu).
    double ito(double mu) const;
    /// Quadratic variation over [0, t_hi], from the cached cumulative series.
    double qv_at(double t_hi) const;

    /// Cumulative quadratic-variation series aligned to the grid:
    /// entry k is the QV of the first k cells. Non-decreasing, starts at 0.
    const std::vector<double>& cumulative_qv() const;

    double horizon() const { return path_.duration(); }
    const SamplePath& path() const { return path_; }

private:
    std::pair<double, double> compute_sums(double mu) const; // (riemann, ito)

    const SamplePath& path_;
    mutable std::map<double, std::pair<double, double>> sums_;
    mutable std::vector<double> cum_qv_;
};

} // namespace ckls
