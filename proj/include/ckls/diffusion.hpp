#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ckls/path_ops.hpp"

namespace ckls {

/// Layout of the quadratic-variation probe windows.
///
/// Each probe observes the QV increment over [t, t+h]. `points` drives the
/// known-sigma beta estimator and the sigma^2 estimator; `pairs` (s, t)
/// drives the sigma-free beta estimator. h must be a whole number of path
/// grid cells and every window must lie inside [0, T].
struct QvProbeConfig {
    double h = 0.015625; // 2^-6
    std::vector<double> points;
    std::vector<std::pair<double, double>> pairs;

    /// Eight points t_i = i/8 and pairs (i/16, (i+8)/16), i = 1..8, with
    /// h = 2^-6: the layout the reproduction tables use.
    static QvProbeConfig reference_layout();
};

/// Throws InvalidParameter if the probe layout does not fit the path grid.
/// `need_points` / `need_pairs` select which probe lists must be nonempty.
void validate_probe_config(const QvProbeConfig& cfg, const SamplePath& path,
                           bool need_points, bool need_pairs);

enum class DiffusionMethod { beta1, beta2, sigma2 };

std::string to_string(DiffusionMethod method);

/// Estimate of the diffusion parameters. beta_hat is the estimated (or,
/// for the sigma2 method, supplied) exponent; sigma2_hat is present only
/// when the method estimates it.
struct DiffusionEstimate {
    double beta_hat = 0.0;
    std::optional<double> sigma2_hat;
    DiffusionMethod method = DiffusionMethod::beta1;
    QvProbeConfig config;
};

/// Sum threshold under which the log denominators count as degenerate
/// (all probe values too close to 1, or paired values too close together).
inline constexpr double kLogDenominatorTol = 1e-3;

/// beta estimator with sigma known:
///
///   beta1 = sum_i |log(dQV_i / (sigma^2 h))| / (2 sum_i |log r_{t_i}|),
///
/// dQV_i = QV(t_i + h) - QV(t_i). Throws ZeroQvIncrement on a flat window
/// and LogDenominatorNearZero when sum |log r_{t_i}| < kLogDenominatorTol
/// (probe values too close to 1 carry no information about beta; pick
/// times where |log r| is largest).
DiffusionEstimate beta_known_sigma(const SamplePath& path, double sigma,
                                   const QvProbeConfig& cfg);

/// beta estimator with sigma unknown, from window pairs (s_i, t_i):
///
///   beta2 = sum_i |log(dQV_{t_i} / dQV_{s_i})| / (2 sum_i |log(r_{t_i}/r_{s_i})|).
///
/// sigma never enters; scaling all QV increments by a common factor leaves
/// the estimate unchanged.
DiffusionEstimate beta_unknown_sigma(const SamplePath& path, const QvProbeConfig& cfg);

/// sigma^2 estimator with beta known:
///
///   sigma2 = sum_i dQV_i / (h sum_i r_{t_i}^{2 beta}).
DiffusionEstimate sigma2_known_beta(const SamplePath& path, double beta,
                                    const QvProbeConfig& cfg);

/// Whole-horizon variant: QV(T) / integral of r^{2 beta} over [0, T].
double sigma2_global(const SamplePath& path, double beta);

/// Formula kernels on precomputed probe quantities; the path-based
/// estimators above reduce to these.
double beta1_from_quantities(std::span<const double> qv_increments,
                             std::span<const double> probe_values,
                             double sigma2_times_h);
double beta2_from_quantities(std::span<const double> qv_increments_t,
                             std::span<const double> qv_increments_s,
                             std::span<const double> values_t,
                             std::span<const double> values_s);

} // namespace ckls
