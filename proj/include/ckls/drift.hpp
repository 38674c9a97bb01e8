#pragma once

#include <string>

#include "ckls/path_ops.hpp"

namespace ckls {

enum class DriftEstimatorKind { mle_joint, mle_a_given_b, mle_b_given_a, alt_joint };

std::string to_string(DriftEstimatorKind kind);

/// Point estimate of the drift pair (a, b) on one observed path.
/// `denominator` records the normalizing quantity actually divided by
/// (always > 0 for a returned estimate); `horizon` is the path duration.
struct DriftEstimate {
    double a_hat = 0.0;
    double b_hat = 0.0;
    DriftEstimatorKind kind = DriftEstimatorKind::mle_joint;
    double denominator = 0.0;
    double horizon = 0.0;
};

/// Joint maximum likelihood estimator of (a, b) from a continuously
/// observed path, discretized with left-point sums:
///
///   a_hat = [I(dr/r^2B) R(2-2B) - I(r^{1-2B}dr) R(1-2B)] / D
///   b_hat = [I(dr/r^2B) R(1-2B) - I(r^{1-2B}dr) R(-2B)]  / D
///   D     = R(-2B) R(2-2B) - R(1-2B)^2,   B = beta,
///
/// where R(mu) and I(mu dr) are the Riemann and Ito functionals of the
/// path. sigma cancels and is not an argument. Throws
/// DegenerateDenominator on (near-)constant paths, where D collapses to
/// the Cauchy-Schwarz equality case.
DriftEstimate mle_joint(const SamplePath& path, double beta);

/// MLE of b when a is known: (a R(1-2B) - I(r^{1-2B}dr)) / R(2-2B).
DriftEstimate mle_b_given_a(const SamplePath& path, double a, double beta);

/// MLE of a when b is known: (b R(1-2B) + I(r^{-2B}dr)) / R(-2B).
DriftEstimate mle_a_given_b(const SamplePath& path, double b, double beta);

/// Ergodic-moment estimator of (a, b); requires sigma (unlike the MLE):
///
///   D~    = T R(3-2B) - R(1) R(2-2B)
///   a_hat = sigma^2 (1-B) R(1)^2 / D~
///   b_hat = sigma^2 (1-B) T R(1) / D~
///
/// so a_hat/b_hat is always the path's time average R(1)/T.
DriftEstimate alt_joint(const SamplePath& path, double sigma, double beta);

/// Log-likelihood of (a, b) for the observed path at the given diffusion
/// parameters; diagnostic only (the estimators above solve its score
/// equations in closed form).
double log_likelihood(const SamplePath& path, double a, double b, double sigma,
                      double beta);

/// Relative threshold below which a denominator counts as degenerate.
inline constexpr double kDegeneracyRelTol = 1e-12;

} // namespace ckls
