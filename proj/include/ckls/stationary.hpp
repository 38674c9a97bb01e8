#pragma once

#include <mutex>

#include "ckls/model.hpp"
#include "ckls/quadrature.hpp"

namespace ckls {

/// Symmetric 2x2 matrix stored by its distinct entries.
struct Sym2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;

    double det() const { return m11 * m22 - m12 * m12; }
};

/// Asymptotic (co)variances of the drift estimators.
///
/// sigma_matrix holds the ergodic moment matrix
///   [  E[X^-2B]   -E[X^{1-2B}] ]
///   [ -E[X^{1-2B}] E[X^{2-2B}] ]
/// under the stationary law; covariance = sigma^2 * sigma_matrix^{-1} is
/// the limit covariance of sqrt(T) times the joint-MLE error. The scalar
/// fields are the known-parameter limit variances.
struct AsymptoticCovariance {
    Sym2 sigma_matrix;
    Sym2 covariance;
    double var_a_given_b = 0.0; // sigma^2 / E[X^-2B]
    double var_b_given_a = 0.0; // sigma^2 / E[X^{2-2B}]
};

/// Stationary law of the diffusion, evaluated by adaptive quadrature on
/// (0, infinity).
///
/// The density is
///
///   p(x) = G x^{-2B} exp{ (2/sigma^2) (a x^{1-2B}/(1-2B) - b x^{2-2B}/(2-2B)) }
///
/// evaluated in log space through the x = 1 anchored primitive
/// (x^{1-2B} - 1)/(1-2B), which extends continuously to B = 1/2 (where the
/// law is Gamma(2a/sigma^2, rate 2b/sigma^2)); the anchoring constant is
/// absorbed into G. The normalizer is computed lazily, once, under a
/// one-time guard; instances are safe for concurrent moment queries.
class StationaryModel {
public:
    explicit StationaryModel(const ModelParams& params,
                             quad::Options quadrature = quad::Options{});

    const ModelParams& params() const { return params_; }
    const quad::Options& quadrature() const { return quad_; }

    /// Pointwise density value; underflows to 0 at both ends of (0, inf)
    /// without producing NaN. x must be > 0.
    double density(double x) const;

    /// log of the normalizing constant G (of the anchored kernel).
    double log_normalizer() const;
    double normalizer() const;

    /// E[X^mu] under the stationary law, relative error <= 1e-8 (the
    /// integral is finite for every real mu). Throws
    /// QuadratureNotConverged if the tolerance cannot be certified.
    double moment(double mu) const;

    /// Moment matrix and the asymptotic covariances derived from it.
    /// Throws SingularSigma if the computed matrix is not positive
    /// definite (a quadrature failure: the true matrix always is).
    AsymptoticCovariance sigma_matrix() const;

    /// Unnormalized log-density (the anchored kernel exponent).
    double log_kernel(double x) const;

private:
    struct Norm {
        double shift = 0.0;    // max of the kernel exponent over the scan grid
        double integral = 0.0; // integral of exp(kernel - shift)
    };

    const Norm& norm() const;
    double shifted_integral(double mu, double& shift) const;

    ModelParams params_;
    quad::Options quad_;
    mutable std::once_flag norm_once_;
    mutable Norm norm_;
};

} // namespace ckls
