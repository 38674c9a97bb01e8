#include "ckls/drift.hpp"

#include <cmath>

namespace ckls {

namespace {

void check_beta(double beta) {
    if (!(beta >= 0.5) || !(beta < 1.0)) {
        throw InvalidParameter("beta must lie in [0.5, 1); got " + std::to_string(beta));
    }
}

} // namespace

std::string to_string(DriftEstimatorKind kind) {
    switch (kind) {
        case DriftEstimatorKind::mle_joint: return "mle_joint";
        case DriftEstimatorKind::mle_a_given_b: return "mle_a_given_b";
        case DriftEstimatorKind::mle_b_given_a: return "mle_b_given_a";
        case DriftEstimatorKind::alt_joint: return "alt_joint";
    }
    return "unknown";
}

DriftEstimate mle_joint(const SamplePath& path, double beta) {
    check_beta(beta);
    const PathFunctionals f(path);
    const double r_m2b = f.riemann(-2.0 * beta);
    const double r_1m2b = f.riemann(1.0 - 2.0 * beta);
    const double r_2m2b = f.riemann(2.0 - 2.0 * beta);
    const double i_m2b = f.ito(-2.0 * beta);
    const double i_1m2b = f.ito(1.0 - 2.0 * beta);

    const double d = r_m2b * r_2m2b - r_1m2b * r_1m2b;
    if (d <= kDegeneracyRelTol * (r_m2b * r_2m2b)) {
        throw DegenerateDenominator(
            "joint MLE denominator is not positive; the path is constant or "
            "nearly so (D = " + std::to_string(d) + ")");
    }
    DriftEstimate est;
    est.a_hat = (i_m2b * r_2m2b - i_1m2b * r_1m2b) / d;
    est.b_hat = (i_m2b * r_1m2b - i_1m2b * r_m2b) / d;
    est.kind = DriftEstimatorKind::mle_joint;
    est.denominator = d;
    est.horizon = f.horizon();
    return est;
}

DriftEstimate mle_b_given_a(const SamplePath& path, double a, double beta) {
    check_beta(beta);
    const PathFunctionals f(path);
    const double r_2m2b = f.riemann(2.0 - 2.0 * beta);
    if (!(r_2m2b > 0.0)) { // only an all-zero path can get here
        throw DegenerateDenominator("integral of r^{2-2 beta} is not positive");
    }
    DriftEstimate est;
    est.a_hat = a;
    est.b_hat = (a * f.riemann(1.0 - 2.0 * beta) - f.ito(1.0 - 2.0 * beta)) / r_2m2b;
    est.kind = DriftEstimatorKind::mle_b_given_a;
    est.denominator = r_2m2b;
    est.horizon = f.horizon();
    return est;
}

DriftEstimate mle_a_given_b(const SamplePath& path, double b, double beta) {
    check_beta(beta);
    const PathFunctionals f(path);
    const double r_m2b = f.riemann(-2.0 * beta);
    if (!(r_m2b > 0.0)) {
        throw DegenerateDenominator("integral of r^{-2 beta} is not positive");
    }
    DriftEstimate est;
    est.a_hat = (b * f.riemann(1.0 - 2.0 * beta) + f.ito(-2.0 * beta)) / r_m2b;
    est.b_hat = b;
    est.kind = DriftEstimatorKind::mle_a_given_b;
    est.denominator = r_m2b;
    est.horizon = f.horizon();
    return est;
}

DriftEstimate alt_joint(const SamplePath& path, double sigma, double beta) {
    check_beta(beta);
    if (!(sigma > 0.0)) {
        throw InvalidParameter("sigma must be > 0; got " + std::to_string(sigma));
    }
    const PathFunctionals f(path);
    const double T = f.horizon();
    const double r_1 = f.riemann(1.0);
    const double r_2m2b = f.riemann(2.0 - 2.0 * beta);
    const double r_3m2b = f.riemann(3.0 - 2.0 * beta);

    const double d = T * r_3m2b - r_1 * r_2m2b;
    if (std::abs(d) <= kDegeneracyRelTol * (T * r_3m2b)) {
        throw DegenerateDenominator(
            "ergodic-moment denominator vanished; the path is constant or "
            "nearly so (D = " + std::to_string(d) + ")");
    }
    const double scale = sigma * sigma * (1.0 - beta);
    DriftEstimate est;
    est.a_hat = scale * r_1 * r_1 / d;
    est.b_hat = scale * T * r_1 / d;
    est.kind = DriftEstimatorKind::alt_joint;
    est.denominator = d;
    est.horizon = T;
    return est;
}

double log_likelihood(const SamplePath& path, double a, double b, double sigma,
                      double beta) {
    check_beta(beta);
    if (!(sigma > 0.0)) {
        throw InvalidParameter("sigma must be > 0; got " + std::to_string(sigma));
    }
    const PathFunctionals f(path);
    const double inv_s2 = 1.0 / (sigma * sigma);
    const double score_term = a * f.ito(-2.0 * beta) - b * f.ito(1.0 - 2.0 * beta);
    const double quad_term = a * a * f.riemann(-2.0 * beta) -
                             2.0 * a * b * f.riemann(1.0 - 2.0 * beta) +
                             b * b * f.riemann(2.0 - 2.0 * beta);
    return inv_s2 * score_term - 0.5 * inv_s2 * quad_term;
}

} // namespace ckls
