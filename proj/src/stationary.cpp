#include "ckls/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ckls {

namespace {

// exp arguments below this are treated as exact zeros (the integrand
// underflows long before the quadrature needs it).
constexpr double kLogFloor = -745.0;

double exp_or_zero(double arg) {
    return (arg < kLogFloor) ? 0.0 : std::exp(arg);
}

} // namespace

StationaryModel::StationaryModel(const ModelParams& params, quad::Options quadrature)
    : params_(validate_params(params)), quad_(quadrature) {}

double StationaryModel::log_kernel(double x) const {
    const double lx = std::log(x);
    const double one_m2b = 1.0 - 2.0 * params_.beta;
    const double two_m2b = 2.0 - 2.0 * params_.beta;
    // (x^{1-2B} - 1)/(1-2B) via expm1: continuous through B = 1/2, where it
    // becomes log x and the kernel reduces to the gamma shape.
    const double phi1 = (one_m2b == 0.0) ? lx : std::expm1(one_m2b * lx) / one_m2b;
    const double phi2 = std::exp(two_m2b * lx) / two_m2b;
    const double scale = 2.0 / (params_.sigma * params_.sigma);
    return -2.0 * params_.beta * lx + scale * (params_.a * phi1 - params_.b * phi2);
}

double StationaryModel::shifted_integral(double mu, double& shift) const {
    // Locate the exponent's maximum on a log-spaced scan so the integrand
    // exp(arg - shift) stays within range.
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 480; ++i) {
        const double lx = -12.0 * std::log(10.0) + (24.0 * std::log(10.0)) * i / 480.0;
        const double x = std::exp(lx);
        const double arg = log_kernel(x) + mu * lx;
        if (std::isfinite(arg) && arg > best) best = arg;
    }
    shift = best;
    auto integrand = [this, mu, best](double x) {
        if (!(x > 0.0) || std::isinf(x)) return 0.0;
        const double arg = log_kernel(x) + mu * std::log(x) - best;
        return exp_or_zero(arg);
    };
    const quad::Result res = quad::integrate_positive_axis(integrand, quad_);
    return res.value;
}

const StationaryModel::Norm& StationaryModel::norm() const {
    std::call_once(norm_once_, [this]() {
        Norm n;
        n.integral = shifted_integral(0.0, n.shift);
        if (!(n.integral > 0.0) || !std::isfinite(n.integral)) {
            throw QuadratureNotConverged("stationary normalizer did not evaluate "
                                         "to a positive finite value");
        }
        norm_ = n;
    });
    return norm_;
}

double StationaryModel::log_normalizer() const {
    const Norm& n = norm();
    return -(n.shift + std::log(n.integral));
}

double StationaryModel::normalizer() const { return std::exp(log_normalizer()); }

double StationaryModel::density(double x) const {
    if (!(x > 0.0)) throw InvalidParameter("density requires x > 0");
    const Norm& n = norm();
    const double arg = log_kernel(x) - n.shift - std::log(n.integral);
    return exp_or_zero(arg);
}

double StationaryModel::moment(double mu) const {
    const Norm& n = norm();
    if (mu == 0.0) return 1.0;
    double shift = 0.0;
    const double integral = shifted_integral(mu, shift);
    return std::exp(shift - n.shift) * integral / n.integral;
}

AsymptoticCovariance StationaryModel::sigma_matrix() const {
    const double beta = params_.beta;
    const double s2 = params_.sigma * params_.sigma;
    const double m_neg = moment(-2.0 * beta);
    const double m_mid = moment(1.0 - 2.0 * beta);
    const double m_pos = moment(2.0 - 2.0 * beta);

    AsymptoticCovariance out;
    out.sigma_matrix = Sym2{m_neg, -m_mid, m_pos};
    const double det = out.sigma_matrix.det();
    if (!(det > 0.0)) {
        throw SingularSigma("moment matrix determinant " + std::to_string(det) +
                            " is not positive; quadrature failure");
    }
    out.covariance = Sym2{s2 * m_pos / det, s2 * m_mid / det, s2 * m_neg / det};
    out.var_a_given_b = s2 / m_neg;
    out.var_b_given_a = s2 / m_pos;
    return out;
}

} // namespace ckls
