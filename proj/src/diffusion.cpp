#include "ckls/diffusion.hpp"

#include <cmath>

namespace ckls {

namespace {

std::size_t probe_index(const SamplePath& path, double t) {
    return cells_within(path, t);
}

double probe_value(const SamplePath& path, double t) {
    const double v = path.values[probe_index(path, t)];
    if (!(v > 0.0)) {
        throw ZeroValueNegativePower("probe value at t = " + std::to_string(t) +
                                     " is not positive");
    }
    return v;
}

void check_window(const SamplePath& path, double t, double h) {
    const double T = path.duration();
    if (!(t > 0.0) || t + h > T * (1.0 + 1e-12)) {
        throw InvalidParameter("probe window [" + std::to_string(t) + ", " +
                               std::to_string(t + h) + "] does not lie inside (0, " +
                               std::to_string(T) + "]");
    }
}

double qv_increment(const PathFunctionals& f, double t, double h) {
    const double d = f.qv_at(t + h) - f.qv_at(t);
    if (!(d > 0.0)) {
        throw ZeroQvIncrement("flat quadratic-variation window at t = " +
                              std::to_string(t));
    }
    return d;
}

} // namespace

QvProbeConfig QvProbeConfig::reference_layout() {
    QvProbeConfig cfg;
    cfg.h = 0.015625;
    for (int i = 1; i <= 8; ++i) {
        cfg.points.push_back(static_cast<double>(i) / 8.0);
        cfg.pairs.emplace_back(static_cast<double>(i) / 16.0,
                               static_cast<double>(i + 8) / 16.0);
    }
    return cfg;
}

std::string to_string(DiffusionMethod method) {
    switch (method) {
        case DiffusionMethod::beta1: return "beta1";
        case DiffusionMethod::beta2: return "beta2";
        case DiffusionMethod::sigma2: return "sigma2";
    }
    return "unknown";
}

void validate_probe_config(const QvProbeConfig& cfg, const SamplePath& path,
                           bool need_points, bool need_pairs) {
    validate_path(path);
    if (!(cfg.h > 0.0)) throw InvalidParameter("probe h must be > 0");
    const double ratio = cfg.h / path.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 || ratio < 1.0 - 1e-6) {
        throw InvalidParameter("probe h = " + std::to_string(cfg.h) +
                               " must be a whole positive multiple of the grid step " +
                               std::to_string(path.dt));
    }
    if (need_points) {
        if (cfg.points.empty()) throw InvalidParameter("probe points must be nonempty");
        for (double t : cfg.points) check_window(path, t, cfg.h);
    }
    if (need_pairs) {
        if (cfg.pairs.empty()) throw InvalidParameter("probe pairs must be nonempty");
        for (const auto& [s, t] : cfg.pairs) {
            if (s == t) throw InvalidParameter("probe pair times must differ");
            check_window(path, s, cfg.h);
            check_window(path, t, cfg.h);
        }
    }
}

double beta1_from_quantities(std::span<const double> qv_increments,
                             std::span<const double> probe_values,
                             double sigma2_times_h) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < qv_increments.size(); ++i) {
        num += std::abs(std::log(qv_increments[i] / sigma2_times_h));
        den += std::abs(std::log(probe_values[i]));
    }
    if (den < kLogDenominatorTol) {
        throw LogDenominatorNearZero(
            "sum |log r_t| = " + std::to_string(den) +
            " is too close to zero; choose probe times where |log r_t| is largest");
    }
    return num / (2.0 * den);
}

double beta2_from_quantities(std::span<const double> qv_increments_t,
                             std::span<const double> qv_increments_s,
                             std::span<const double> values_t,
                             std::span<const double> values_s) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < qv_increments_t.size(); ++i) {
        num += std::abs(std::log(qv_increments_t[i] / qv_increments_s[i]));
        den += std::abs(std::log(values_t[i] / values_s[i]));
    }
    if (den < kLogDenominatorTol) {
        throw LogDenominatorNearZero(
            "sum |log(r_t/r_s)| = " + std::to_string(den) +
            " is too close to zero; paired probe values are nearly equal");
    }
    return num / (2.0 * den);
}

DiffusionEstimate beta_known_sigma(const SamplePath& path, double sigma,
                                   const QvProbeConfig& cfg) {
    if (!(sigma > 0.0)) throw InvalidParameter("sigma must be > 0");
    validate_probe_config(cfg, path, /*need_points=*/true, /*need_pairs=*/false);
    const PathFunctionals f(path);
    std::vector<double> dqv;
    std::vector<double> rv;
    dqv.reserve(cfg.points.size());
    rv.reserve(cfg.points.size());
    for (double t : cfg.points) {
        dqv.push_back(qv_increment(f, t, cfg.h));
        rv.push_back(probe_value(path, t));
    }
    DiffusionEstimate est;
    est.beta_hat = beta1_from_quantities(dqv, rv, sigma * sigma * cfg.h);
    est.method = DiffusionMethod::beta1;
    est.config = cfg;
    return est;
}

DiffusionEstimate beta_unknown_sigma(const SamplePath& path, const QvProbeConfig& cfg) {
    validate_probe_config(cfg, path, /*need_points=*/false, /*need_pairs=*/true);
    const PathFunctionals f(path);
    std::vector<double> dqv_t, dqv_s, rv_t, rv_s;
    for (const auto& [s, t] : cfg.pairs) {
        dqv_s.push_back(qv_increment(f, s, cfg.h));
        dqv_t.push_back(qv_increment(f, t, cfg.h));
        rv_s.push_back(probe_value(path, s));
        rv_t.push_back(probe_value(path, t));
    }
    DiffusionEstimate est;
    est.beta_hat = beta2_from_quantities(dqv_t, dqv_s, rv_t, rv_s);
    est.method = DiffusionMethod::beta2;
    est.config = cfg;
    return est;
}

DiffusionEstimate sigma2_known_beta(const SamplePath& path, double beta,
                                    const QvProbeConfig& cfg) {
    if (!(beta >= 0.0)) throw InvalidParameter("beta must be >= 0");
    validate_probe_config(cfg, path, /*need_points=*/true, /*need_pairs=*/false);
    const PathFunctionals f(path);
    double num = 0.0;
    double den = 0.0;
    for (double t : cfg.points) {
        num += qv_increment(f, t, cfg.h);
        den += std::pow(probe_value(path, t), 2.0 * beta);
    }
    if (!(den > 0.0)) {
        throw InvalidParameter("sum of probe values r^{2 beta} is not positive");
    }
    DiffusionEstimate est;
    est.beta_hat = beta;
    est.sigma2_hat = num / (cfg.h * den);
    est.method = DiffusionMethod::sigma2;
    est.config = cfg;
    return est;
}

double sigma2_global(const SamplePath& path, double beta) {
    const double qv = quadratic_variation(path);
    if (!(qv > 0.0)) throw ZeroQvIncrement("path has zero quadratic variation");
    const double denom = riemann_integral(path, 2.0 * beta);
    if (!(denom > 0.0)) {
        throw InvalidParameter("integral of r^{2 beta} vanishes on this path");
    }
    return qv / denom;
}

} // namespace ckls
