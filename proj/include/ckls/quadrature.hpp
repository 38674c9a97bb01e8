#pragma once

#include <functional>

#include "ckls/errors.hpp"

namespace ckls {
namespace quad {

struct Options {
    double rel_tol = 1e-10;    // subdivision target, relative to the estimate
    double abs_floor = 1e-300; // below this the integral counts as converged
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;
};

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Splits the worst interval until the accumulated error estimate meets
/// opts.rel_tol * |value| (or the absolute floor); throws
/// QuadratureNotConverged past the interval budget, unless the error is
/// already within 1e-8 relative.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = Options{});

/// Integral of f over (0, infinity), folded onto (0, 1) by splitting at 1
/// and mapping the tail with x = 1/u:
///
///     integral = int_0^1 [ f(u) + f(1/u) / u^2 ] du.
///
/// f must vanish at 0+ and decay superpolynomially at infinity.
Result integrate_positive_axis(const std::function<double(double)>& f,
                               const Options& opts = Options{});

} // namespace quad
} // namespace ckls
