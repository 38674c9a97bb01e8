#include "ckls/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace ckls {
namespace quad {

namespace {

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights, with
// the embedded 7-point Gauss weights on the even-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b;
    double value;
    double error;
};

struct WorseError {
    bool operator()(const Interval& x, const Interval& y) const {
        return x.error < y.error;
    }
};

// One K15/G7 evaluation on [a, b]; the QUADPACK-style rescaled difference
// between the two rules is the error estimate.
Interval gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(center - half * kXgk[j]);
        fv[14 - j] = f(center + half * kXgk[j]);
    }
    fv[7] = f(center);

    double result_k = kWgk[7] * fv[7];
    double result_g = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        result_k += kWgk[j] * (fv[j] + fv[14 - j]);
        if (j % 2 == 1) {
            result_g += kWg[j / 2] * (fv[j] + fv[14 - j]);
        }
    }
    const double mean = 0.5 * result_k;
    double resasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    }
    resasc *= half;

    double err = std::abs(result_k - result_g) * half;
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    return {a, b, result_k * half, err};
}

} // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
    std::priority_queue<Interval, std::vector<Interval>, WorseError> queue;
    Interval whole = gk15(f, a, b);
    double total = whole.value;
    double total_err = whole.error;
    queue.push(whole);
    int count = 1;

    auto converged = [&]() {
        return total_err <= std::max(opts.rel_tol * std::abs(total), opts.abs_floor);
    };

    while (!converged() && count < opts.max_intervals) {
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) { // interval no longer splittable
            queue.push(worst);
            break;
        }
        Interval left = gk15(f, worst.a, mid);
        Interval right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++count;
    }

    if (!converged() && total_err > 1e-8 * std::abs(total)) {
        throw QuadratureNotConverged(
            "adaptive quadrature stalled at " + std::to_string(count) +
            " intervals with error estimate " + std::to_string(total_err) +
            " for value " + std::to_string(total));
    }
    return {total, total_err, count};
}

Result integrate_positive_axis(const std::function<double(double)>& f,
                               const Options& opts) {
    auto folded = [&f](double u) {
        double v = f(u);
        const double x = 1.0 / u;
        const double tail = f(x);
        if (tail != 0.0) v += tail * x * x;
        return v;
    };
    return integrate(folded, 0.0, 1.0, opts);
}

} // namespace quad
} // namespace ckls
