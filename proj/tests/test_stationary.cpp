#include <doctest.h>

#include <cmath>

#include "ckls/path_ops.hpp"
#include "ckls/rng.hpp"
#include "ckls/stationary.hpp"

using namespace ckls;

namespace {

// Closed-form moments of Gamma(shape, rate): E[X^mu] = G(shape+mu)/(G(shape) rate^mu).
double gamma_moment(double shape, double rate, double mu) {
    return std::exp(std::lgamma(shape + mu) - std::lgamma(shape) -
                    mu * std::log(rate));
}

double gamma_pdf(double shape, double rate, double x) {
    return std::exp(shape * std::log(rate) - std::lgamma(shape) +
                    (shape - 1.0) * std::log(x) - rate * x);
}

} // namespace

TEST_CASE("beta = 1/2 reduces to the gamma law") {
    // a=3, b=2, sigma=1: shape 2a/sigma^2 = 6, rate 2b/sigma^2 = 4.
    const StationaryModel m({3.0, 2.0, 1.0, 0.5, 1.0});
    const double shape = 6.0, rate = 4.0;

    CHECK(m.density(1.5) ==
          doctest::Approx(gamma_pdf(shape, rate, 1.5)).epsilon(1e-9));
    CHECK(m.density(1.5) == doctest::Approx(0.642493).epsilon(2e-5));
    CHECK(m.normalizer() ==
          doctest::Approx(std::exp(shape * std::log(rate) - std::lgamma(shape)))
              .epsilon(1e-9));

    for (double mu : {-1.5, -1.0, -0.5, 0.5, 1.0, 2.0, 3.5}) {
        CHECK(m.moment(mu) ==
              doctest::Approx(gamma_moment(shape, rate, mu)).epsilon(1e-7));
    }
    CHECK(m.moment(-1.0) == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(m.moment(1.0) == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("density vanishes at both ends without NaN") {
    const StationaryModel m({3.0, 2.0, 1.0, 0.7, 1.0});
    const double near_zero = m.density(1e-8);
    CHECK(near_zero == 0.0);
    CHECK_FALSE(std::isnan(near_zero));
    CHECK(m.density(1e6) == 0.0);
    CHECK(m.density(1.5) > 0.0);
    CHECK_THROWS_AS(m.density(0.0), InvalidParameter);
}

TEST_CASE("density integrates to one (independent Simpson oracle)") {
    for (double beta : {0.6, 0.75, 0.9}) {
        const StationaryModel m({3.0, 2.0, 1.0, beta, 1.0});
        const double lo = 1e-6, hi = 40.0;
        const int n = 40000; // even
        const double step = (hi - lo) / n;
        double acc = m.density(lo) + m.density(hi);
        for (int i = 1; i < n; ++i) {
            acc += m.density(lo + i * step) * ((i % 2 == 1) ? 4.0 : 2.0);
        }
        const double integral = acc * step / 3.0;
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("ergodic moment identities") {
    for (double a : {1.0, 3.0}) {
        for (double b : {1.0, 2.0}) {
            for (double sigma : {0.5, 1.0}) {
                for (double beta : {0.55, 0.7, 0.95}) {
                    const StationaryModel m({a, b, sigma, beta, 1.0});
                    CHECK(m.moment(0.0) == 1.0);
                    CHECK(b * m.moment(1.0) == doctest::Approx(a).epsilon(1e-7));
                    const double lhs = m.moment(3.0 - 2.0 * beta) -
                                       (a / b) * m.moment(2.0 - 2.0 * beta);
                    const double rhs = sigma * sigma * (1.0 - beta) * a / (b * b);
                    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
                }
            }
        }
    }
}

TEST_CASE("moments are finite for extreme exponents") {
    const StationaryModel m({3.0, 2.0, 1.0, 0.8, 1.0});
    for (double mu : {-4.0, -2.5, 5.0, 8.0}) {
        const double v = m.moment(mu);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
    }
}

TEST_CASE("asymptotic covariance at beta = 1/2 matches the gamma closed form") {
    const StationaryModel m({3.0, 2.0, 1.0, 0.5, 1.0});
    const AsymptoticCovariance cov = m.sigma_matrix();

    CHECK(cov.sigma_matrix.m11 == doctest::Approx(0.8).epsilon(1e-7));
    CHECK(cov.sigma_matrix.m12 == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(cov.sigma_matrix.m22 == doctest::Approx(1.5).epsilon(1e-7));
    CHECK(cov.sigma_matrix.det() == doctest::Approx(0.2).epsilon(1e-6));

    CHECK(cov.covariance.m11 == doctest::Approx(7.5).epsilon(1e-6));
    CHECK(cov.covariance.m12 == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(cov.covariance.m22 == doctest::Approx(4.0).epsilon(1e-6));

    CHECK(cov.var_b_given_a == doctest::Approx(1.0 / 1.5).epsilon(1e-8));
    CHECK(cov.var_a_given_b == doctest::Approx(1.25).epsilon(1e-8));
}

TEST_CASE("the moment matrix is positive definite across parameters") {
    for (double beta : {0.5, 0.6, 0.8, 0.95}) {
        for (double sigma : {0.5, 1.0}) {
            const StationaryModel m({3.0, 2.0, sigma, beta, 1.0});
            const AsymptoticCovariance cov = m.sigma_matrix();
            CHECK(cov.sigma_matrix.m11 > 0.0);
            CHECK(cov.sigma_matrix.m22 > 0.0);
            CHECK(cov.sigma_matrix.det() > 0.0);
            CHECK(cov.covariance.det() > 0.0);
        }
    }
}

TEST_CASE("time averages of a long path approach the moment matrix") {
    const ModelParams p{3.0, 2.0, 1.0, 0.7, 1.5};
    RngSpec rng;
    rng.master_seed = 20240601;
    const double T = 500.0;
    const SamplePath path =
        simulate_path(p, T, static_cast<std::size_t>(T * 256), rng, 0);
    const StationaryModel m(p);
    const AsymptoticCovariance cov = m.sigma_matrix();

    const double a11 = riemann_integral(path, -2.0 * p.beta) / T;
    const double a12 = -riemann_integral(path, 1.0 - 2.0 * p.beta) / T;
    const double a22 = riemann_integral(path, 2.0 - 2.0 * p.beta) / T;
    CHECK(a11 == doctest::Approx(cov.sigma_matrix.m11).epsilon(0.05));
    CHECK(a12 == doctest::Approx(cov.sigma_matrix.m12).epsilon(0.05));
    CHECK(a22 == doctest::Approx(cov.sigma_matrix.m22).epsilon(0.05));
}

TEST_CASE("an exhausted subdivision budget raises QuadratureNotConverged") {
    quad::Options opts;
    opts.max_intervals = 2;
    opts.rel_tol = 1e-14;
    const StationaryModel m({3.0, 2.0, 0.5, 0.8, 1.0}, opts);
    CHECK_THROWS_AS(m.moment(4.0), QuadratureNotConverged);
}
