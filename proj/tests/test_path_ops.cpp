#include <doctest.h>

#include <cmath>
#include <vector>

#include "ckls/model.hpp"
#include "ckls/path_ops.hpp"
#include "ckls/rng.hpp"

using namespace ckls;

namespace {

SamplePath linear_path(double slope, double intercept, double dt, std::size_t n) {
    std::vector<double> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        v[k] = intercept + slope * dt * static_cast<double>(k);
    }
    return {0.0, dt, std::move(v)};
}

SamplePath constant_path(double c, double dt, std::size_t n) {
    return {0.0, dt, std::vector<double>(n + 1, c)};
}

SamplePath random_positive_path(std::uint64_t seed, std::size_t n, double dt) {
    rng::SplitMix64 g(seed);
    std::vector<double> v(n + 1);
    double x = 1.0;
    for (auto& val : v) {
        x = std::max(0.05, x + 0.3 * g.next_normal() * std::sqrt(dt));
        val = x;
    }
    return {0.0, dt, std::move(v)};
}

} // namespace

TEST_CASE("riemann_integral basics") {
    const SamplePath p = linear_path(1.0, 1.0, 0.25, 4); // r_t = 1 + t on [0,1]

    CHECK(riemann_integral(p, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(riemann_integral(constant_path(2.0, 0.1, 10), 3.0) ==
          doctest::Approx(8.0).epsilon(1e-14)); // c^mu * T = 2^3 * 1

    // Straddling-cell proration uses the left-point value:
    // 1*0.25 + 1.25*0.05 = 0.3125.
    CHECK(riemann_integral(p, 1.0, 0.3) == doctest::Approx(0.3125).epsilon(1e-14));

    CHECK_THROWS_AS(riemann_integral(p, 1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(riemann_integral(p, 1.0, 1.5), InvalidParameter);
}

TEST_CASE("riemann_integral of 1+t on [0,1] at dt = 2^-16") {
    const std::size_t n = 1u << 16;
    const SamplePath p = linear_path(1.0, 1.0, 1.0 / static_cast<double>(n), n);
    CHECK(riemann_integral(p, 1.0) == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("zero values with negative powers are an error") {
    SamplePath p{0.0, 0.1, {1.0, 0.0, 2.0}};
    CHECK_THROWS_AS(riemann_integral(p, -1.0), ZeroValueNegativePower);
    CHECK_THROWS_AS(ito_integral(p, -0.5), ZeroValueNegativePower);
    // Nonnegative powers are fine.
    CHECK_NOTHROW(riemann_integral(p, 1.0));
    // A zero before t_hi = 0.1 is not touched by the left-point rule over
    // the first cell only.
    CHECK(riemann_integral(p, -1.0, 0.1) == doctest::Approx(0.1));
}

TEST_CASE("ito_integral telescoping and constant cases") {
    const SamplePath p = random_positive_path(99, 500, 1e-3);
    CHECK(ito_integral(p, 0.0) ==
          doctest::Approx(p.values.back() - p.values.front()).epsilon(1e-13));
    CHECK(ito_integral(constant_path(1.7, 0.01, 50), 2.3) == 0.0);
}

TEST_CASE("discrete product-rule identity for mu = 1") {
    // sum r_k d_k = (r_T^2 - r_0^2 - sum d_k^2) / 2 exactly.
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 17ULL, 101ULL}) {
        const SamplePath p = random_positive_path(seed, 800, 1e-3);
        const double lhs = ito_integral(p, 1.0);
        const double r0 = p.values.front();
        const double rT = p.values.back();
        const double rhs = 0.5 * (rT * rT - r0 * r0 - quadratic_variation(p));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("quadratic variation basics") {
    CHECK(quadratic_variation(constant_path(3.0, 0.1, 20)) == 0.0);

    const std::size_t n = 64;
    const SamplePath lin = linear_path(1.0, 0.0, 1.0 / n, n); // r_t = t
    CHECK(quadratic_variation(lin) == doctest::Approx(1.0 / n).epsilon(1e-12));

    // Monotone in the horizon.
    const SamplePath p = random_positive_path(5, 300, 1e-2);
    double prev = 0.0;
    for (double t = 0.3; t <= 3.0; t += 0.3) {
        const double qv = quadratic_variation(p, t);
        CHECK(qv >= prev);
        prev = qv;
    }
}

TEST_CASE("realized QV matches sigma^2 int r^2beta dt on a fine grid") {
    const ModelParams mp{3.0, 2.0, 1.0, 0.7, 1.0};
    RngSpec rng;
    rng.master_seed = 4242;
    const SamplePath p = simulate_path(mp, 1.0, 1u << 14, rng, 3);
    const double qv = quadratic_variation(p, 1.0);
    const double target = riemann_integral(p, 2.0 * mp.beta, 1.0);
    CHECK(qv == doctest::Approx(target).epsilon(0.02));
}

TEST_CASE("riemann integral is additive across windows to one cell") {
    const SamplePath p = random_positive_path(11, 400, 0.005);
    const double mu = 1.3;
    for (double t1 : {0.31, 0.5, 1.234}) {
        const double t2 = t1 + 0.437;
        double manual = 0.0;
        for (std::size_t k = 0; k < p.n_cells(); ++k) {
            const double tl = p.time_at(k);
            if (tl >= t1 && tl + p.dt <= t2) manual += std::pow(p.values[k], mu) * p.dt;
        }
        const double window = riemann_integral(p, mu, t2) - riemann_integral(p, mu, t1);
        double max_cell = 0.0;
        for (double v : p.values) max_cell = std::max(max_cell, std::pow(v, mu) * p.dt);
        CHECK(std::abs(window - manual) <= 2.0 * max_cell);
    }
}

TEST_CASE("halving dt halves the left-rule error (zero-noise path)") {
    const ModelParams mp{3.0, 2.0, 1.0, 0.7, 1.0};
    RngSpec rng;
    const double T = 2.0;
    const double mu = 2.0;
    auto integral_at = [&](std::size_t n) {
        const SamplePath p = simulate_path(mp, T, n, rng, 0, NoiseMode::zero);
        return riemann_integral(p, mu, T);
    };
    const double i1 = integral_at(1u << 8);
    const double i2 = integral_at(1u << 9);
    const double i3 = integral_at(1u << 10);
    const double i4 = integral_at(1u << 11);
    const double limit = 2.0 * i4 - i3; // Richardson from the two finest
    const double gap1 = std::abs(i1 - limit);
    const double gap2 = std::abs(i2 - limit);
    CHECK(gap2 <= 0.6 * gap1);
}

TEST_CASE("PathFunctionals caches agree with the free functions") {
    const SamplePath p = random_positive_path(21, 600, 2e-3);
    const PathFunctionals f(p);
    for (double mu : {-1.4, -0.4, 0.0, 0.6, 1.0, 1.6}) {
        CHECK(f.riemann(mu) == riemann_integral(p, mu));
        CHECK(f.ito(mu) == ito_integral(p, mu));
    }
    CHECK(f.riemann(0.0) == doctest::Approx(p.duration()).epsilon(1e-15));

    const auto& cum = f.cumulative_qv();
    REQUIRE(cum.size() == p.values.size());
    CHECK(cum.front() == 0.0);
    for (std::size_t k = 1; k < cum.size(); ++k) CHECK(cum[k] >= cum[k - 1]);
    CHECK(f.qv_at(p.duration()) == doctest::Approx(quadratic_variation(p)));
}
