#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "ckls/rng.hpp"

using namespace ckls;
using rng::SplitMix64;

namespace {

// Independent check of the inverse CDF: the forward normal CDF via erfc.
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

TEST_CASE("splitmix64 matches the reference sequence") {
    SplitMix64 g(0);
    CHECK(g.next_u64() == 0xE220A8397B1DCDAFULL);
    CHECK(g.next_u64() == 0x6E789E6AA1B965F4ULL);
    CHECK(g.next_u64() == 0x06C45D188009454FULL);
}

TEST_CASE("uniform01 stays strictly inside (0,1)") {
    SplitMix64 g(12345);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = g.next_uniform01();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
}

TEST_CASE("normal_icdf inverts the normal CDF") {
    // Dense central grid plus deep tails; erfc is the oracle.
    for (int i = 1; i < 2000; ++i) {
        const double p = i / 2000.0;
        const double z = SplitMix64::normal_icdf(p);
        REQUIRE(normal_cdf(z) == doctest::Approx(p).epsilon(5e-13));
    }
    for (double p : {1e-3, 1e-6, 1e-9, 1e-12, 1e-30, 1e-100, 1e-250}) {
        const double z = SplitMix64::normal_icdf(p);
        CHECK(normal_cdf(z) / p == doctest::Approx(1.0).epsilon(1e-11));
    }
    // Symmetry, restricted to p where 1-p keeps full relative precision.
    for (double p : {0.3, 0.1, 0.01, 1e-3}) {
        CHECK(SplitMix64::normal_icdf(1.0 - p) ==
              doctest::Approx(-SplitMix64::normal_icdf(p)).epsilon(1e-12));
    }
    CHECK(SplitMix64::normal_icdf(0.5) == 0.0);
    CHECK(SplitMix64::normal_icdf(0.975) ==
          doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(SplitMix64::normal_icdf(0.841344746068543) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal draws have the right first moments") {
    SplitMix64 g(777);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = g.next_normal();
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("derived streams are reproducible and distinct") {
    const std::uint64_t s1 = rng::derive_stream_seed(42, 0);
    const std::uint64_t s2 = rng::derive_stream_seed(42, 1);
    const std::uint64_t s3 = rng::derive_stream_seed(43, 0);
    CHECK(s1 == rng::derive_stream_seed(42, 0));
    CHECK(s1 != s2);
    CHECK(s1 != s3);
    SplitMix64 a(s1), b(s2);
    int equal = 0;
    for (int i = 0; i < 64; ++i) {
        if (a.next_u64() == b.next_u64()) ++equal;
    }
    CHECK(equal == 0);
}

TEST_CASE("rng spec tags are frozen") {
    RngSpec ok;
    CHECK_NOTHROW(validate_rng_spec(ok));
    RngSpec bad_alg;
    bad_alg.algorithm = "mt19937";
    CHECK_THROWS_AS(validate_rng_spec(bad_alg), InvalidParameter);
    RngSpec bad_norm;
    bad_norm.normal_method = "box-muller";
    CHECK_THROWS_AS(validate_rng_spec(bad_norm), InvalidParameter);
}
