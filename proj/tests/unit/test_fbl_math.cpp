#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "urllc/error.hpp"
#include "urllc/fbl_math.hpp"

using namespace urllc;

TEST_SUITE("fbl_math") {

TEST_CASE("q_func basic values") {
    CHECK(q_func(0.0) == 0.5);
    CHECK(q_func(10.0) < 1e-23);
    CHECK(q_func(10.0) > 0.0);
    // 0.5 * erfc(2.905 / sqrt 2) at 40 digits: 1.836265501091589523835e-3
    CHECK(q_func(2.905) == doctest::Approx(1.836265501091589523835e-3).epsilon(1e-13));
}

TEST_CASE("q_func agrees with the series/continued-fraction oracle") {
    for (double x = -8.0; x <= 20.0; x += 0.37) {
        const long double ref = oracle::q_tail(x);
        const double got = q_func(x);
        CHECK(std::abs(got - static_cast<double>(ref)) <= 1e-13 * static_cast<double>(ref));
    }
}

TEST_CASE("q_func symmetry and monotonicity") {
    double prev = 1.0;
    for (double x = -6.0; x <= 6.0; x += 0.01) {
        const double v = q_func(x);
        CHECK(v < prev);
        CHECK(q_func(-x) == doctest::Approx(1.0 - v).epsilon(1e-14));
        prev = v;
    }
}

TEST_CASE("q_func rejects non-finite input") {
    CHECK_THROWS_AS(q_func(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(q_func(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("q_inv values") {
    CHECK(q_inv(0.5) == 0.0);
    CHECK(q_inv(q_func(1.7)) == doctest::Approx(1.7).epsilon(1e-12));
    // Bisection on the 40-digit tail: 2.906069624593836644645
    CHECK(q_inv(1.83e-3) == doctest::Approx(2.906069624593836644645).epsilon(1e-12));
    CHECK(q_inv(0.1) > 0.0);
    CHECK(q_inv(0.9) < 0.0);
    CHECK_THROWS_AS(q_inv(0.0), DomainError);
    CHECK_THROWS_AS(q_inv(1.0), DomainError);
    CHECK_THROWS_AS(q_inv(-0.1), DomainError);
}

TEST_CASE("q_inv matches bisection on the oracle") {
    for (double p : {1e-12, 1e-9, 3.3e-7, 1e-5, 1.826e-3, 0.0328, 0.2, 0.45, 0.7, 0.999}) {
        const double ref = static_cast<double>(oracle::q_tail_inverse(p));
        CHECK(q_inv(p) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("q_func(q_inv(p)) roundtrip over [1e-12, 1 - 1e-12]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> exponent(-12.0, std::log10(0.5));
    for (int i = 0; i < 20000; ++i) {
        double p = std::pow(10.0, exponent(rng));
        if (i % 2) {
            p = 1.0 - p;
        }
        const double back = q_func(q_inv(p));
        CHECK(std::abs(back - p) <= 1e-12 * p);
    }
    for (double p : {1e-12, 1.0 - 1e-12}) {
        CHECK(std::abs(q_func(q_inv(p)) - p) <= 1e-12 * p);
    }
}

TEST_CASE("shannon capacity") {
    CHECK(shannon_capacity(1.0) == 1.0);
    CHECK(shannon_capacity(3.0) == 2.0);
    CHECK(shannon_capacity(10.0) == doctest::Approx(3.459431618637297256).epsilon(1e-14));
    CHECK_THROWS_AS(shannon_capacity(0.0), DomainError);
    CHECK_THROWS_AS(shannon_capacity(-1.0), DomainError);
}

TEST_CASE("channel dispersion") {
    const double limit = 1.0 / (std::log(2.0) * std::log(2.0));
    CHECK(limit == doctest::Approx(2.0813689810056077).epsilon(1e-14));
    CHECK(channel_dispersion(10.0) == doctest::Approx(2.064167584468371370).epsilon(1e-14));
    CHECK(channel_dispersion(1e-9) > 0.0);
    CHECK(channel_dispersion(1e-9) < 1e-8);
    CHECK(channel_dispersion(1e9) <= limit);
    CHECK(channel_dispersion(1e3) < limit);
    CHECK(channel_dispersion(1e9) == doctest::Approx(limit).epsilon(1e-9));
    double prev = 0.0;
    for (double g = 1e-3; g < 1e4; g *= 1.3) {
        const double v = channel_dispersion(g);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(channel_dispersion(0.0), DomainError);
}

TEST_CASE("dB conversion") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(3.0) == doctest::Approx(1.995262314968879550).epsilon(1e-14));
    for (double x = -30.0; x <= 30.0; x += 0.7) {
        CHECK(linear_to_db(db_to_linear(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(linear_to_db(0.0), DomainError);
    CHECK_THROWS_AS(linear_to_db(-3.0), DomainError);
}

TEST_CASE("FblContext derives capacity and dispersion") {
    const FblContext ctx(256, 10.0);
    CHECK(ctx.payload_bits() == 256);
    CHECK(ctx.capacity() == shannon_capacity(10.0));
    CHECK(ctx.dispersion() == channel_dispersion(10.0));
    CHECK(ctx.with_sinr(20.0).capacity() == shannon_capacity(20.0));
    CHECK_THROWS_AS(FblContext(0, 10.0), DomainError);
    CHECK_THROWS_AS(FblContext(256, 0.0), DomainError);
}

TEST_CASE("channel_use reproduces reference operating points") {
    const FblContext ctx = FblContext::from_db(256, 10.0);
    CHECK(channel_use(ctx, 0.00183) == doctest::Approx(85.14).epsilon(0.05 / 85.14));
    CHECK(channel_use(ctx, 0.0328) == doctest::Approx(80.88).epsilon(0.05 / 80.88));
    // Against the closed form evaluated in long double on the oracle quantile.
    for (double p : {1e-9, 1e-5, 0.00183, 0.0328, 0.3, 0.49}) {
        const double ref = static_cast<double>(oracle::channel_use_closed_form(256, 10.0L, p));
        CHECK(channel_use(ctx, p) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("channel_use approaches L/C near BLER 0.5") {
    const FblContext ctx(256, 3.0);
    CHECK(channel_use(ctx, 0.5 - 1e-12) == doctest::Approx(128.0).epsilon(1e-9));
    CHECK(channel_use(ctx, 0.5 - 1e-12) > 128.0);
}

TEST_CASE("channel_use rejects BLER outside (0, 0.5)") {
    const FblContext ctx(256, 10.0);
    CHECK_THROWS_AS(channel_use(ctx, 0.5), DomainError);
    CHECK_THROWS_AS(channel_use(ctx, 0.7), DomainError);
    CHECK_THROWS_AS(channel_use(ctx, 0.0), DomainError);
}

TEST_CASE("achieved_bler") {
    const FblContext ctx = FblContext::from_db(256, 10.0);
    // Direct 40-digit evaluation at R = 85.14: 1.825253546839e-3
    CHECK(achieved_bler(ctx, 85.14) == doctest::Approx(1.825253546839075705e-3).epsilon(1e-9));
    CHECK(achieved_bler(ctx, 256.0 / ctx.capacity()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(achieved_bler(ctx, 2 * 85.14) < 1e-9);
    CHECK_THROWS_AS(achieved_bler(ctx, 0.0), DomainError);
}

TEST_CASE("property: finite-blocklength roundtrip and monotonicity") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint32_t> bits(8, 4096);
    std::uniform_real_distribution<double> log_sinr(-1.0, 3.0);
    std::uniform_real_distribution<double> log_p(-9.0, std::log10(0.44));
    for (int i = 0; i < 5000; ++i) {
        const FblContext ctx(bits(rng), std::pow(10.0, log_sinr(rng)));
        const double p = std::pow(10.0, log_p(rng));
        const double r = channel_use(ctx, p);
        const double l = static_cast<double>(ctx.payload_bits());
        const double rebuilt = r * ctx.capacity() - q_inv(p) * std::sqrt(r * ctx.dispersion());
        REQUIRE(std::abs(rebuilt - l) <= 1e-9 * l);
        REQUIRE(r > l / ctx.capacity());
        REQUIRE(achieved_bler(ctx, r) == doctest::Approx(p).epsilon(1e-9));
        // Looser BLER or better SINR needs fewer channel uses.
        REQUIRE(channel_use(ctx, std::min(0.49, p * 1.1)) < r);
        REQUIRE(channel_use(ctx.with_sinr(ctx.sinr_linear() * 1.1), p) < r);
        REQUIRE(achieved_bler(ctx, r * 1.01) < achieved_bler(ctx, r));
    }
}

}
