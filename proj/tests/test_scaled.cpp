#include <doctest.h>

#include <cmath>
#include <random>

#include "trispec/scaled.hpp"

using trispec::cplx;
using trispec::ScaledComplex;
using trispec::ScaledReal;

TEST_CASE("scaled real normalization and reconstruction") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double v = dist(rng);
        const auto s = ScaledReal::from(v);
        if (v != 0.0) {
            CHECK(std::fabs(s.m) >= 0.5);
            CHECK(std::fabs(s.m) < 2.0);
        }
        CHECK(s.value() == doctest::Approx(v).epsilon(1e-15));
    }
    CHECK(ScaledReal::from(0.0).is_zero());
    CHECK(ScaledReal::from(0.0).e == 0);
    CHECK(ScaledReal::one().value() == 1.0);
}

TEST_CASE("scaled complex arithmetic matches plain arithmetic") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const cplx x{dist(rng), dist(rng)}, y{dist(rng), dist(rng)};
        const auto sx = ScaledComplex::from(x), sy = ScaledComplex::from(y);
        CHECK(std::abs((sx * sy).value() - x * y) <= 1e-14 * std::abs(x * y) + 1e-300);
        CHECK(std::abs((sx + sy).value() - (x + y)) <= 1e-14 * (std::abs(x) + std::abs(y)));
        CHECK(std::abs((sx - sy).value() - (x - y)) <= 1e-14 * (std::abs(x) + std::abs(y)));
        if (std::abs(y) > 1e-12)
            CHECK(std::abs((sx / sy).value() - x / y) <= 1e-13 * std::abs(x / y) + 1e-300);
    }
}

TEST_CASE("zero is canonical and absorbing") {
    const ScaledComplex z{};
    CHECK(z.is_zero());
    CHECK((z * ScaledComplex::from({3.0, -1.0})).is_zero());
    CHECK((ScaledComplex::from({3.0, -1.0}) * cplx{0.0, 0.0}).is_zero());
    const auto w = ScaledComplex::from({2.0, 1.0});
    CHECK((z + w).value() == w.value());
    CHECK((w - w).is_zero());
}

TEST_CASE("log_abs tracks huge exponents exactly enough") {
    // (2^1000) * (2^1000) = 2^2000 without overflow
    ScaledReal a{1.0, 1000};
    const auto b = a * a;
    CHECK(b.log_abs() == doctest::Approx(2000.0 * std::log(2.0)).epsilon(1e-14));
    // alignment drops a term ~2^-1200 below the big one
    const ScaledReal big{1.0, 100}, small{1.0, -1200};
    CHECK((big + small).log_abs() == doctest::Approx(big.log_abs()));
}

TEST_CASE("exponent gaps beyond double range still add correctly") {
    const auto x = ScaledComplex{cplx{0.5, 0.0}, 900};
    const auto y = ScaledComplex{cplx{0.5, 0.0}, 880};
    const auto sum = x + y;
    // exact: 2^899 + 2^879 = 2^879 (2^20 + 1)
    CHECK(sum.log_abs() ==
          doctest::Approx(879.0 * std::log(2.0) + std::log(1048577.0)).epsilon(1e-14));
}
