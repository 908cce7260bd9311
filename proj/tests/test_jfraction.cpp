#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "models.hpp"
#include "oracles.hpp"
#include "trispec/errors.hpp"
#include "trispec/jfraction.hpp"

using namespace trispec;
using testmodels::chebyshev;

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

TEST_CASE("first convergent is 1/(lambda - b_0)") {
    std::mt19937 seeds(31);
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = testmodels::random_bounded(seeds());
        const cplx lambda{0.0, 3.0};
        const auto table = convergents(evaluate_qp(m, lambda, 8));
        CHECK(std::abs(table.entries[1].value - 1.0 / (lambda - m.b(0))) <= 1e-14);
    }
}

TEST_CASE("chebyshev convergents at lambda = 1 are 2n/(n+1)") {
    const auto table = convergents(evaluate_qp(chebyshev(), {1.0, 0.0}, 30));
    for (int n = 1; n <= 30; ++n) {
        const double expect = 2.0 * n / (n + 1.0);
        CHECK(!table.entries[n].pole);
        CHECK(std::abs(table.entries[n].value - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("pole markers exactly at odd-index zeros for lambda = 0") {
    // oracle: U_{2n+1}(0) = 0 via the independent recurrence
    for (int n = 0; n <= 10; ++n) CHECK(oracles::cheb_u(2 * n + 1, 0.0L) == 0.0L);

    const auto table = convergents(evaluate_qp(chebyshev(), {0.0, 0.0}, 64));
    for (int n = 0; n <= 64; ++n) {
        if (n % 2 == 1)
            CHECK(table.entries[n].pole);
        else
            CHECK(!table.entries[n].pole);
    }
}

TEST_CASE("remainder diagnostics decay with rate 2 - sqrt3 at lambda = 2") {
    const auto t = evaluate_qp(chebyshev(), {2.0, 0.0}, 200);
    const cplx phi{2.0 * (2.0 - kSqrt3), 0.0};
    const auto d = remainder_diagnostics(t, phi);
    CHECK(d.rate == doctest::Approx(2.0 - kSqrt3).epsilon(0.02));
    // values decrease monotonically once past the first few indices
    for (int n = 5; n < 190; ++n) CHECK(d.log_values[n + 1] < d.log_values[n]);
}

TEST_CASE("remainder diagnostics vanish when phi equals the last convergent") {
    const auto t = evaluate_qp(chebyshev(), {1.7, 0.4}, 64);
    const auto table = convergents(t);
    const cplx phi = table.entries[64].value;
    const auto d = remainder_diagnostics(t, phi);
    // |q_64 phi - p_64| h_64 = 0 at this phi; anything visibly nonzero here
    // would mean the weighted remainder picked up forward roundoff growth
    CHECK(d.values[64] <= 1e-12);
}

TEST_CASE("linear-form remainder equals 2 for all n at lambda = 1, phi = 2") {
    const auto t = evaluate_qp(chebyshev(), {1.0, 0.0}, 128);
    const auto d = remainder_diagnostics(t, {2.0, 0.0});
    for (int n = 0; n <= 128; ++n) CHECK(d.values[n] == 2.0);  // dyadic, exact
    CHECK(d.rate == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("geometric subsequence found at lambda = 2 with rate (2-sqrt3)^2") {
    const auto t = evaluate_qp(chebyshev(), {2.0, 0.0}, 256);
    const cplx phi{2.0 * (2.0 - kSqrt3), 0.0};
    const auto g = geometric_subsequence(convergents(t), phi);
    CHECK(g.verdict == GeometricSubsequence::Verdict::Found);
    const double expect = (2.0 - kSqrt3) / (2.0 + kSqrt3);
    CHECK(g.rate == doctest::Approx(expect).epsilon(0.05));
    CHECK(g.indices.size() == 257);  // whole sequence qualifies
}

TEST_CASE("no geometric envelope for the harmonic-like errors at lambda = 1") {
    const auto t = evaluate_qp(chebyshev(), {1.0, 0.0}, 128);
    const auto g = geometric_subsequence(convergents(t), {2.0, 0.0});
    CHECK(g.verdict == GeometricSubsequence::Verdict::NoneFound);
}

TEST_CASE("constant table: everything at the floor, rate reported at the floor") {
    ConvergentTable table;
    table.lambda = {0.0, 0.0};
    const cplx phi{1.25, -0.5};
    for (int n = 0; n <= 63; ++n) table.entries.push_back({n, phi, false});
    const auto g = geometric_subsequence(table, phi);
    CHECK(g.verdict == GeometricSubsequence::Verdict::Found);
    CHECK(g.indices.size() == 64);
    CHECK(g.rate == 0.0);
}

TEST_CASE("moments of the half-circle weight recover a = 1/4, b = 0") {
    // generated by the forward route, plus the first literals checked by hand
    std::vector<cplx> a(8, cplx{0.25, 0.0}), b(8, cplx{0.0, 0.0});
    const auto ms = jfraction_to_moments(a, b, 8);
    CHECK(ms.c[0] == cplx{1.0, 0.0});
    CHECK(std::abs(ms.c[1]) == 0.0);
    CHECK(ms.c[2] == cplx{0.25, 0.0});
    CHECK(ms.c[4] == cplx{0.125, 0.0});
    CHECK(ms.c[6] == cplx{0.078125, 0.0});

    const auto rec = moments_to_jfraction(ms);
    REQUIRE(rec.a.size() == 8);
    REQUIRE(rec.b.size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(rec.a[i] - cplx{0.25, 0.0}) <= 1e-10);
        CHECK(std::abs(rec.b[i]) <= 1e-10);
    }
}

TEST_CASE("single-pole moment sequence degenerates at level 1") {
    const cplx beta{0.7, 0.2};
    std::vector<cplx> c{{1.0, 0.0}};
    for (int k = 1; k <= 6; ++k) c.push_back(c.back() * beta);
    MomentSequence ms{c};
    try {
        moments_to_jfraction(ms);
        FAIL("expected DegeneracyError");
    } catch (const DegeneracyError& e) {
        CHECK(e.level == 1);
    }
}

TEST_CASE("roundtrip recovers seeded random normal coefficients") {
    std::mt19937 seeds(41);
    for (int trial = 0; trial < 20; ++trial) {
        std::mt19937 rng(seeds());
        std::uniform_int_distribution<int> m_dist(1, 8);
        const int m = m_dist(rng);
        std::vector<cplx> a, b;
        for (int i = 0; i < m; ++i) {
            a.push_back(testmodels::random_in_annulus(rng, 0.1, 1.0));
            b.push_back(testmodels::random_in_annulus(rng, 0.0, 1.0));
        }
        const auto ms = jfraction_to_moments(a, b, m);
        const auto rec = moments_to_jfraction(ms, /*high_precision=*/true);
        REQUIRE(rec.a.size() == static_cast<size_t>(m));
        REQUIRE(rec.b.size() == static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            CHECK(std::abs(rec.a[i] - a[i]) <= 1e-6 * std::max(1.0, std::abs(a[i])));
            CHECK(std::abs(rec.b[i] - b[i]) <= 1e-6 * std::max(1.0, std::abs(b[i])));
        }
    }
}

TEST_CASE("re-expanding recovered coefficients reproduces the moments") {
    std::mt19937 rng(4242);
    std::vector<cplx> a, b;
    for (int i = 0; i < 6; ++i) {
        a.push_back(testmodels::random_in_annulus(rng, 0.2, 1.0));
        b.push_back(testmodels::random_in_annulus(rng, 0.0, 0.8));
    }
    const auto ms = jfraction_to_moments(a, b, 6);
    const auto rec = moments_to_jfraction(ms, true);
    const auto ms2 = jfraction_to_moments(rec.a, rec.b, 6);
    for (size_t k = 0; k < ms.c.size(); ++k)
        CHECK(std::abs(ms2.c[k] - ms.c[k]) <= 1e-8 * std::max(1.0, std::abs(ms.c[k])));
}

TEST_CASE("moments are invariant under enlarging the truncation") {
    // banded locality: c_k only sees indices <= k/2
    std::vector<cplx> a{{0.25, 0.0}, {0.3, 0.1}, {0.2, -0.1}, {0.25, 0.0}};
    std::vector<cplx> b{{0.1, 0.0}, {0.0, 0.2}, {-0.1, 0.0}, {0.0, 0.0}};
    const auto m4 = jfraction_to_moments(a, b, 4);
    // same coefficients padded out to a deeper level list
    std::vector<cplx> a2 = a, b2 = b;
    for (int i = 0; i < 4; ++i) {
        a2.push_back({0.9, 0.0});
        b2.push_back({0.9, 0.0});
    }
    const auto m8 = jfraction_to_moments(a2, b2, 8);
    for (size_t k = 0; k < m4.c.size(); ++k) CHECK(std::abs(m8.c[k] - m4.c[k]) <= 1e-15);
}

TEST_CASE("single level: c_1 = b_0") {
    const auto ms = jfraction_to_moments({cplx{0.25, 0.0}}, {cplx{0.6, -0.3}}, 1);
    CHECK(ms.c[1] == cplx{0.6, -0.3});
}

TEST_CASE("moments csv roundtrip") {
    std::istringstream in("1,0\n0.5,-0.25\n0.125,0\n");
    const auto ms = read_moments_csv(in);
    REQUIRE(ms.c.size() == 3);
    CHECK(ms.c[1] == cplx{0.5, -0.25});

    std::istringstream bad("1,0\nnot-a-number\n");
    CHECK_THROWS_AS(read_moments_csv(bad), std::invalid_argument);
}

TEST_CASE("convergents csv format") {
    const auto t = evaluate_qp(chebyshev(), {2.0, 0.0}, 64);
    const auto table = convergents(t);
    const cplx phi{2.0 * (2.0 - kSqrt3), 0.0};
    const auto fit = geometric_subsequence(table, phi);
    std::ostringstream out;
    write_convergents_csv(out, table, phi, fit);
    const std::string s = out.str();
    CHECK(s.rfind("n,pi_re,pi_im,abs_err\n", 0) == 0);
    CHECK(s.find("# geometric_subsequence: verdict=found") != std::string::npos);
    // one header + 65 rows + one footer
    CHECK(std::count(s.begin(), s.end(), '\n') == 67);
}
