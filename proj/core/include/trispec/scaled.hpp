#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace trispec {

using cplx = std::complex<double>;

// Power-of-two scaled scalars: value = mantissa * 2^exponent with |mantissa| in
// [1/2, 2), or the canonical zero (mantissa 0, exponent 0).  Exponents live in
// int64, so sequences that grow like q^n never overflow no matter how deep the
// recurrence runs.

struct ScaledReal {
    double m = 0.0;
    std::int64_t e = 0;

    static ScaledReal from(double v) {
        if (v == 0.0) return {};
        int ex = 0;
        double f = std::frexp(v, &ex);
        return {f, static_cast<std::int64_t>(ex)};
    }
    static ScaledReal one() { return {0.5, 1}; }

    bool is_zero() const { return m == 0.0; }

    double value() const {
        if (is_zero()) return 0.0;
        const std::int64_t c = std::clamp<std::int64_t>(e, -2200, 2200);
        return std::ldexp(m, static_cast<int>(c));
    }
    // natural log of |value|; -inf for zero
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::fabs(m)) + static_cast<double>(e) * std::numbers::ln2;
    }

    friend ScaledReal operator*(ScaledReal a, ScaledReal b) {
        if (a.is_zero() || b.is_zero()) return {};
        ScaledReal r = from(a.m * b.m);
        r.e += a.e + b.e;
        return r;
    }
    friend ScaledReal operator/(ScaledReal a, ScaledReal b) {
        if (a.is_zero()) return {};
        ScaledReal r = from(a.m / b.m);
        r.e += a.e - b.e;
        return r;
    }
    friend ScaledReal operator+(ScaledReal a, ScaledReal b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.e < b.e) std::swap(a, b);
        const std::int64_t shift = b.e - a.e;  // <= 0
        if (shift < -1100) return a;
        ScaledReal r = from(a.m + std::ldexp(b.m, static_cast<int>(shift)));
        r.e += a.e;
        return r;
    }
};

inline ScaledReal scaled_abs_from(double v) { return ScaledReal::from(std::fabs(v)); }

struct ScaledComplex {
    cplx m{0.0, 0.0};
    std::int64_t e = 0;

    static ScaledComplex from(cplx v) {
        const double mag = std::abs(v);
        if (mag == 0.0) return {};
        int ex = 0;
        std::frexp(mag, &ex);
        return {cplx{std::ldexp(v.real(), -ex), std::ldexp(v.imag(), -ex)},
                static_cast<std::int64_t>(ex)};
    }
    static ScaledComplex one() { return {cplx{0.5, 0.0}, 1}; }

    bool is_zero() const { return m.real() == 0.0 && m.imag() == 0.0; }

    cplx value() const {
        if (is_zero()) return {0.0, 0.0};
        const std::int64_t c = std::clamp<std::int64_t>(e, -2200, 2200);
        const int ex = static_cast<int>(c);
        return {std::ldexp(m.real(), ex), std::ldexp(m.imag(), ex)};
    }
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(m)) + static_cast<double>(e) * std::numbers::ln2;
    }
    ScaledReal abs() const {
        if (is_zero()) return {};
        ScaledReal r = ScaledReal::from(std::abs(m));
        r.e += e;
        return r;
    }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero() || b.is_zero()) return {};
        ScaledComplex r = from(a.m * b.m);
        r.e += a.e + b.e;
        return r;
    }
    friend ScaledComplex operator*(const ScaledComplex& a, cplx c) {
        if (a.is_zero() || (c.real() == 0.0 && c.imag() == 0.0)) return {};
        ScaledComplex r = from(a.m * c);
        r.e += a.e;
        return r;
    }
    friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero()) return {};
        ScaledComplex r = from(a.m / b.m);
        r.e += a.e - b.e;
        return r;
    }
    friend ScaledComplex operator+(ScaledComplex a, ScaledComplex b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.e < b.e) std::swap(a, b);
        const std::int64_t shift = b.e - a.e;  // <= 0
        if (shift < -1100) return a;
        const int s = static_cast<int>(shift);
        const cplx small{std::ldexp(b.m.real(), s), std::ldexp(b.m.imag(), s)};
        ScaledComplex r = from(a.m + small);
        r.e += a.e;
        return r;
    }
    friend ScaledComplex operator-(const ScaledComplex& a) { return {-a.m, a.e}; }
    friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
        return a + (-b);
    }

    ScaledComplex conj() const { return {std::conj(m), e}; }
};

}  // namespace trispec
