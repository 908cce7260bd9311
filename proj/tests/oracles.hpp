#pragma once

// Independent reference routes used by the tests: the Chebyshev second-kind
// recurrence in extended precision, closed-form growth constants, and an
// adaptive-midpoint quadrature for the resolvent value of the half-circle
// weight.  None of these share code with the library paths they check.

#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;

// U_n by its own three-term recurrence, extended precision.
inline long double cheb_u(int n, long double x) {
    if (n < 0) return 0.0L;
    long double um1 = 0.0L, u = 1.0L;
    for (int k = 0; k < n; ++k) {
        const long double next = 2.0L * x * u - um1;
        um1 = u;
        u = next;
    }
    return u;
}

// Growth constant s(x) = lim U_{n+1}/U_n for x > 1, from the recurrence.
inline double cheb_growth(long double x, int depth = 400) {
    long double um1 = 0.0L, u = 1.0L;
    for (int k = 0; k < depth; ++k) {
        const long double next = 2.0L * x * u - um1;
        um1 = u;
        u = next;
        if (u > 1e4000L) {  // renormalize, ratio is what matters
            um1 /= u;
            u = 1.0L;
        }
    }
    return static_cast<double>(u / um1);
}

// (2/pi) * integral_{-1}^{1} sqrt(1-x^2) / (lambda - x) dx by adaptive
// midpoint refinement with one Richardson correction per accepted interval.
namespace detail {

inline cplx half_circle_f(cplx lambda, double x) {
    return std::sqrt(std::max(0.0, 1.0 - x * x)) / (lambda - x);
}

inline cplx quad_segment(cplx lambda, double a, double b, cplx coarse, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const cplx left = half_circle_f(lambda, 0.5 * (a + m)) * (m - a);
    const cplx right = half_circle_f(lambda, 0.5 * (m + b)) * (b - m);
    const cplx fine = left + right;
    if (depth >= 48 || std::abs(fine - coarse) <= tol)
        return fine + (fine - coarse) / 3.0;
    return quad_segment(lambda, a, m, left, 0.5 * tol, depth + 1) +
           quad_segment(lambda, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

inline cplx phi_quadrature(cplx lambda, double tol = 1e-12) {
    const cplx coarse = detail::half_circle_f(lambda, 0.0) * 2.0;
    const cplx integral = detail::quad_segment(lambda, -1.0, 1.0, coarse, tol, 0);
    return (2.0 / 3.14159265358979323846) * integral;
}

// Closed form 2 (lambda - sqrt(lambda^2 - 1)), branch decaying at infinity.
inline cplx phi_closed_form(cplx lambda) {
    const cplx w = std::sqrt(lambda * lambda - cplx{1.0, 0.0});
    cplx s = lambda + w;
    if (std::abs(s) < 1.0) s = lambda - w;
    return 2.0 / s;
}

// Direct partial sums of |u_n|^2 for a scalar sequence given by the
// Chebyshev-type recurrence u_{n+1} = 2 x u_n - u_{n-1}; used to confirm
// non-summability trends without any library code.
inline std::vector<double> direct_square_sums(double x, int n_max) {
    std::vector<double> sums(n_max + 1);
    long double um1 = 0.0L, u = 1.0L, acc = 1.0L;
    sums[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        const long double next = 2.0L * x * u - um1;
        um1 = u;
        u = next;
        acc += u * u;
        sums[n] = static_cast<double>(acc);
    }
    return sums;
}

}  // namespace oracles
