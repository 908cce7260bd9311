#include "trispec/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trispec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// log(e^a + e^b) without leaving the log domain
double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

RecurrenceTrace evaluate_qp(const OperatorModel& model, cplx lambda, int n_max) {
    if (n_max < 1) throw std::invalid_argument("evaluate_qp: n_max must be >= 1");

    RecurrenceTrace t{model, lambda, n_max, {}, {}, {}, {}, {}, {}, 0};
    t.q.resize(n_max + 1);
    t.p.resize(n_max + 1);
    t.prod_a.resize(n_max + 1);
    t.log_h.resize(n_max + 1);
    t.h.resize(n_max + 1);
    t.noise.resize(n_max + 1);

    t.q[0] = ScaledComplex::one();
    t.p[0] = {};
    t.q[1] = ScaledComplex::from(lambda - model.b(0));
    t.p[1] = ScaledComplex::one();

    t.prod_a[0] = ScaledComplex::one();
    for (int n = 1; n <= n_max; ++n) t.prod_a[n] = t.prod_a[n - 1] * model.a(n);

    t.log_h[0] = 0.0;
    t.h[0] = ScaledReal::one();
    for (int n = 0; n < n_max; ++n) {
        const double g = std::abs(model.gamma(n));
        t.log_h[n + 1] = t.log_h[n] - std::log(g);
        t.h[n + 1] = t.h[n] / scaled_abs_from(g);
    }

    t.noise[0] = scaled_abs_from(kEps);
    t.noise[1] = scaled_abs_from(kEps) * (ScaledReal::one() + t.q[1].abs());

    for (int n = 1; n < n_max; ++n) {
        const cplx c = lambda - model.b(n);
        const cplx a = model.a(n);
        t.q[n + 1] = t.q[n] * c - t.q[n - 1] * a;
        t.p[n + 1] = t.p[n] * c - t.p[n - 1] * a;
        t.noise[n + 1] = scaled_abs_from(std::abs(c)) * t.noise[n] +
                         scaled_abs_from(std::abs(a)) * t.noise[n - 1] +
                         scaled_abs_from(kEps) * t.q[n + 1].abs();
    }

    // The window ends at the first pair of consecutive noise-dominated values;
    // isolated exact zeros of q (parity models) do not count.
    t.trust_horizon = n_max;
    for (int n = 2; n <= n_max; ++n) {
        const double floor_n = (scaled_abs_from(4.0) * t.noise[n]).log_abs();
        const double floor_p = (scaled_abs_from(4.0) * t.noise[n - 1]).log_abs();
        if (t.q[n].abs().log_abs() <= floor_n && t.q[n - 1].abs().log_abs() <= floor_p) {
            t.trust_horizon = std::max(0, n - 2);
            break;
        }
    }
    return t;
}

RemainderTrace evaluate_remainder(const RecurrenceTrace& trace, cplx gamma) {
    const int n_max = trace.n_max;
    RemainderTrace rem;
    rem.gamma = gamma;
    rem.r.resize(n_max + 1);

    // Forward combination and its cancellation floor.
    std::vector<ScaledComplex> fwd(n_max + 1);
    const double trust = 1e12 * kEps;  // keep ~4 digits of slack above roundoff
    int last_trusted = 0;
    for (int n = 0; n <= n_max; ++n) {
        fwd[n] = trace.q[n] * gamma - trace.p[n];
        const ScaledReal scale = trace.q[n].abs() * scaled_abs_from(std::abs(gamma)) +
                                 trace.p[n].abs();
        const bool trusted =
            scale.is_zero() || fwd[n].abs().log_abs() >= (scaled_abs_from(trust) * scale).log_abs();
        if (trusted) last_trusted = n;
    }
    rem.forward_prefix = last_trusted;

    if (last_trusted >= n_max) {
        rem.r = std::move(fwd);
        rem.forward_prefix = n_max;
        return rem;
    }

    // The combination collapsed: the true remainder is the minimal solution
    // and only a backward sweep can follow it.  Skip the sweep when there is
    // no growth dichotomy to separate the two solution directions.
    const double s_est = growth_exponent(trace);
    if (s_est < 1.02 || !trace.model.has_bounded_tail() ||
        trace.model.max_index() < n_max + 16) {
        rem.r = std::move(fwd);
        rem.forward_prefix = n_max;
        return rem;
    }

    const double per_step = 2.0 * std::log(s_est);
    const int pad = std::clamp(static_cast<int>(std::ceil(28.0 / per_step)), 16, 4096);
    const int start = n_max + pad;

    // y_{n-1} = ((lambda - b_n) y_n - y_{n+1}) / a_n, seeded (y_{start+1}, y_start) = (0, 1)
    std::vector<ScaledComplex> back(n_max + 1);
    ScaledComplex y_next{};                  // y_{n+1}
    ScaledComplex y_cur = ScaledComplex::one();  // y_n
    if (start <= n_max) back[start] = y_cur;
    for (int n = start; n > last_trusted; --n) {
        const cplx c = trace.lambda - trace.model.b(n);
        const ScaledComplex y_prev =
            (y_cur * c - y_next) / ScaledComplex::from(trace.model.a(n));
        if (n - 1 <= n_max) back[n - 1] = y_prev;
        y_next = y_cur;
        y_cur = y_prev;
    }
    // y_cur now holds y at index last_trusted
    if (y_cur.is_zero()) {
        rem.r = std::move(fwd);
        rem.forward_prefix = n_max;
        return rem;
    }
    const ScaledComplex match = fwd[last_trusted] / y_cur;
    for (int n = 0; n <= last_trusted; ++n) rem.r[n] = fwd[n];
    for (int n = last_trusted + 1; n <= n_max; ++n) rem.r[n] = back[n] * match;
    return rem;
}

namespace {

// Partial sums of |q_n h_n|^2 in the log domain plus the trusted window.
struct SeriesSums {
    std::vector<double> log_sums;
    int window;
};

SeriesSums series_sums(const RecurrenceTrace& trace) {
    SeriesSums s;
    s.log_sums.resize(trace.n_max + 1);
    double acc = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= trace.n_max; ++n) {
        const double lt = 2.0 * (trace.q[n].log_abs() + trace.log_h[n]);
        acc = log_add_exp(acc, lt);
        s.log_sums[n] = acc;
    }
    s.window = trace.trust_horizon;
    return s;
}

}  // namespace

SeriesVerdict eigen_series_test(const RecurrenceTrace& trace, const SeriesThresholds& thr) {
    SeriesVerdict v;
    auto sums = series_sums(trace);
    v.log_partial_sums = std::move(sums.log_sums);
    const int wn = sums.window;
    v.window = wn;
    if (wn < 6) return v;  // too noisy too early to judge anything

    const auto ratio = [&](int hi, int lo) {
        return std::exp(v.log_partial_sums[hi] - v.log_partial_sums[lo]);
    };
    v.tail_ratio = ratio(wn, wn / 2) - 1.0;

    // Converged: judged on the window ending at the deepest point of |q h|.
    // The forward run certifies summability only up to where the terms turn
    // around: an eigenvalue known to finite precision echoes back as late
    // geometric growth seeded at the offset.  The depth gate keeps merely
    // oscillatory sequences (whose dips carry no mass contrast) out.
    int dip = 2;
    double lu_dip = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= wn; ++n) {
        const double lu = trace.q[n].log_abs() + trace.log_h[n];
        if (lu < lu_dip) {
            lu_dip = lu;
            dip = n;
        }
    }
    if (dip >= 6) {
        const double depth = 2.0 * lu_dip - v.log_partial_sums[dip];  // log(t_dip / s_dip)
        if (depth <= std::log(1e-10) &&
            ratio(dip, dip / 2) - 1.0 <= thr.converge_tol &&
            ratio(dip, (3 * dip) / 4) - 1.0 <= thr.converge_tol) {
            v.verdict = SeriesResult::Converges;
            v.window = dip;
            v.tail_ratio = ratio(dip, dip / 2) - 1.0;
            return v;
        }
    }
    // Diverging: at least x10 growth per doubling, at two doublings.
    if (wn >= 8 && ratio(wn / 2, wn / 4) >= thr.diverge_factor &&
        ratio(wn, wn / 2) >= thr.diverge_factor) {
        v.verdict = SeriesResult::Diverges;
        return v;
    }
    return v;
}

SeriesVerdict eigen_series_test(const OperatorModel& model, cplx lambda, int n_max,
                                const SeriesThresholds& thr) {
    if (n_max < 16) throw std::invalid_argument("eigen_series_test: n_max must be >= 16");
    return eigen_series_test(evaluate_qp(model, lambda, n_max), thr);
}

double growth_exponent(const RecurrenceTrace& trace) {
    const int n_max = trace.n_max;
    double best = 0.0;
    for (int n = std::max(1, n_max / 2); n <= n_max; ++n) {
        if (trace.q[n].is_zero()) continue;
        const double lg = trace.q[n].log_abs() + trace.log_h[n];
        best = std::max(best, std::exp(lg / n));
    }
    return best;
}

namespace {

double cross_residual(const ScaledComplex& qm1, const ScaledComplex& xn,
                      const ScaledComplex& qn, const ScaledComplex& xm1,
                      const ScaledComplex& prod, double sign) {
    // | q_{n-1} x_n - q_n x_{n-1} + sign * prod | / |prod|
    const ScaledComplex w = qm1 * xn - qn * xm1;
    const ScaledComplex err = w + ScaledComplex{prod.m * sign, prod.e};
    return std::exp(err.log_abs() - prod.log_abs());
}

}  // namespace

double casorati_residual(const RecurrenceTrace& trace, const RemainderTrace& rem, int n) {
    if (n < 1 || n > trace.n_max) throw std::out_of_range("casorati_residual: bad index");
    return cross_residual(trace.q[n - 1], rem.r[n], trace.q[n], rem.r[n - 1],
                          trace.prod_a[n - 1], +1.0);
}

double casorati_residual_qp(const RecurrenceTrace& trace, int n) {
    if (n < 1 || n > trace.n_max) throw std::out_of_range("casorati_residual_qp: bad index");
    return cross_residual(trace.q[n - 1], trace.p[n], trace.q[n], trace.p[n - 1],
                          trace.prod_a[n - 1], -1.0);
}

}  // namespace trispec
