#pragma once

#include <vector>

#include "trispec/operator_model.hpp"
#include "trispec/scaled.hpp"

namespace trispec {

// Values of the convergent denominator polynomials q_n(lambda) and numerator
// polynomials p_n(lambda) of the continued fraction attached to the operator,
// evaluated by the three-term recurrence
//
//   y_{n+1} = (lambda - b_n) y_n - a_n y_{n-1},   n >= 1,
//
// seeded with q_0 = 1, q_1 = lambda - b_0, p_0 = 0, p_1 = 1 (so p_1/q_1 is the
// first convergent 1/(lambda - b_0)).  Everything is carried in power-of-two
// scaled form; `noise` is a running forward-rounding envelope and
// `trust_horizon` the first index where |q_n| has sunk below it, i.e. where a
// decaying q is no longer distinguishable from accumulated roundoff.
struct RecurrenceTrace {
    OperatorModel model;
    cplx lambda;
    int n_max = 0;

    std::vector<ScaledComplex> q, p;       // 0..n_max
    std::vector<ScaledComplex> prod_a;     // prod_a[n] = a_1 ... a_n, prod_a[0] = 1
    std::vector<double> log_h;             // 0..n_max
    std::vector<ScaledReal> h;             // exact scaled products of 1/|gamma|
    std::vector<ScaledReal> noise;         // rounding envelope for q
    int trust_horizon = 0;                 // <= n_max
};

RecurrenceTrace evaluate_qp(const OperatorModel& model, cplx lambda, int n_max);

// Remainders r_n = q_n * gamma - p_n.  The forward combination is kept only
// while it stays above the cancellation floor of |q_n gamma| + |p_n|; past
// that point r is continued with a backward (minimal-solution) sweep matched
// at the last trusted index, because the forward values are pure roundoff
// there while the true remainder keeps decaying.
struct RemainderTrace {
    cplx gamma;
    std::vector<ScaledComplex> r;  // 0..n_max
    int forward_prefix = 0;        // r[0..forward_prefix] came from the forward combination
};

RemainderTrace evaluate_remainder(const RecurrenceTrace& trace, cplx gamma);

// Verdict for summability of |q_n|^2 h_n^2 (the eigenvector criterion).
// log_partial_sums[n] = log sum_{k<=n} |q_k h_k|^2; ratios are judged on the
// trusted window only.
enum class SeriesResult { Converges, Diverges, Indeterminate };

struct SeriesVerdict {
    SeriesResult verdict = SeriesResult::Indeterminate;
    std::vector<double> log_partial_sums;
    double tail_ratio = 0.0;  // s_W / s_{W/2} - 1 on the trusted window
    int window = 0;           // W, the trusted window actually judged
};

struct SeriesThresholds {
    double converge_tol = 1e-6;    // tail ratio at the two checkpoints
    double diverge_factor = 10.0;  // growth per doubling, at two doublings
};

SeriesVerdict eigen_series_test(const RecurrenceTrace& trace,
                                const SeriesThresholds& thr = {});
SeriesVerdict eigen_series_test(const OperatorModel& model, cplx lambda, int n_max,
                                const SeriesThresholds& thr = {});

// limsup estimator: max over the tail window n in [n_max/2, n_max] of
// |q_n h_n|^{1/n}.
double growth_exponent(const RecurrenceTrace& trace);

// Relative residual of the cross identity between q and the remainders,
//   q_{n-1} r_n - q_n r_{n-1} = -(a_1 ... a_{n-1}),
// and of the q/p variant with flipped sign.  Exact arithmetic gives 0.
double casorati_residual(const RecurrenceTrace& trace, const RemainderTrace& rem, int n);
double casorati_residual_qp(const RecurrenceTrace& trace, int n);

}  // namespace trispec
