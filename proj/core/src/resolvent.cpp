#include "trispec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trispec/errors.hpp"
#include "linfit.hpp"

namespace trispec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

GammaEstimate estimate_gamma(const RecurrenceTrace& trace, double condition_tol) {
    const int n_max = trace.n_max;
    if (n_max < 32) throw std::invalid_argument("estimate_gamma: trace must have n_max >= 32");

    // Normal equation for argmin_g sum |q_n g - p_n|^2 h_n^2, with every term
    // rescaled by the largest weighted magnitude so growth-dominated windows
    // stay representable.
    double peak = -kInf;
    std::vector<double> lq(n_max + 1), lp(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        lq[n] = trace.q[n].log_abs() + trace.log_h[n];
        lp[n] = trace.p[n].log_abs() + trace.log_h[n];
        if (std::isfinite(lq[n])) peak = std::max(peak, lq[n]);
        if (std::isfinite(lp[n])) peak = std::max(peak, lp[n]);
    }
    if (peak == -kInf)
        throw IllConditionedError("estimate_gamma: all weighted values vanished", kInf);

    cplx num{0.0, 0.0};
    double den = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        if (trace.q[n].is_zero()) continue;
        const double wq = std::exp(lq[n] - peak);
        const cplx uq = (trace.q[n].m / std::abs(trace.q[n].m)) * wq;
        den += wq * wq;
        if (!trace.p[n].is_zero()) {
            const double wp = std::exp(lp[n] - peak);
            const cplx up = (trace.p[n].m / std::abs(trace.p[n].m)) * wp;
            num += std::conj(uq) * up;
        }
    }
    GammaEstimate est;
    est.condition = (den > 0.0) ? 1.0 / den : kInf;
    if (!(den > condition_tol))
        throw IllConditionedError(
            "estimate_gamma: normal equation denominator below threshold", est.condition);
    est.gamma = num / den;

    // Tail misfit over [N/2, N], normalized by the p-mass of the window.
    double mis = 0.0, ref = 0.0;
    for (int n = n_max / 2; n <= n_max; ++n) {
        const ScaledComplex r = trace.q[n] * est.gamma - trace.p[n];
        const double lr = r.log_abs() + trace.log_h[n];
        if (std::isfinite(lr)) mis += std::exp(2.0 * (lr - peak));
        if (std::isfinite(lp[n])) ref += std::exp(2.0 * (lp[n] - peak));
    }
    est.residual = (ref > 0.0) ? mis / ref : mis;
    return est;
}

ResolventEntry resolvent_entry(const RecurrenceTrace& trace, const RemainderTrace& rem,
                               int i, int j) {
    if (i < 0 || j < 0 || i > trace.n_max || j > trace.n_max)
        throw std::out_of_range("resolvent_entry: index out of range");
    ResolventEntry e;
    e.i = i;
    e.j = j;
    if (i <= j)
        e.value = trace.q[i] * rem.r[j] / trace.prod_a[j];
    else
        e.value = rem.r[i] * trace.q[j] / trace.prod_a[j];
    return e;
}

DecayFit decay_fit(const RecurrenceTrace& trace, const RemainderTrace& rem,
                   const DecayFitParams& params) {
    const int n_max = trace.n_max;
    DecayFit fit;
    const int band = n_max / 2;      // diagonal positions m in [0, band]
    const int k_max = n_max - band;  // offsets
    fit.window_lo = 0;
    fit.window_hi = band;

    std::vector<double> lq(n_max + 1), lr(n_max + 1), ld(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        lq[n] = trace.q[n].log_abs() + trace.log_h[n];
        lr[n] = rem.r[n].log_abs() + trace.log_h[n];
        ld[n] = trace.prod_a[n].log_abs() + 2.0 * trace.log_h[n];
    }

    std::vector<double> off_max(k_max + 1, -kInf);
    int usable = 0;
    for (int k = 0; k <= k_max; ++k) {
        double best = -kInf;
        for (int m = 0; m + k <= n_max && m <= band; ++m) {
            const double upper = lq[m] + lr[m + k] - ld[m + k];  // row m, column m+k
            const double lower = lr[m + k] + lq[m] - ld[m];      // row m+k, column m
            best = std::max({best, upper, lower});
        }
        off_max[k] = best;
        if (std::isfinite(best)) ++usable;
    }

    fit.offsets = usable;
    if (fit.offsets < params.min_offsets) {
        fit.verdict = DecayFit::Verdict::InsufficientData;
        return fit;
    }

    // Periodic coefficients wobble within a period by the coefficient ratio;
    // that factor belongs to the envelope constant, not to the misfit, so the
    // regression runs on per-period maxima of the offset sequence.
    const int period = std::max(1, trace.model.spec().period);
    std::vector<double> xs, ys;
    for (int k0 = 0; k0 <= k_max; k0 += period) {
        double best = -kInf;
        for (int k = k0; k <= std::min(k_max, k0 + period - 1); ++k)
            best = std::max(best, off_max[k]);
        if (std::isfinite(best)) {
            xs.push_back(k0 + (period - 1) / 2.0);
            ys.push_back(best);
        }
    }
    if (xs.size() < 2) {
        fit.verdict = DecayFit::Verdict::InsufficientData;
        return fit;
    }
    const auto line = detail::fit_line(xs, ys);
    fit.q = std::exp(line.slope);
    fit.c = std::exp(line.intercept);
    fit.rms_residual = line.rms;
    fit.verdict = (fit.q <= params.q_max && fit.rms_residual <= params.rms_max)
                      ? DecayFit::Verdict::Geometric
                      : DecayFit::Verdict::NotGeometric;
    return fit;
}

ComplexMatrix finite_section_inverse(const OperatorModel& model, cplx lambda, int n) {
    if (n < 1) throw std::invalid_argument("finite_section_inverse: n must be >= 1");

    // lambda I - A_n in the orthonormal basis
    ComplexMatrix m;
    m.n = n;
    m.data.assign(static_cast<size_t>(n) * n, cplx{0.0, 0.0});
    double max_abs = 0.0;
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = lambda - model.beta(i);
        max_abs = std::max(max_abs, std::abs(m.at(i, i)));
        if (i + 1 < n) {
            m.at(i, i + 1) = -model.gamma(i);
            m.at(i + 1, i) = -model.alpha(i + 1);
            max_abs = std::max({max_abs, std::abs(m.at(i, i + 1)), std::abs(m.at(i + 1, i))});
        }
    }
    const double pivot_floor = 1e-12 * max_abs;

    // LU with partial pivoting, in place
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double piv_mag = std::abs(m.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double mag = std::abs(m.at(r, col));
            if (mag > piv_mag) {
                piv = r;
                piv_mag = mag;
            }
        }
        if (!(piv_mag > pivot_floor))
            throw SingularTruncationError(
                "finite_section_inverse: pivot below threshold at index " +
                    std::to_string(col),
                col);
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(m.at(piv, c), m.at(col, c));
            std::swap(perm[piv], perm[col]);
        }
        const cplx inv_p = cplx{1.0, 0.0} / m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const cplx f = m.at(r, col) * inv_p;
            m.at(r, col) = f;
            for (int c = col + 1; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
        }
    }

    // Solve for each unit column of the permuted identity.
    ComplexMatrix inv;
    inv.n = n;
    inv.data.assign(static_cast<size_t>(n) * n, cplx{0.0, 0.0});
    std::vector<cplx> x(n);
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) x[i] = (perm[i] == col) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        for (int i = 0; i < n; ++i)  // forward, unit lower triangle
            for (int k = 0; k < i; ++k) x[i] -= m.at(i, k) * x[k];
        for (int i = n - 1; i >= 0; --i) {  // backward
            for (int k = i + 1; k < n; ++k) x[i] -= m.at(i, k) * x[k];
            x[i] /= m.at(i, i);
        }
        for (int i = 0; i < n; ++i) inv.at(i, col) = x[i];
    }
    return inv;
}

const char* label_name(PointLabel label) {
    switch (label) {
        case PointLabel::Resolvent: return "resolvent";
        case PointLabel::Eigenvalue: return "eigenvalue";
        case PointLabel::Spectrum: return "spectrum";
        case PointLabel::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

PointClassification classify_point(const OperatorModel& model, cplx lambda,
                                   const ClassifyParams& params) {
    if (params.n_max < 64)
        throw std::invalid_argument("classify_point: params.n_max must be >= 64");

    PointClassification pc;
    pc.lambda = lambda;
    pc.params = params;

    const RecurrenceTrace trace = evaluate_qp(model, lambda, params.n_max);
    const SeriesVerdict sv = eigen_series_test(trace, params.series);
    pc.series = {sv.verdict, sv.tail_ratio, sv.window};
    pc.growth = growth_exponent(trace);

    if (sv.verdict == SeriesResult::Converges) {
        pc.label = PointLabel::Eigenvalue;
        return pc;
    }

    try {
        pc.gamma = estimate_gamma(trace, params.gamma_condition_tol);
    } catch (const IllConditionedError& e) {
        pc.label = PointLabel::Indeterminate;
        pc.note = e.what();
        return pc;
    }

    const RemainderTrace rem = evaluate_remainder(trace, pc.gamma->gamma);
    pc.decay = decay_fit(trace, rem, params.decay);

    if (pc.decay->verdict == DecayFit::Verdict::Geometric && pc.growth > 1.0 &&
        sv.verdict == SeriesResult::Diverges) {
        pc.label = PointLabel::Resolvent;
        return pc;
    }
    if (pc.growth <= 1.0 + params.growth_margin && sv.verdict != SeriesResult::Converges) {
        pc.label = PointLabel::Spectrum;
        return pc;
    }
    pc.label = PointLabel::Indeterminate;
    return pc;
}

}  // namespace trispec
