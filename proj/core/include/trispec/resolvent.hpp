#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trispec/jfraction.hpp"
#include "trispec/recurrence.hpp"

namespace trispec {

// Least-squares recovery of the constant gamma that makes the weighted
// remainder sequence (q_n gamma - p_n) h_n square-summable.  On the resolvent
// set gamma equals the (0,0) resolvent matrix element.
struct GammaEstimate {
    cplx gamma{0.0, 0.0};
    // Tail misfit sum_{n in [N/2, N]} |q_n gamma - p_n|^2 h_n^2, normalized by
    // sum |p_n h_n|^2 over the same window so the number stays finite on
    // growth-dominated windows.  ~0 on the resolvent set, O(1) on the spectrum.
    double residual = 0.0;
    double condition = 0.0;  // 1 / scaled normal-equation denominator
};

GammaEstimate estimate_gamma(const RecurrenceTrace& trace, double condition_tol = 1e-12);

// Entry (i, j) of the inverse (lambda I - A)^{-1} in the rescaled basis:
//   i <= j:  q_i r_j / (a_1 ... a_j)
//   i >= j:  r_i q_j / (a_1 ... a_j)
// (both agree on the diagonal).
struct ResolventEntry {
    int i = 0, j = 0;
    ScaledComplex value;
};

ResolventEntry resolvent_entry(const RecurrenceTrace& trace, const RemainderTrace& rem,
                               int i, int j);

// Envelope fit of the weighted entries w_{i,j} = |B_{i,j}| h_i / h_j against
// the offset |i - j|: per offset the maximum over a fixed band of diagonal
// positions, then a log-linear regression.  Geometric decay of the envelope
// (q < 1) is the resolvent-set signature; the fixed band makes growth in the
// offset direction visible when the remainder direction is noise-dominated.
struct DecayFit {
    enum class Verdict { Geometric, NotGeometric, InsufficientData };
    double c = 0.0;
    double q = 1.0;
    int window_lo = 0, window_hi = 0;  // diagonal band actually used
    int offsets = 0;                   // usable offsets in the regression
    double rms_residual = 0.0;
    Verdict verdict = Verdict::InsufficientData;
};

struct DecayFitParams {
    double q_max = 0.95;
    double rms_max = 0.5;
    int min_offsets = 16;
};

DecayFit decay_fit(const RecurrenceTrace& trace, const RemainderTrace& rem,
                   const DecayFitParams& params = {});

// Dense inverse of the N x N truncation of (lambda I - A) in the original
// orthonormal basis, by elimination with partial pivoting.  Pivots below
// 1e-12 * max|entry| raise SingularTruncationError with the failing index.
struct ComplexMatrix {
    int n = 0;
    std::vector<cplx> data;  // row-major

    cplx& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }
};

ComplexMatrix finite_section_inverse(const OperatorModel& model, cplx lambda, int n);

// Point classification.
enum class PointLabel { Resolvent, Eigenvalue, Spectrum, Indeterminate };

const char* label_name(PointLabel label);

struct ClassifyParams {
    int n_max = 128;
    SeriesThresholds series{};
    DecayFitParams decay{};
    double growth_margin = 0.02;       // spectrum requires growth <= 1 + margin
    double gamma_condition_tol = 1e-12;
};

struct SeriesEvidence {
    SeriesResult verdict = SeriesResult::Indeterminate;
    double tail_ratio = 0.0;
    int window = 0;
};

struct PointClassification {
    cplx lambda{0.0, 0.0};
    PointLabel label = PointLabel::Indeterminate;
    SeriesEvidence series{};
    std::optional<GammaEstimate> gamma;
    std::optional<DecayFit> decay;
    double growth = 0.0;
    bool fast_path = false;  // certified by the norm bound alone
    bool escalated = false;  // re-run at a deeper n_max by the scan
    std::string note;
    ClassifyParams params{};
};

// Labels:
//   Eigenvalue  <=  the series test certifies summability.
//   Resolvent   <=  decay fit geometric AND growth > 1 AND series diverges.
//   Spectrum    <=  growth <= 1 + margin and the series did not converge.
//   Indeterminate otherwise (including an ill-conditioned gamma recovery).
PointClassification classify_point(const OperatorModel& model, cplx lambda,
                                   const ClassifyParams& params = {});

}  // namespace trispec
