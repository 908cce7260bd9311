#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "trispec/recurrence.hpp"

namespace trispec {

// Convergents pi_n = p_n / q_n of the continued fraction.  Zeros of q_n are
// reported as pole markers, never as errors; the marker is set exactly when
// the scaled q_n mantissa is 0.
struct Convergent {
    int n = 0;
    cplx value{0.0, 0.0};
    bool pole = false;
};

struct ConvergentTable {
    cplx lambda;
    std::vector<Convergent> entries;  // n = 0 .. n_max
};

ConvergentTable convergents(const RecurrenceTrace& trace);

// |q_n * phi - p_n| * h_n for a fixed resolvent value phi, with a log-linear
// rate fit over the sequence.  A fitted rate < 1 is geometric decay; rate ~ 1
// means the linear-form remainder does not tend to zero.
struct RemainderDiagnostics {
    std::vector<double> values;      // may underflow to 0 for deep indices
    std::vector<double> log_values;  // exact log-domain copies
    double rate = 1.0;
    double fit_rms = 0.0;
};

RemainderDiagnostics remainder_diagnostics(const RecurrenceTrace& trace, cplx phi);

// Largest subsequence on which |phi - pi_n| fits under a geometric envelope
// c * rate^n (with slack factor 2), grown greedily from the tail of the table.
// Residuals at the numerical floor of |phi - pi_n| count as inside any
// envelope; if everything sits at the floor the rate is reported as 0.
struct GeometricSubsequence {
    enum class Verdict { Found, NoneFound };
    Verdict verdict = Verdict::NoneFound;
    std::vector<int> indices;
    double rate = 1.0;
    double envelope_c = 0.0;
};

struct GeometricFitParams {
    double rate_max = 0.98;   // rates this close to 1 do not count as geometric
    double slack = 2.0;       // multiplicative envelope slack
    double min_fraction = 0.25;
};

GeometricSubsequence geometric_subsequence(const ConvergentTable& table, cplx phi,
                                           const GeometricFitParams& params = {});

// Power-series coefficients of the resolvent value at infinity,
// c_k = (A^k)_{0,0}; c_0 = 1 for a normalized starting vector.  An odd count
// 2M+1 recovers M continued-fraction levels.
struct MomentSequence {
    std::vector<cplx> c;
};

// Recovered continued-fraction coefficients: b holds b_0..b_{M-1} and a holds
// a_1..a_M (a[i] is a_{i+1}).
struct JFractionCoefficients {
    std::vector<cplx> b;
    std::vector<cplx> a;
};

// Two-row moment-table recovery of (b, a) from c_0..c_{2M}.  Throws
// DegeneracyError naming the failing level when a pivot vanishes (non-normal
// moment sequence).  The algorithm is ill-conditioned in double precision for
// deep levels; high_precision switches the table to extended precision.
JFractionCoefficients moments_to_jfraction(const MomentSequence& moments,
                                           bool high_precision = false);

// Inverse direction, used as the roundtrip oracle: moments of the fraction
// with coefficients a_1..a_M, b_0..b_{M-1} via powers of the banded matrix.
// Returns c_0..c_{2M}; entries only ever touch indices <= M (banded locality),
// so enlarging the internal truncation does not change them.
MomentSequence jfraction_to_moments(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                    int m_levels);

// CSV interchange: one complex per row as "re,im".
MomentSequence read_moments_csv(const std::filesystem::path& path);
MomentSequence read_moments_csv(std::istream& in);

// Column order: n, re(pi_n), im(pi_n), |phi - pi_n|; pole rows print nan.
void write_convergents_csv(std::ostream& out, const ConvergentTable& table, cplx phi,
                           const GeometricSubsequence& fit);

}  // namespace trispec
