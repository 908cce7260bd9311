#pragma once

#include <complex>
#include <vector>

#include "trispec/scaled.hpp"

namespace trispec {

// A bounded tridiagonal operator acting on l^2, given by three coefficient
// sequences: subdiagonal alpha_k (k >= 1), diagonal beta_k (k >= 0) and
// superdiagonal gamma_k (k >= 0), all complex with alpha_k != 0, gamma_k != 0.
//
// Everything downstream works in the rescaled basis e_n = g_n / d_n with
// d_n = gamma_0 * ... * gamma_{n-1}, where the superdiagonal becomes 1 and the
// subdiagonal becomes a_n = alpha_n * gamma_{n-1}.  The basis vector norms are
// h_n = 1 / |d_n|; they grow or shrink geometrically, so they are served both
// as plain doubles (may overflow for deep indices) and in log / scaled form.

enum class CoefficientKind {
    ExplicitList,              // head values only; undefined beyond the lists
    ConstantTail,              // head values, then one constant value per sequence
    PeriodicTail,              // head values, then period-P values indexed by k mod P
    AsymptoticallyPeriodicTail // period-P limit values plus additive head corrections
};

struct CoefficientSpec {
    CoefficientKind kind = CoefficientKind::ConstantTail;

    // Head arrays. alpha_head[i] is alpha_{i+1} (the subdiagonal starts at
    // index 1); beta_head[i] and gamma_head[i] are beta_i and gamma_i.  For
    // AsymptoticallyPeriodicTail the head arrays hold additive corrections to
    // the limit values instead of absolute values, anchored the same way.
    std::vector<cplx> alpha_head, beta_head, gamma_head;

    // Tail block.  ConstantTail: one value per sequence.  PeriodicTail and
    // AsymptoticallyPeriodicTail: `period` values per sequence, addressed by
    // the absolute index k mod period.
    int period = 0;
    std::vector<cplx> alpha_tail, beta_tail, gamma_tail;
};

class OperatorModel {
  public:
    const CoefficientSpec& spec() const { return spec_; }

    cplx alpha(int k) const;  // k >= 1
    cplx beta(int k) const;   // k >= 0
    cplx gamma(int k) const;  // k >= 0

    cplx a(int n) const { return n == 0 ? cplx{0.0, 0.0} : alpha(n) * gamma(n - 1); }
    cplx b(int n) const { return beta(n); }

    // d_n = gamma_0 ... gamma_{n-1}, d_0 = 1
    cplx d(int n) const;
    ScaledComplex d_scaled(int n) const;

    // h_n = 1 / |d_n|
    double h(int n) const;
    ScaledReal h_scaled(int n) const;
    double log_h(int n) const;

    bool has_bounded_tail() const { return spec_.kind != CoefficientKind::ExplicitList; }
    // Largest index usable by each accessor for ExplicitList specs (INT_MAX otherwise).
    int max_index() const;

  private:
    friend OperatorModel build_operator(CoefficientSpec spec);
    explicit OperatorModel(CoefficientSpec spec) : spec_(std::move(spec)) {}
    CoefficientSpec spec_;
};

// Validates the spec (nonzero alpha/gamma everywhere reachable, well-formed
// tail block) and returns the model.  Throws std::invalid_argument with a
// diagnostic on rejection.
OperatorModel build_operator(CoefficientSpec spec);

struct Coefficients {
    cplx a;    // 0 at n = 0, where the subdiagonal has no entry
    cplx b;
    double h;
};
Coefficients coefficient_at(const OperatorModel& model, int n);

// Upper bound for the operator norm (hence for |lambda| over the spectrum):
// sup|alpha_k| + sup|beta_k| + sup|gamma_k|, the sum of the norms of the three
// diagonals.  Monotone in the coefficient magnitudes.  Throws
// std::invalid_argument for ExplicitList specs, whose tail is undefined.
struct NormBound {
    double value;
};
NormBound norm_upper_bound(const OperatorModel& model);

}  // namespace trispec
