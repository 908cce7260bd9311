#include "trispec/operator_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace trispec {

namespace {

// Shared lookup for the three sequences.  `first_index` is 1 for alpha and 0
// for beta/gamma; head arrays are anchored at that index, tails at the
// absolute index k mod period.
cplx lookup(const CoefficientSpec& s, const std::vector<cplx>& head,
            const std::vector<cplx>& tail, int first_index, int k, const char* name) {
    if (k < first_index) throw std::out_of_range(std::string(name) + ": index below range");
    const int pos = k - first_index;

    switch (s.kind) {
        case CoefficientKind::ExplicitList:
            if (pos >= static_cast<int>(head.size()))
                throw std::out_of_range(std::string(name) +
                                        ": explicit-list spec is undefined beyond its head");
            return head[pos];
        case CoefficientKind::ConstantTail:
            if (pos < static_cast<int>(head.size())) return head[pos];
            return tail[0];
        case CoefficientKind::PeriodicTail:
            if (pos < static_cast<int>(head.size())) return head[pos];
            return tail[k % s.period];
        case CoefficientKind::AsymptoticallyPeriodicTail: {
            cplx v = tail[k % s.period];
            if (pos < static_cast<int>(head.size())) v += head[pos];
            return v;
        }
    }
    throw std::logic_error("unreachable coefficient kind");
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument("operator spec rejected: " + msg);
}

bool nonzero(cplx v) { return v.real() != 0.0 || v.imag() != 0.0; }

double sup_abs(const std::vector<cplx>& head, const std::vector<cplx>& tail,
               const std::vector<cplx>& corrected) {
    double s = 0.0;
    for (const auto& v : head) s = std::max(s, std::abs(v));
    for (const auto& v : tail) s = std::max(s, std::abs(v));
    for (const auto& v : corrected) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace

cplx OperatorModel::alpha(int k) const {
    return lookup(spec_, spec_.alpha_head, spec_.alpha_tail, 1, k, "alpha");
}
cplx OperatorModel::beta(int k) const {
    return lookup(spec_, spec_.beta_head, spec_.beta_tail, 0, k, "beta");
}
cplx OperatorModel::gamma(int k) const {
    return lookup(spec_, spec_.gamma_head, spec_.gamma_tail, 0, k, "gamma");
}

cplx OperatorModel::d(int n) const {
    cplx prod{1.0, 0.0};
    for (int k = 0; k < n; ++k) prod *= gamma(k);
    return prod;
}

ScaledComplex OperatorModel::d_scaled(int n) const {
    ScaledComplex prod = ScaledComplex::one();
    for (int k = 0; k < n; ++k) prod = prod * gamma(k);
    return prod;
}

double OperatorModel::h(int n) const {
    double prod = 1.0;
    for (int k = 0; k < n; ++k) prod /= std::abs(gamma(k));
    return prod;
}

ScaledReal OperatorModel::h_scaled(int n) const {
    ScaledReal prod = ScaledReal::one();
    for (int k = 0; k < n; ++k) prod = prod / scaled_abs_from(std::abs(gamma(k)));
    return prod;
}

double OperatorModel::log_h(int n) const {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s -= std::log(std::abs(gamma(k)));
    return s;
}

int OperatorModel::max_index() const {
    if (has_bounded_tail()) return std::numeric_limits<int>::max();
    // alpha head is anchored at 1, so alpha covers 1..size(); beta/gamma cover
    // 0..size()-1.  The usable range is the intersection.
    const int a = static_cast<int>(spec_.alpha_head.size());
    const int b = static_cast<int>(spec_.beta_head.size()) - 1;
    const int g = static_cast<int>(spec_.gamma_head.size()) - 1;
    return std::min({a, b, g});
}

OperatorModel build_operator(CoefficientSpec spec) {
    const bool tailed = spec.kind != CoefficientKind::ExplicitList;

    if (spec.kind == CoefficientKind::ConstantTail) {
        require(spec.alpha_tail.size() == 1 && spec.beta_tail.size() == 1 &&
                    spec.gamma_tail.size() == 1,
                "constant tail needs exactly one value per sequence");
        spec.period = 1;
    } else if (spec.kind == CoefficientKind::PeriodicTail ||
               spec.kind == CoefficientKind::AsymptoticallyPeriodicTail) {
        require(spec.period >= 1, "tail period must be >= 1");
        const auto p = static_cast<size_t>(spec.period);
        require(spec.alpha_tail.size() == p && spec.beta_tail.size() == p &&
                    spec.gamma_tail.size() == p,
                "tail arrays must have `period` entries each");
    } else {
        require(!spec.gamma_head.empty(), "explicit list needs at least gamma_0");
    }

    if (tailed) {
        for (const auto& v : spec.alpha_tail) require(nonzero(v), "alpha tail value is zero");
        for (const auto& v : spec.gamma_tail) require(nonzero(v), "gamma tail value is zero");
    }

    OperatorModel model(std::move(spec));
    const auto& s = model.spec();

    // The corrected/head values have to be checked through the accessor so the
    // asymptotic kind validates limit + correction, not the correction alone.
    const int alpha_reach = static_cast<int>(s.alpha_head.size());
    for (int k = 1; k <= alpha_reach; ++k)
        require(nonzero(model.alpha(k)), "alpha_" + std::to_string(k) + " is zero");
    const int gamma_reach = static_cast<int>(s.gamma_head.size());
    for (int k = 0; k < gamma_reach; ++k)
        require(nonzero(model.gamma(k)), "gamma_" + std::to_string(k) + " is zero");
    return model;
}

Coefficients coefficient_at(const OperatorModel& model, int n) {
    if (n < 0) throw std::out_of_range("coefficient_at: negative index");
    return {model.a(n), model.b(n), model.h(n)};
}

NormBound norm_upper_bound(const OperatorModel& model) {
    if (!model.has_bounded_tail())
        throw std::invalid_argument(
            "norm_upper_bound: explicit-list spec has no tail rule, bound undefined");

    const auto& s = model.spec();
    std::vector<cplx> alpha_corr, beta_corr, gamma_corr;
    if (s.kind == CoefficientKind::AsymptoticallyPeriodicTail) {
        // Corrected prefix values differ from both head and tail arrays.
        for (int k = 1; k <= static_cast<int>(s.alpha_head.size()); ++k)
            alpha_corr.push_back(model.alpha(k));
        for (int k = 0; k < static_cast<int>(s.beta_head.size()); ++k)
            beta_corr.push_back(model.beta(k));
        for (int k = 0; k < static_cast<int>(s.gamma_head.size()); ++k)
            gamma_corr.push_back(model.gamma(k));
        return {sup_abs({}, s.alpha_tail, alpha_corr) + sup_abs({}, s.beta_tail, beta_corr) +
                sup_abs({}, s.gamma_tail, gamma_corr)};
    }
    return {sup_abs(s.alpha_head, s.alpha_tail, {}) + sup_abs(s.beta_head, s.beta_tail, {}) +
            sup_abs(s.gamma_head, s.gamma_tail, {})};
}

}  // namespace trispec
