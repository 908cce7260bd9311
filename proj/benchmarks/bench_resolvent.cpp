#include <benchmark/benchmark.h>

#include "trispec/resolvent.hpp"

namespace {

trispec::OperatorModel half_circle() {
    trispec::CoefficientSpec s;
    s.kind = trispec::CoefficientKind::ConstantTail;
    s.alpha_tail = {trispec::cplx{0.5, 0.0}};
    s.beta_tail = {trispec::cplx{0.0, 0.0}};
    s.gamma_tail = {trispec::cplx{0.5, 0.0}};
    return trispec::build_operator(s);
}

void BM_ClassifyPoint(benchmark::State& state) {
    const auto model = half_circle();
    trispec::ClassifyParams params;
    params.n_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto pc = trispec::classify_point(model, {2.0, 0.0}, params);
        benchmark::DoNotOptimize(pc.label);
    }
}
BENCHMARK(BM_ClassifyPoint)->Arg(128)->Arg(256);

void BM_FiniteSectionInverse(benchmark::State& state) {
    const auto model = half_circle();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto inv = trispec::finite_section_inverse(model, {2.0, 0.0}, n);
        benchmark::DoNotOptimize(inv.at(0, 0));
    }
}
BENCHMARK(BM_FiniteSectionInverse)->Arg(32)->Arg(64)->Arg(128);

void BM_DecayFit(benchmark::State& state) {
    const auto model = half_circle();
    const auto t = trispec::evaluate_qp(model, {2.0, 0.0}, 128);
    const auto rem = trispec::evaluate_remainder(t, trispec::estimate_gamma(t).gamma);
    for (auto _ : state) {
        auto fit = trispec::decay_fit(t, rem);
        benchmark::DoNotOptimize(fit.q);
    }
}
BENCHMARK(BM_DecayFit);

}  // namespace
