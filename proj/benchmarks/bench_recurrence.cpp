#include <benchmark/benchmark.h>

#include "trispec/recurrence.hpp"

namespace {

trispec::OperatorModel half_circle() {
    trispec::CoefficientSpec s;
    s.kind = trispec::CoefficientKind::ConstantTail;
    s.alpha_tail = {trispec::cplx{0.5, 0.0}};
    s.beta_tail = {trispec::cplx{0.0, 0.0}};
    s.gamma_tail = {trispec::cplx{0.5, 0.0}};
    return trispec::build_operator(s);
}

void BM_EvaluateQP(benchmark::State& state) {
    const auto model = half_circle();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto t = trispec::evaluate_qp(model, {2.0, 0.0}, n);
        benchmark::DoNotOptimize(t.q.back());
    }
}
BENCHMARK(BM_EvaluateQP)->Arg(128)->Arg(512)->Arg(2048);

void BM_Remainder(benchmark::State& state) {
    const auto model = half_circle();
    const auto t = trispec::evaluate_qp(model, {2.0, 0.0}, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = trispec::evaluate_remainder(t, {0.5358983848622456, 0.0});
        benchmark::DoNotOptimize(r.r.back());
    }
}
BENCHMARK(BM_Remainder)->Arg(128)->Arg(512);

void BM_SeriesTest(benchmark::State& state) {
    const auto model = half_circle();
    const auto t = trispec::evaluate_qp(model, {2.0, 0.0}, 128);
    for (auto _ : state) {
        auto v = trispec::eigen_series_test(t);
        benchmark::DoNotOptimize(v.verdict);
    }
}
BENCHMARK(BM_SeriesTest);

}  // namespace
