#include <benchmark/benchmark.h>

#include "trispec/scan.hpp"

namespace {

trispec::OperatorModel half_circle() {
    trispec::CoefficientSpec s;
    s.kind = trispec::CoefficientKind::ConstantTail;
    s.alpha_tail = {trispec::cplx{0.5, 0.0}};
    s.beta_tail = {trispec::cplx{0.0, 0.0}};
    s.gamma_tail = {trispec::cplx{0.5, 0.0}};
    return trispec::build_operator(s);
}

void BM_Scan(benchmark::State& state) {
    const auto model = half_circle();
    const trispec::ScanRegion region{-2.0, 2.0, -1.0, 1.0, 21, 11};
    trispec::ScanParams params;
    params.workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto result = trispec::scan(model, region, params);
        benchmark::DoNotOptimize(result.points.back().label);
    }
}
BENCHMARK(BM_Scan)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
