#include <benchmark/benchmark.h>

#include "willmore/biharmonic.hpp"
#include "willmore/boundary.hpp"
#include "willmore/fixed_point.hpp"
#include "willmore/geometry.hpp"
#include "willmore/norms.hpp"
#include "willmore/verification.hpp"

namespace {

using namespace willmore;

DomainPtr square(int n) { return GridDomain::create(Polygon::unit_square(), 1.0 / n); }

void BM_Assemble(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble(d));
}
BENCHMARK(BM_Assemble)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    const SparseSystem sys = assemble(d);
    const BoundaryData bc = preset_boundary(d, BoundaryShape::SineSlope, 0.05);
    const ScalarField rhs(d);
    for (auto _ : state) benchmark::DoNotOptimize(solve(sys, rhs, bc));
}
BENCHMARK(BM_Solve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_DivergenceOperator(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    const ScalarField u = AnalyticField::sine(0.1).sample(d);
    for (auto _ : state) benchmark::DoNotOptimize(willmore_operator_divergence(u));
}
BENCHMARK(BM_DivergenceOperator)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GeometricOperator(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    const ScalarField u = AnalyticField::sine(0.1).sample(d);
    for (auto _ : state) benchmark::DoNotOptimize(willmore_operator_geometric(u));
}
BENCHMARK(BM_GeometricOperator)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_TraceNorm(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    const BoundaryData bc = preset_boundary(d, BoundaryShape::SineSlope, 0.05);
    const NormParams np = NormParams::make(4.0, 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(dirichlet_trace_norm(bc, np));
}
BENCHMARK(BM_TraceNorm)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Iterate(benchmark::State& state) {
    const DomainPtr d = square(64);
    const SparseSystem sys = assemble(d);
    const BoundaryData bc = preset_boundary(d, BoundaryShape::SineSlope, 0.05);
    const IterationConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(iterate(sys, bc, cfg));
}
BENCHMARK(BM_Iterate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
