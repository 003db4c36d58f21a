#include <benchmark/benchmark.h>

#include "hypertorus/averaging.hpp"
#include "hypertorus/frame_form.hpp"
#include "hypertorus/gluing.hpp"
#include "hypertorus/scalar_field.hpp"
#include "hypertorus/suites.hpp"
#include "hypertorus/synth.hpp"

namespace {

using namespace hypertorus;

HyperbolicGluing cat_map() { return HyperbolicGluing::from_matrix(Mat2i{{2, 1, 1, 1}}); }

ScalarField make_field(const HyperbolicGluing& g, int n) {
    Rng rng(5);
    SynthOptions opt;
    opt.max_abs_k = n / 4;
    return random_quotient_field(g, GridShape{n, n}, rng, opt);
}

void BM_deriv_x(benchmark::State& state) {
    const auto g = cat_map();
    const int n = static_cast<int>(state.range(0));
    const ScalarField f = make_field(g, n);
    for (auto _ : state) benchmark::DoNotOptimize(deriv_x(f));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * n * n);
}

void BM_deriv_z(benchmark::State& state) {
    const auto g = cat_map();
    const int n = static_cast<int>(state.range(0));
    const ScalarField f = make_field(g, n);
    for (auto _ : state) benchmark::DoNotOptimize(deriv_z(f, 8));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * n * n);
}

void BM_pullback_flow_x(benchmark::State& state) {
    const auto g = cat_map();
    const int n = static_cast<int>(state.range(0));
    const ScalarField f = make_field(g, n);
    for (auto _ : state) benchmark::DoNotOptimize(pullback_flow_x(f, 1.0));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * n * n);
}

void BM_average_one_form(benchmark::State& state) {
    const auto g = cat_map();
    const int n = static_cast<int>(state.range(0));
    Rng rng(7);
    SynthOptions opt;
    opt.max_abs_k = n / 4;
    const FrameForm w = random_form(g, GridShape{n, n}, rng, 1, opt);
    for (auto _ : state) benchmark::DoNotOptimize(average_I_exact(w));
    state.SetItemsProcessed(state.iterations() * 3 * static_cast<int64_t>(n) * n * n);
}

void BM_integrate(benchmark::State& state) {
    const auto g = cat_map();
    const int n = static_cast<int>(state.range(0));
    const ScalarField f = make_field(g, n);
    for (auto _ : state) benchmark::DoNotOptimize(integrate(f));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * n * n);
}

BENCHMARK(BM_deriv_x)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_deriv_z)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_pullback_flow_x)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_average_one_form)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_integrate)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
