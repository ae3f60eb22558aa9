#include <benchmark/benchmark.h>

#include "compmap/basins.hpp"
#include "compmap/classification.hpp"
#include "compmap/curves.hpp"
#include "compmap/expr.hpp"
#include "compmap/systems.hpp"

using namespace compmap;

static void BM_ParseAndDifferentiate(benchmark::State& state) {
  const std::string text = "b1*x/(1+x+c1*y)+h1-(x^2)/(1.5+(y-x)^2)";
  for (auto _ : state) {
    const expr::Expr e = expr::parse(text);
    benchmark::DoNotOptimize(expr::differentiate(e, expr::Var::x));
  }
}
BENCHMARK(BM_ParseAndDifferentiate);

static void BM_CompiledEval(benchmark::State& state) {
  const expr::Compiled c(expr::bind(expr::parse("3*x/(1+x+2*y)+0.1"), {}));
  double x = 0.3, y = 0.7;
  for (auto _ : state) {
    x = c(x, y);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_CompiledEval);

static void BM_NewtonFixedPoint(benchmark::State& state) {
  const ExampleSystem s = make_example(ExampleId::ex3_T);
  for (auto _ : state) benchmark::DoNotOptimize(find_fixed_point(s.map, {1.8, 2.2}));
}
BENCHMARK(BM_NewtonFixedPoint);

static void BM_TaylorClassification(benchmark::State& state) {
  const ExampleSystem s = make_example(ExampleId::ex4);
  const FixedPointRecord fp = describe_point(s.map, s.default_fp);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_local(s.map, fp));
}
BENCHMARK(BM_TaylorClassification);

static void BM_StableCurve(benchmark::State& state) {
  const ExampleSystem s = make_example(ExampleId::ex1);
  const FixedPointRecord fp = describe_point(s.map, s.default_fp);
  StableCurveOptions o;
  o.columns = static_cast<std::size_t>(state.range(0));
  o.mode = s.mode;
  o.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(trace_stable_curve(s.map, fp, s.window, o));
}
BENCHMARK(BM_StableCurve)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_UnstableCurve(benchmark::State& state) {
  const ExampleSystem s = make_example(ExampleId::ex5, ex5_saddle_params());
  const FixedPointRecord fp = describe_point(s.map, ex5_equilibria(s.params)[1]);
  for (auto _ : state) benchmark::DoNotOptimize(trace_unstable_curve(s.map, fp));
}
BENCHMARK(BM_UnstableCurve)->Unit(benchmark::kMillisecond);

static void BM_Raster(benchmark::State& state) {
  const ExampleSystem s = make_example(ExampleId::ex4);
  RasterOptions o;
  o.workers = static_cast<unsigned>(state.range(1));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(raster(s.map, s.default_fp, s.window, n, n, o));
}
BENCHMARK(BM_Raster)->Args({64, 1})->Args({128, 1})->Args({128, 4})->Unit(benchmark::kMillisecond);

static void BM_LocateTangency(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(locate_ex5_tangency(ex5_search_line()));
}
BENCHMARK(BM_LocateTangency)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
