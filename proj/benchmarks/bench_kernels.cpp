#include <benchmark/benchmark.h>

#include <random>

#include "paraconvex/paraconvexity.hpp"
#include "paraconvex/retraction.hpp"
#include "paraconvex/retraction_space.hpp"
#include "paraconvex/scenes.hpp"
#include "paraconvex/selection.hpp"

using namespace paraconvex;

namespace {

PointCloud scene(const char* name, std::size_t density) {
  Scene s = resolve_scene(name);
  s.density = density;
  return generate_scene(s);
}

std::vector<Point> queries(std::size_t n, double half) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-half, half);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

void BM_DistToCloud(benchmark::State& state) {
  const PointCloud p = scene("sin_reciprocal", static_cast<std::size_t>(state.range(0)));
  const auto qs = queries(256, 1.5);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dist_to_cloud(qs[i++ % qs.size()], p));
}
BENCHMARK(BM_DistToCloud)->Arg(200)->Arg(2000)->Arg(20000);

void BM_ProjectToHull(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> pts;
  for (int i = 0; i < state.range(0); ++i) pts.emplace_back(u(rng), u(rng));
  const auto qs = queries(64, 3.0);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(project_to_hull(qs[i++ % qs.size()], pts));
}
BENCHMARK(BM_ProjectToHull)->Arg(8)->Arg(64)->Arg(512);

void BM_MinEnclosingBall(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> pts;
  for (int i = 0; i < state.range(0); ++i) pts.emplace_back(u(rng), u(rng));
  for (auto _ : state) benchmark::DoNotOptimize(min_enclosing_ball(pts));
}
BENCHMARK(BM_MinEnclosingBall)->Arg(9)->Arg(100)->Arg(1000);

void BM_BarySelect(benchmark::State& state) {
  const PointCloud p = scene("semicircle", static_cast<std::size_t>(state.range(0)));
  const Ball b(Point(0.2, 0.4), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(bary_select(p, b));
}
BENCHMARK(BM_BarySelect)->Arg(100)->Arg(1000);

void BM_RelativePrecision(benchmark::State& state) {
  const PointCloud p = scene("semicircle", 100);
  const SamplingPlan plan = default_plan(p);
  const Ball b(Point(0, 0), 1.05);
  for (auto _ : state) benchmark::DoNotOptimize(relative_precision(p, b, plan));
}
BENCHMARK(BM_RelativePrecision)->Unit(benchmark::kMicrosecond);

void BM_RetractionEval(benchmark::State& state) {
  const PointCloud p = scene("semicircle", 100);
  RetractionOptions o;
  o.alpha_hat = 0.94;
  const RetractionOperator r = build_retraction(p, 0.99, o);
  const auto qs = diagnostic_queries(r, 256, 5);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(r(qs[i++ % qs.size()]));
}
BENCHMARK(BM_RetractionEval)->Unit(benchmark::kMicrosecond);

void BM_SupDistance(benchmark::State& state) {
  const PointCloud p = scene("segment", 200);
  const RetractionOperator r = build_retraction(p, 0.2);
  const ProbeGrid probes = make_probe_grid(r, static_cast<std::size_t>(state.range(0)));
  const FunctionOnBox f = FunctionOnBox::from_retraction(r);
  const FunctionOnBox g = FunctionOnBox::constant(Point(0, 0));
  for (auto _ : state) benchmark::DoNotOptimize(sup_distance(f, g, probes));
}
BENCHMARK(BM_SupDistance)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
