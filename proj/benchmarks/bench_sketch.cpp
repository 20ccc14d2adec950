#include <algorithm>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "l1sketch/l1sketch.hpp"

using namespace l1sketch;

namespace {

// m unit-mass degree-d densities with n pieces each on random endpoints.
DensityFamily make_family(std::size_t m, std::size_t n, int d, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  std::vector<RawDensity> raw;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> ends(n + 1);
    for (auto& e : ends) e = 4.0 * rng.uniform_open();
    std::sort(ends.begin(), ends.end());
    RawDensity f{"f" + std::to_string(j), {}};
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> beta(static_cast<std::size_t>(d) + 1);
      for (std::size_t k = 0; k < beta.size(); ++k) {
        beta[k] = 0.05 + rng.uniform_open();
        mass += (ends[i + 1] - ends[i]) * beta[k] / static_cast<double>(k + 1);
      }
      const double w = ends[i + 1] - ends[i];
      f.segments.push_back({ends[i], ends[i + 1], poly::affine_compose(beta, -ends[i] / w, 1.0 / w)});
    }
    for (auto& seg : f.segments)
      for (double& c : seg.coeffs) c /= mass;
    raw.push_back(std::move(f));
  }
  return merge_breakpoints(raw);
}

}  // namespace

static void BM_StdCauchy(benchmark::State& state) {
  RandomStream rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_std_cauchy(rng));
}
BENCHMARK(BM_StdCauchy);

static void BM_CI1Density(benchmark::State& state) {
  RandomStream rng(2, 0);
  std::vector<CI1Sample> pts(1024);
  for (auto& p : pts) p = sample_student_envelope(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = pts[i++ & 1023];
    benchmark::DoNotOptimize(ci1_density(p.x0, p.x1));
  }
}
BENCHMARK(BM_CI1Density);

static void BM_CI1Sample(benchmark::State& state) {
  RandomStream rng(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_ci1_unit(rng));
}
BENCHMARK(BM_CI1Sample);

static void BM_CIdApprox(benchmark::State& state) {
  RandomStream rng(4, 0);
  std::vector<double> out(static_cast<std::size_t>(state.range(0)) + 1);
  const auto r = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    sample_cid_approx_unit(r, rng, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_CIdApprox)->Args({2, 100})->Args({5, 1000});

static void BM_ExactAllPairs(benchmark::State& state) {
  const auto fam = make_family(static_cast<std::size_t>(state.range(0)), 8, static_cast<int>(state.range(1)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(exact_all_pairs(fam));
}
BENCHMARK(BM_ExactAllPairs)->Args({10, 1})->Args({10, 3})->Unit(benchmark::kMillisecond);

static void BM_SketchFamily(benchmark::State& state) {
  const int d = static_cast<int>(state.range(1));
  const auto fam = make_family(10, 8, d, 6);
  SketchOptions o;
  o.mode = d == 0 ? SketchMode::uniform_fastpath : d == 1 ? SketchMode::exact_ci1 : SketchMode::cid_approx;
  o.t = static_cast<std::size_t>(state.range(0));
  o.r = 100;
  for (auto _ : state) benchmark::DoNotOptimize(sketch_family(fam, o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SketchFamily)
    ->Args({1000, 0})
    ->Args({1000, 1})
    ->Args({2000, 1})
    ->Args({1000, 2})
    ->Unit(benchmark::kMillisecond);

static void BM_EstimateAllPairs(benchmark::State& state) {
  const auto fam = make_family(10, 8, 0, 7);
  SketchOptions o;
  o.t = static_cast<std::size_t>(state.range(0));
  const auto s = sketch_family(fam, o);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_all_pairs(s, fam.names(), 0.5, 0.5));
}
BENCHMARK(BM_EstimateAllPairs)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
