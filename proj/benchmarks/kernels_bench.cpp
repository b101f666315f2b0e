#include <random>

#include <benchmark/benchmark.h>

#include "multspec/dynatomic.hpp"
#include "multspec/probekit.hpp"
#include "multspec/rootfind.hpp"

namespace {

using namespace multspec;

// args: degree d, period n
void BM_DynatomicForm(benchmark::State& state) {
  const auto f = random_map(static_cast<int>(state.range(0)), 11);
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(dynatomic_form(f, n));
  state.counters["degree"] = static_cast<double>(nu_count(f.degree(), n));
}
BENCHMARK(BM_DynatomicForm)->Args({2, 4})->Args({2, 8})->Args({2, 12})->Args({3, 5})->Args({4, 6})
    ->Unit(benchmark::kMillisecond);

void BM_DynatomicFormExtended(benchmark::State& state) {
  const auto f = convert<Quad>(random_map(2, 11));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dynatomic_form(f, n));
}
BENCHMARK(BM_DynatomicFormExtended)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RootsRandomCoefficients(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Cplx> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = Cplx(u(rng), u(rng));
  const Poly<double> p(c);
  for (auto _ : state) benchmark::DoNotOptimize(roots_univariate(p));
  state.SetComplexityN(degree);
}
BENCHMARK(BM_RootsRandomCoefficients)->RangeMultiplier(2)->Range(8, 512)->Complexity();

void BM_ProjectiveRootsOfDynatomic(benchmark::State& state) {
  const auto form = dynatomic_form(random_map(2, 11), static_cast<int>(state.range(0))).form;
  for (auto _ : state) benchmark::DoNotOptimize(projective_roots(form));
}
BENCHMARK(BM_ProjectiveRootsOfDynatomic)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

// From n = 7 on the double form no longer certifies; the spectra layer
// works from the 113-bit form instead.
void BM_ProjectiveRootsOfDynatomicExtended(benchmark::State& state) {
  const auto form = dynatomic_form(convert<Quad>(random_map(2, 11)), static_cast<int>(state.range(0))).form;
  for (auto _ : state) benchmark::DoNotOptimize(projective_roots(form));
}
BENCHMARK(BM_ProjectiveRootsOfDynatomicExtended)->DenseRange(6, 8)->Unit(benchmark::kMillisecond);

}  // namespace
