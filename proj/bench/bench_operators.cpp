#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "varlex/cube_index.hpp"
#include "varlex/operators.hpp"
#include "varlex/rng.hpp"
#include "varlex/space.hpp"

namespace {

using namespace varlex;

DomainPtr grid(std::size_t res) {
  return std::make_shared<const DiscreteDomain>(build_unit_grid(2, res));
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = rng.pareto(1.5);
  }
  return v;
}

void BM_CubeIndex(benchmark::State& state) {
  const auto dom = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    CubeIndex idx(dom);
    benchmark::DoNotOptimize(idx.shell_count());
  }
}
BENCHMARK(BM_CubeIndex)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MaximalKernel(benchmark::State& state) {
  const auto dom = grid(static_cast<std::size_t>(state.range(0)));
  const CubeIndex idx(dom);
  const ScalarField f(dom, noise(dom->size(), 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximal(f, idx, 0.5).field.values().data());
  }
}
BENCHMARK(BM_MaximalKernel)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MaximalReference(benchmark::State& state) {
  const auto dom = grid(static_cast<std::size_t>(state.range(0)));
  const ScalarField f(dom, noise(dom->size(), 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::maximal(f, 0.5).field.values().data());
  }
}
BENCHMARK(BM_MaximalReference)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_MaximalBatch(benchmark::State& state) {
  const auto dom = grid(static_cast<std::size_t>(state.range(0)));
  const CubeIndex idx(dom);
  std::vector<std::vector<double>> fs;
  for (int i = 0; i < state.range(1); ++i) {
    fs.push_back(noise(dom->size(), 10 + i));
  }
  const std::vector<double> alphas{0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximal_batch(idx, fs, alphas).data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_MaximalBatch)->Args({32, 50})->Args({64, 10})->Unit(benchmark::kMillisecond);

void BM_FractionalKernel(benchmark::State& state) {
  const auto dom = grid(static_cast<std::size_t>(state.range(0)));
  const CubeIndex idx(dom);
  const ScalarField f(dom, noise(dom->size(), 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fractional_integral(f, idx, 1.0).field.values().data());
  }
}
BENCHMARK(BM_FractionalKernel)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FractionalReference(benchmark::State& state) {
  const auto dom = grid(static_cast<std::size_t>(state.range(0)));
  const ScalarField f(dom, noise(dom->size(), 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::fractional_integral(f, 1.0).field.values().data());
  }
}
BENCHMARK(BM_FractionalReference)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Luxemburg(benchmark::State& state) {
  const auto dom = grid(static_cast<std::size_t>(state.range(0)));
  const auto f = noise(dom->size(), 3);
  std::vector<double> p(dom->size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = 1.5 + dom->coords(i)[0];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(luxemburg_norm(f, p, *dom).value);
  }
}
BENCHMARK(BM_Luxemburg)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
