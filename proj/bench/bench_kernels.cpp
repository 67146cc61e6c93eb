// Serial vs OpenMP kernels on synthetic inputs of increasing size.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "regioncluster/kernels.hpp"

using namespace regioncluster;
using namespace regioncluster::kernels;

namespace {

std::vector<double> table(std::size_t n, std::size_t m) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * m);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<Count> counts(std::size_t n, std::size_t m) {
  std::mt19937_64 rng(2);
  std::vector<Count> v(n * m);
  for (auto& x : v) x = static_cast<Count>(rng() % 5000);
  return v;
}

std::vector<GeoPoint> points(std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(20, 45), lon(80, 125);
  std::vector<GeoPoint> p(n);
  for (auto& g : p) g = {lat(rng), lon(rng)};
  return p;
}

template <auto Fn>
void bm_pairwise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto values = table(n, 47);
  const RowTable rows{values, n, 47};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(rows, Measure::phi_square, ZeroRows::error));
}

template <auto Fn>
void bm_correlations(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto c = counts(336, m);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(c, 336, m));
}

template <auto Fn>
void bm_neighbors(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = points(n);
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(p, rank, 5));
}

template <auto Fn>
void bm_shuffles(benchmark::State& state) {
  const std::size_t n = 336;
  const auto p = points(n);
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  const auto nn = parallel::nearest_neighbors(p, rank, 5);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 17);
  const auto shuffles = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(nn, labels, shuffles, 42));
}

}  // namespace

BENCHMARK(bm_pairwise<serial::pairwise_distances>)->Name("pairwise/serial")->Arg(100)->Arg(336)->Arg(1000);
BENCHMARK(bm_pairwise<parallel::pairwise_distances>)->Name("pairwise/parallel")->Arg(100)->Arg(336)->Arg(1000);
BENCHMARK(bm_correlations<serial::column_correlations>)->Name("correlations/serial")->Arg(50)->Arg(200);
BENCHMARK(bm_correlations<parallel::column_correlations>)->Name("correlations/parallel")->Arg(50)->Arg(200);
BENCHMARK(bm_neighbors<serial::nearest_neighbors>)->Name("neighbors/serial")->Arg(336)->Arg(2000);
BENCHMARK(bm_neighbors<parallel::nearest_neighbors>)->Name("neighbors/parallel")->Arg(336)->Arg(2000);
BENCHMARK(bm_shuffles<serial::shuffled_coherence>)->Name("shuffles/serial")->Arg(100)->Arg(1000);
BENCHMARK(bm_shuffles<parallel::shuffled_coherence>)->Name("shuffles/parallel")->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
