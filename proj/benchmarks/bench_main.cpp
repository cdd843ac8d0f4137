#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "topcap/embedding.hpp"
#include "topcap/persistence.hpp"
#include "topcap/signal.hpp"

namespace {

topcap::TimeSeries record(std::size_t n = 2000, double period = 250.7) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    x[i] = (0.9 + 0.1 * t / static_cast<double>(n)) * std::cos(2.0 * M_PI * t / period);
  }
  return topcap::TimeSeries("bench", std::move(x));
}

void BM_Autocorrelation(benchmark::State& state) {
  const auto s = record(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(topcap::autocorrelation(s));
}
BENCHMARK(BM_Autocorrelation)->Arg(2000)->Arg(8000);

void BM_Embed(benchmark::State& state) {
  const auto s = record();
  const topcap::EmbeddingParams p{100, 15, static_cast<std::size_t>(state.range(0)), 6};
  for (auto _ : state) benchmark::DoNotOptimize(topcap::embed(s, p));
}
BENCHMARK(BM_Embed)->Arg(1)->Arg(5);

void BM_DistanceMatrix(benchmark::State& state) {
  const auto cloud = topcap::embed(record(), {100, 15, static_cast<std::size_t>(state.range(0)), 6});
  for (auto _ : state) benchmark::DoNotOptimize(topcap::distance_matrix(cloud));
  state.counters["points"] = static_cast<double>(cloud.size());
}
BENCHMARK(BM_DistanceMatrix)->Arg(2)->Arg(5);

// Skip 2 gives a cloud of about 250 points.
void BM_RipsSkip(benchmark::State& state) {
  const auto dmat =
      topcap::distance_matrix(topcap::embed(record(), {100, 15, static_cast<std::size_t>(state.range(0)), 6}));
  for (auto _ : state) benchmark::DoNotOptimize(topcap::rips_persistence(dmat));
  state.counters["points"] = static_cast<double>(dmat.size());
}
BENCHMARK(BM_RipsSkip)->DenseRange(2, 10, 1)->Unit(benchmark::kMillisecond);

void BM_RipsCircle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> coords;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    coords.push_back(std::cos(t));
    coords.push_back(std::sin(t) * (1.0 + 0.1 * std::cos(3.0 * t)));
  }
  const auto dmat = topcap::distance_matrix(topcap::PointCloud(2, coords));
  for (auto _ : state) benchmark::DoNotOptimize(topcap::rips_persistence(dmat));
}
BENCHMARK(BM_RipsCircle)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
