#include <benchmark/benchmark.h>

#include "rlab/measure.hpp"
#include "rlab/spectral.hpp"

namespace {

void BM_ConvolvePowerFft(benchmark::State& state) {
  const auto mu = rlab::random_flat({state.range(0), 64, 1, 8.0, 50});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rlab::convolve_power(mu, 3, rlab::Method::fft));
  }
}
BENCHMARK(BM_ConvolvePowerFft)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_AutocorrelationDirect(benchmark::State& state) {
  const auto mu = rlab::random_flat({4096, state.range(0), 1, 8.0, 50});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rlab::autocorrelation(mu, rlab::Method::direct));
  }
}
BENCHMARK(BM_AutocorrelationDirect)->Arg(32)->Arg(128);

void BM_Fourier(benchmark::State& state) {
  const auto mu = rlab::cantor({4, {0, 3}, 6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rlab::fourier(mu, state.range(0)));
  }
}
BENCHMARK(BM_Fourier)->Arg(256)->Arg(2048);

}  // namespace
