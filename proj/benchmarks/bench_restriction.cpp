#include <benchmark/benchmark.h>

#include "rlab/measure.hpp"
#include "rlab/restriction.hpp"

namespace {

void BM_ProbeIteration(benchmark::State& state) {
  const auto mu = rlab::random_flat({4096, 185, 1, 4.0, 200});
  const rlab::ExtensionOperator op(mu, state.range(0));
  rlab::ProbeOptions options;
  options.restarts = 1;
  options.max_iters = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rlab::restriction_norm(op, rlab::Exponent(rlab::Rational(4, 3)), rlab::Exponent(2), options));
  }
}
BENCHMARK(BM_ProbeIteration)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OperatorBuild(benchmark::State& state) {
  const auto mu = rlab::cantor({4, {0, 3}, 5});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rlab::ExtensionOperator(mu, state.range(0)));
  }
}
BENCHMARK(BM_OperatorBuild)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
