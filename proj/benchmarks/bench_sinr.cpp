#include <benchmark/benchmark.h>

#include "hmt/channel.hpp"
#include "hmt/pulse.hpp"
#include "hmt/sinr.hpp"

namespace {

constexpr double kSigma = 1e-4 / (1.7320508075688772 * 2.5e4);

hmt::SinrParams uni_params(double theta) {
  hmt::SinrParams p;
  p.scattering = hmt::ScatteringSpec::uniform_spread(theta, kSigma);
  p.lattice = {1e-4, 2.5e4, 20, 40};
  p.sigma = kSigma;
  p.sigma_w2 = 1e-2;
  return p;
}

void BM_AmbiguityClosed(benchmark::State& state) {
  double tau = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmt::ambiguity_closed(kSigma, tau, 1e3));
    tau += 1e-9;
  }
}
BENCHMARK(BM_AmbiguityClosed);

void BM_InterferenceEnergy(benchmark::State& state) {
  const auto p = uni_params(0.2);
  for (auto _ : state)
    benchmark::DoNotOptimize(hmt::interference_energy(p, 1e-5, 0.0));
}
BENCHMARK(BM_InterferenceEnergy);

void BM_SignalEnergy(benchmark::State& state) {
  const auto p = uni_params(0.2);
  for (auto _ : state) benchmark::DoNotOptimize(hmt::signal_energy(p, 1e-5, 0.0));
}
BENCHMARK(BM_SignalEnergy);

void BM_UpperBoundSearch(benchmark::State& state) {
  const auto p = uni_params(0.2);
  for (auto _ : state)
    benchmark::DoNotOptimize(hmt::upper_bound_search(p, hmt::SearchObjective::FullSinr));
}
BENCHMARK(BM_UpperBoundSearch)->Unit(benchmark::kMillisecond);

}  // namespace
