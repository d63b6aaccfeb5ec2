#include <benchmark/benchmark.h>

#include "hmt/channel.hpp"
#include "hmt/lattice.hpp"
#include "hmt/modem.hpp"

namespace {

constexpr double kSigma = 1e-4 / (1.7320508075688772 * 2.5e4);
const hmt::LatticeSpec kLattice{1e-4, 2.5e4, 20, 40};

void BM_Modulate(benchmark::State& state) {
  const auto grid = hmt::random_grid(kLattice, hmt::Constellation::QPSK, 1.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(hmt::modulate(grid, kLattice, kSigma, 1e-6));
}
BENCHMARK(BM_Modulate)->Unit(benchmark::kMillisecond);

void BM_ApplyChannel(benchmark::State& state) {
  const auto grid = hmt::random_grid(kLattice, hmt::Constellation::QPSK, 1.0, 7);
  const auto x = hmt::modulate(grid, kLattice, kSigma, 1e-6);
  const auto spec = hmt::ScatteringSpec::uniform_spread(0.2, kSigma);
  const auto real = hmt::sample_realization(spec, 64, 11);
  for (auto _ : state) benchmark::DoNotOptimize(hmt::apply_channel(real, x));
}
BENCHMARK(BM_ApplyChannel)->Unit(benchmark::kMillisecond);

void BM_Demodulate(benchmark::State& state) {
  const auto grid = hmt::random_grid(kLattice, hmt::Constellation::QPSK, 1.0, 7);
  const auto x = hmt::modulate(grid, kLattice, kSigma, 1e-6);
  const hmt::ReceiverSpec rx{hmt::ReceiverMode::TPR, 0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(hmt::demodulate(x, kLattice, kSigma, rx, 1, 10, 20));
}
BENCHMARK(BM_Demodulate);

}  // namespace

BENCHMARK_MAIN();
