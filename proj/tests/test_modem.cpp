#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "hmt/modem.hpp"
#include "hmt/pulse.hpp"
#include "hmt/sinr.hpp"
#include "oracles.hpp"

using namespace hmt;

namespace {

const double kSigma = 1e-4 / (1.7320508075688772 * 2.5e4);
const LatticeSpec kSmall{1e-4, 2.5e4, 3, 4};
const double kTs = 1e-6;

ChannelPath snapped(double tau, double nu, cplx h) {
  return {static_cast<double>(std::lround(tau / kTs)) * kTs, nu, h};
}

}  // namespace

TEST_CASE("modulate places one pulse per symbol") {
  auto grid = zero_grid(kSmall, Constellation::QPSK, 1.0);
  const cplx c{0.6, -0.8};
  for (int coset : {1, 2}) {
    grid = zero_grid(kSmall, Constellation::QPSK, 1.0);
    grid.at(coset, 1, 2) = c;
    const auto x = modulate(grid, kSmall, kSigma, kTs);
    const long H = std::lround(std::ceil(6.0 * std::sqrt(kSigma) / kTs));
    const double t_c = lattice_time_center(kSmall, coset, 1);
    const double f_c = lattice_freq_center(kSmall, coset, 2);
    const long kc = std::lround((t_c - x.t0) / kTs);
    for (long k = 0; k < static_cast<long>(x.size()); ++k) {
      const double t = x.t0 + k * kTs;
      cplx want{0.0, 0.0};
      if (k >= kc - H && k <= kc + H)
        want = c * eval_pulse({kSigma, 0.0, 0.0}, t - t_c) *
               std::polar(1.0, 2.0 * oracles::kPi * f_c * t);
      CHECK(std::abs(x.samples[static_cast<std::size_t>(k)] - want) < 1e-12);
    }
  }
}

TEST_CASE("modulate is linear in the symbol grid") {
  auto a = zero_grid(kSmall, Constellation::QPSK, 1.0);
  auto b = zero_grid(kSmall, Constellation::QPSK, 1.0);
  a.at(1, 0, 1) = cplx{1.0, 0.5};
  b.at(2, 2, 3) = cplx{-0.7, 0.2};
  auto both = zero_grid(kSmall, Constellation::QPSK, 1.0);
  both.at(1, 0, 1) = a.at(1, 0, 1);
  both.at(2, 2, 3) = b.at(2, 2, 3);
  const auto xa = modulate(a, kSmall, kSigma, kTs);
  const auto xb = modulate(b, kSmall, kSigma, kTs);
  const auto xc = modulate(both, kSmall, kSigma, kTs);
  REQUIRE(xa.size() == xc.size());
  for (std::size_t k = 0; k < xc.size(); ++k)
    CHECK(std::abs(xc.samples[k] - (xa.samples[k] + xb.samples[k])) < 1e-13);

  const auto xz = modulate(zero_grid(kSmall, Constellation::QPSK, 1.0), kSmall, kSigma, kTs);
  for (const auto& v : xz.samples) CHECK(v == cplx{0.0, 0.0});
}

TEST_CASE("modulate rejects inconsistent inputs") {
  const auto grid = zero_grid(kSmall, Constellation::QPSK, 1.0);
  CHECK_THROWS_AS(modulate(grid, kSmall, 0.0, kTs), std::invalid_argument);
  CHECK_THROWS_AS(modulate(grid, kSmall, kSigma, 0.0), std::invalid_argument);
  const LatticeSpec other{1e-4, 2.5e4, 4, 4};
  CHECK_THROWS_AS(modulate(grid, other, kSigma, kTs), std::invalid_argument);
}

TEST_CASE("demodulate recovers and rejects") {
  auto grid = zero_grid(kSmall, Constellation::QPSK, 1.0);
  const cplx c{1.0, -1.0};
  grid.at(1, 1, 2) = c;
  const auto x = modulate(grid, kSmall, kSigma, kTs);
  const ReceiverSpec tpr{};

  const cplx y = demodulate(x, kSmall, kSigma, tpr, 1, 1, 2);
  CHECK(std::abs(y - c) < 1e-4 * std::abs(c));

  // time-adjacent slot on the same subcarrier sees the pulse correlation at
  // one full slot spacing
  const cplx yn = demodulate(x, kSmall, kSigma, tpr, 1, 0, 2);
  CHECK(std::abs(yn) == doctest::Approx(std::abs(c) * 1.111830397e-3).epsilon(1e-3));

  SampledSignal zero = x;
  for (auto& v : zero.samples) v = cplx{0.0, 0.0};
  CHECK(demodulate(zero, kSmall, kSigma, tpr, 1, 1, 2) == cplx{0.0, 0.0});

  SampledSignal tiny;
  tiny.ts = kTs;
  tiny.t0 = 0.0;
  tiny.samples.assign(10, cplx{0.0, 0.0});
  CHECK_THROWS_AS(demodulate(tiny, kSmall, kSigma, tpr, 1, 1, 2), std::out_of_range);
  CHECK_THROWS_AS(demodulate(x, kSmall, 0.0, tpr, 1, 1, 2), std::invalid_argument);
}

TEST_CASE("receiver offset resolution") {
  ReceiverSpec rx;
  rx.mode = ReceiverMode::TPR;
  rx.delta_t = 5.0;  // stale value; TPR must ignore it
  rx.delta_f = -3.0;
  const auto u = ScatteringSpec::uniform_spread(0.2, kSigma);
  auto r = resolve_offsets(rx, kSigma, u);
  CHECK(r.delta_t == 0.0);
  CHECK(r.delta_f == 0.0);
  CHECK(effective_offsets(rx) == std::pair{0.0, 0.0});

  rx.mode = ReceiverMode::MaxSINR;
  r = resolve_offsets(rx, kSigma, u);
  CHECK(r.delta_t == 0.5 * u.tau_max);
  CHECK(r.delta_f == 0.0);

  const auto e = ScatteringSpec::exponential_spread(0.1, kSigma);
  r = resolve_offsets(rx, kSigma, e);
  const auto [edt, edf] = closed_form_offset_exp(kSigma, e);
  CHECK(r.delta_t == edt);
  CHECK(r.delta_f == edf);

  rx.mode = ReceiverMode::Manual;
  rx.delta_t = 1.5e-5;
  rx.delta_f = 200.0;
  r = resolve_offsets(rx, kSigma, u);
  CHECK(r.delta_t == 1.5e-5);
  CHECK(r.delta_f == 200.0);
  CHECK(effective_offsets(rx) == std::pair{1.5e-5, 200.0});
}

TEST_CASE("effective gain matches the pulse cross-correlation") {
  const ReceiverSpec tpr{};
  ChannelRealization ident;
  ident.paths.push_back({0.0, 0.0, cplx{1.0, 0.0}});
  const cplx g0 = effective_gain(ident, kSmall, kSigma, tpr, 1, 1, 0, kTs);
  CHECK(std::abs(g0 - cplx{1.0, 0.0}) < 1e-6);

  ChannelRealization scaled;
  scaled.paths.push_back({0.0, 0.0, cplx{0.6, -0.3}});
  const cplx g1 = effective_gain(scaled, kSmall, kSigma, tpr, 2, 1, 3, kTs);
  CHECK(std::abs(g1 - cplx{0.6, -0.3}) < 1e-6);

  ChannelRealization moved;
  moved.paths.push_back(snapped(3.7e-6, 4.2e3, cplx{1.0, 0.0}));
  ReceiverSpec manual;
  manual.mode = ReceiverMode::Manual;
  manual.delta_t = 1.1e-5;
  manual.delta_f = -900.0;
  const cplx g2 = effective_gain(moved, kSmall, kSigma, manual, 1, 1, 1, kTs);
  const auto& p = moved.paths[0];
  const double want =
      std::abs(ambiguity_closed(kSigma, p.tau - manual.delta_t, p.nu - manual.delta_f));
  CHECK(std::abs(g2) == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("effective gain reproduces the modulate-channel-demodulate chain") {
  auto grid = zero_grid(kSmall, Constellation::QPSK, 1.0);
  const cplx c{-0.8, 0.6};
  grid.at(2, 1, 1) = c;
  const auto x = modulate(grid, kSmall, kSigma, kTs);

  ChannelRealization real;
  real.paths.push_back(snapped(2.3e-6, 5.1e3, cplx{0.55, 0.20}));
  real.paths.push_back(snapped(9.8e-6, -2.7e3, cplx{-0.35, 0.61}));
  const auto y = apply_channel(real, x);

  for (auto mode : {ReceiverMode::TPR, ReceiverMode::Manual}) {
    ReceiverSpec rx;
    rx.mode = mode;
    rx.delta_t = 6.0e-6;
    rx.delta_f = 500.0;
    const cplx z = demodulate(y, kSmall, kSigma, rx, 2, 1, 1);
    const cplx eff = effective_gain(real, kSmall, kSigma, rx, 2, 1, 1, kTs);
    CHECK(std::abs(z - c * eff) < 1e-4 * std::abs(c));
  }
}

TEST_CASE("genie equalizer divides and refuses underflow") {
  const cplx eff{0.3, -0.4};
  const cplx y{1.0, 2.0};
  CHECK(equalize_genie(y, eff) == y / eff);
  CHECK_THROWS_AS(equalize_genie(y, cplx{1e-7, 0.0}), std::domain_error);
}

TEST_CASE("noiseless chain recovers a full random frame") {
  const auto spec = ScatteringSpec::uniform_spread(0.07, kSigma);
  auto grid = random_grid(kSmall, Constellation::QPSK, 1.0, 97);
  const auto x = modulate(grid, kSmall, kSigma, kTs);

  auto real = sample_realization(spec, 16, 131);
  for (auto& p : real.paths) p.tau = static_cast<double>(std::lround(p.tau / kTs)) * kTs;
  const auto y = apply_channel(real, x);

  ReceiverSpec rx;
  rx.mode = ReceiverMode::MaxSINR;
  rx = resolve_offsets(rx, kSigma, spec);

  int errors = 0;
  for (int coset : {1, 2})
    for (int m = 0; m < kSmall.M; ++m)
      for (int n = 0; n < kSmall.N; ++n) {
        const cplx z = demodulate(y, kSmall, kSigma, rx, coset, m, n);
        const cplx eff = effective_gain(real, kSmall, kSigma, rx, coset, m, n, kTs);
        const cplx hat = equalize_genie(z, eff);
        const cplx want = grid.at(coset, m, n);
        if (std::signbit(hat.real()) != std::signbit(want.real()) ||
            std::signbit(hat.imag()) != std::signbit(want.imag()))
          ++errors;
      }
  CHECK(errors <= 1);  // 24 symbols, interference-limited but far above slicing level
}
