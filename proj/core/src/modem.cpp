#include "hmt/modem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hmt/pulse.hpp"
#include "hmt/sinr.hpp"

namespace hmt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// half-width of the truncated pulse support in samples
long support_half(double pulse_sigma, double ts) {
  return static_cast<long>(std::ceil(6.0 * std::sqrt(pulse_sigma) / ts));
}

double gauss_amp(double pulse_sigma, double t) {
  return std::pow(2.0 / pulse_sigma, 0.25) * std::exp(-std::numbers::pi * t * t / pulse_sigma);
}

}  // namespace

ReceiverSpec resolve_offsets(const ReceiverSpec& rx, double pulse_sigma,
                             const ScatteringSpec& scat) {
  ReceiverSpec out = rx;
  switch (rx.mode) {
    case ReceiverMode::TPR:
      out.delta_t = 0.0;
      out.delta_f = 0.0;
      break;
    case ReceiverMode::MaxSINR: {
      const auto [dt, df] = scat.kind == ScatteringKind::Uniform
                                ? closed_form_offset_uni(scat)
                                : closed_form_offset_exp(pulse_sigma, scat);
      out.delta_t = dt;
      out.delta_f = df;
      break;
    }
    case ReceiverMode::Manual:
      break;
  }
  return out;
}

std::pair<double, double> effective_offsets(const ReceiverSpec& rx) {
  if (rx.mode == ReceiverMode::TPR) return {0.0, 0.0};
  return {rx.delta_t, rx.delta_f};
}

SampledSignal modulate(const SymbolGrid& grid, const LatticeSpec& lattice, double pulse_sigma,
                       double ts) {
  if (pulse_sigma <= 0.0) throw std::invalid_argument("modulate: pulse_sigma must be positive");
  if (ts <= 0.0) throw std::invalid_argument("modulate: ts must be positive");
  if (grid.M != lattice.M || grid.N != lattice.N)
    throw std::invalid_argument("modulate: grid and lattice dimensions disagree");

  const long H = support_half(pulse_sigma, ts);
  const double t_last = lattice_time_center(lattice, 2, lattice.M - 1);
  const long n_samples = std::lround(t_last / ts) + 2 * H + 1;

  SampledSignal x;
  x.ts = ts;
  x.t0 = -static_cast<double>(H) * ts;
  x.samples.assign(static_cast<std::size_t>(n_samples), cplx{0.0, 0.0});

  for (int coset = 1; coset <= 2; ++coset) {
    for (int m = 0; m < lattice.M; ++m) {
      const double t_c = lattice_time_center(lattice, coset, m);
      const long kc = std::lround((t_c - x.t0) / ts);
      const long k0 = std::max(kc - H, 0L);
      const long k1 = std::min(kc + H, n_samples - 1);
      for (int n = 0; n < lattice.N; ++n) {
        const cplx c = grid.at(coset, m, n);
        if (c == cplx{0.0, 0.0}) continue;
        const double f_c = lattice_freq_center(lattice, coset, n);
        for (long k = k0; k <= k1; ++k) {
          const double t = x.t0 + k * ts;
          x.samples[static_cast<std::size_t>(k)] +=
              c * gauss_amp(pulse_sigma, t - t_c) * std::polar(1.0, kTwoPi * f_c * t);
        }
      }
    }
  }
  return x;
}

cplx demodulate(const SampledSignal& r, const LatticeSpec& lattice, double pulse_sigma,
                const ReceiverSpec& rx, int coset, int m, int n) {
  if (pulse_sigma <= 0.0) throw std::invalid_argument("demodulate: pulse_sigma must be positive");
  if (r.ts <= 0.0 || r.samples.empty()) throw std::invalid_argument("demodulate: empty signal");

  const auto [dt, df] = effective_offsets(rx);
  const double t_c = lattice_time_center(lattice, coset, m);
  const double f_c = lattice_freq_center(lattice, coset, n);
  const long H = support_half(pulse_sigma, r.ts);
  const long kc = std::lround((t_c + dt - r.t0) / r.ts);
  if (kc - H < 0 || kc + H >= static_cast<long>(r.size()))
    throw std::out_of_range("demodulate: pulse support exceeds the signal window");

  cplx acc{0.0, 0.0};
  for (long k = kc - H; k <= kc + H; ++k) {
    const double t = r.t0 + k * r.ts;
    // psi(t) = g(t - t_c - dt) e^{j2pi df (t - t_c)} e^{j2pi f_c t}
    const cplx psi = gauss_amp(pulse_sigma, t - t_c - dt) *
                     std::polar(1.0, kTwoPi * (df * (t - t_c) + f_c * t));
    acc += r.samples[static_cast<std::size_t>(k)] * std::conj(psi);
  }
  return acc * r.ts;
}

cplx effective_gain(const ChannelRealization& real, const LatticeSpec& lattice, double pulse_sigma,
                    const ReceiverSpec& rx, int coset, int m, int n, double ts) {
  if (pulse_sigma <= 0.0)
    throw std::invalid_argument("effective_gain: pulse_sigma must be positive");
  if (ts <= 0.0) throw std::invalid_argument("effective_gain: ts must be positive");

  const auto [dt, df] = effective_offsets(rx);
  const double t_c = lattice_time_center(lattice, coset, m);
  const double f_c = lattice_freq_center(lattice, coset, n);

  cplx acc{0.0, 0.0};
  for (const auto& p : real.paths) {
    const double lo = std::min(p.tau, dt) - 6.0 * std::sqrt(pulse_sigma);
    const double hi = std::max(p.tau, dt) + 6.0 * std::sqrt(pulse_sigma);
    const long k0 = std::lround(std::floor(lo / ts));
    const long k1 = std::lround(std::ceil(hi / ts));
    cplx inner{0.0, 0.0};
    for (long k = k0; k <= k1; ++k) {
      const double u = k * ts;  // time relative to the symbol center
      inner += gauss_amp(pulse_sigma, u - p.tau) * gauss_amp(pulse_sigma, u - dt) *
               std::polar(1.0, kTwoPi * (p.nu - df) * u);
    }
    acc += p.h * std::polar(1.0, kTwoPi * (p.nu * t_c - f_c * p.tau)) * inner * ts;
  }
  return acc;
}

cplx equalize_genie(cplx y, cplx eff_gain) {
  if (std::abs(eff_gain) <= 1e-6) throw std::domain_error("equalize_genie: effective gain underflow");
  return y / eff_gain;
}

}  // namespace hmt
