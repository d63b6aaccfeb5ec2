#pragma once

#include <utility>

#include "hmt/channel.hpp"
#include "hmt/lattice.hpp"
#include "hmt/signal.hpp"

namespace hmt {

enum class ReceiverMode { TPR, MaxSINR, Manual };

// TPR projects with the bare prototype; MaxSINR and Manual shift it by
// (delta_t, delta_f). For MaxSINR the offsets come from the scattering
// profile: fill them with resolve_offsets before demodulating.
struct ReceiverSpec {
  ReceiverMode mode = ReceiverMode::TPR;
  double delta_t = 0.0;
  double delta_f = 0.0;
};

// Returns a copy with delta_t/delta_f made effective: TPR maps to (0, 0),
// MaxSINR to the closed-form offsets for the given scattering profile,
// Manual passes through.
ReceiverSpec resolve_offsets(const ReceiverSpec& rx, double pulse_sigma,
                             const ScatteringSpec& scat);

// Offsets demodulate will use; requires MaxSINR specs to be resolved.
std::pair<double, double> effective_offsets(const ReceiverSpec& rx);

SampledSignal modulate(const SymbolGrid& grid, const LatticeSpec& lattice, double pulse_sigma,
                       double ts);

// Riemann inner product of r with the receive pulse at (coset, m, n);
// throws if the pulse support is not fully inside the signal window.
cplx demodulate(const SampledSignal& r, const LatticeSpec& lattice, double pulse_sigma,
                const ReceiverSpec& rx, int coset, int m, int n);

// <H[g_{m,n}], psi_{m,n}>: per-path discrete inner product of the delayed,
// Doppler-shifted transmit pulse with the receive pulse. ts sets the
// discretization step of that inner product.
cplx effective_gain(const ChannelRealization& real, const LatticeSpec& lattice, double pulse_sigma,
                    const ReceiverSpec& rx, int coset, int m, int n, double ts);

// One-tap genie equalizer; throws std::domain_error when |eff_gain| <= 1e-6
// (callers count the symbol as erased).
cplx equalize_genie(cplx y, cplx eff_gain);

}  // namespace hmt
