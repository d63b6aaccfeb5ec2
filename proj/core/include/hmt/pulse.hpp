#pragma once

#include <complex>
#include <cstddef>

#include "hmt/signal.hpp"

namespace hmt {

// Gaussian prototype pulse with optional receive-side timing/frequency offset.
// sigma is the dispersion parameter (seconds^2); the (2/sigma)^{1/4} scale
// makes the pulse unit energy.
struct PulseSpec {
  double sigma = 0.0;
  double delta_t = 0.0;
  double delta_f = 0.0;
};

// Real envelope g(t - delta_t). Frequency offsets are applied by
// sample_pulse, which returns the modulated complex waveform.
double eval_pulse(const PulseSpec& spec, double t);

// n_samples samples of g(t - delta_t) * e^{j2pi delta_f t} at t = t0 + k*ts.
// The modulation phase is referenced to absolute time.
SampledSignal sample_pulse(const PulseSpec& spec, double ts, std::size_t n_samples, double t0);

// Self-ambiguity of the unit-energy Gaussian pulse:
//   A_g(tau, nu) = e^{-(pi/2)(tau^2/sigma + sigma nu^2)} e^{-j pi tau nu}
cplx ambiguity_closed(double sigma, double tau, double nu);

// <psi, g delayed by tau and shifted by nu> where psi is the offset receive
// pulse g(t - delta_t) e^{j2pi delta_f t}. Collapses to ambiguity_closed at
// zero offsets; only the magnitude enters energy computations.
cplx cross_ambiguity(double sigma, double delta_t, double delta_f, double tau, double nu);

}  // namespace hmt
