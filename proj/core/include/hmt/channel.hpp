#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmt/signal.hpp"

namespace hmt {

enum class ScatteringKind { Uniform, Exponential };

// WSSUS scattering function. Uniform: flat over (0, tau_max] x (-f_d, f_d).
// Exponential: exponential delay profile with U-shaped Doppler spectrum.
// The spread factor is tau_max*f_d resp. tau_rms*f_d.
struct ScatteringSpec {
  ScatteringKind kind = ScatteringKind::Uniform;
  double tau_max = 0.0;  // Uniform only
  double tau_rms = 0.0;  // Exponential only
  double f_d = 0.0;

  double delay_scale() const { return kind == ScatteringKind::Uniform ? tau_max : tau_rms; }
  double spread() const { return delay_scale() * f_d; }

  // Balanced delay/Doppler split for a target spread factor: the ratio
  // delay_scale/f_d equals the pulse dispersion, which is the matched
  // operating point for the Gaussian prototype.
  static ScatteringSpec uniform_spread(double theta, double pulse_sigma);
  static ScatteringSpec exponential_spread(double theta, double pulse_sigma);
};

struct ChannelPath {
  double tau = 0.0;
  double nu = 0.0;
  cplx h{0.0, 0.0};
};

// Discrete multipath realization of the scattering statistics.
// Invariant: sum_p |h_p|^2 == 1 exactly (renormalized per realization).
struct ChannelRealization {
  std::vector<ChannelPath> paths;
};

struct NoiseSpec {
  double sigma_w2 = 0.0;  // variance per complex sample
};

double scattering_density(const ScatteringSpec& spec, double tau, double nu);

// Paths drawn i.i.d. from the delay and Doppler marginals; equal-magnitude
// gains with uniform phases. Delays stay continuous here; any grid rounding
// happens in apply_channel.
ChannelRealization sample_realization(const ScatteringSpec& spec, int n_paths,
                                      std::uint64_t rng_seed);

// y(t) = sum_p h_p x(t - tau_p) e^{j2pi nu_p t}, delays rounded to the
// sample grid, Doppler ramps referenced to absolute signal time.
SampledSignal apply_channel(const ChannelRealization& real, const SampledSignal& x);

SampledSignal add_noise(const SampledSignal& x, NoiseSpec noise, std::uint64_t rng_seed);

std::string to_json_string(const ScatteringSpec& spec, const ChannelRealization& real);
ChannelRealization realization_from_json(const std::string& text);

}  // namespace hmt
