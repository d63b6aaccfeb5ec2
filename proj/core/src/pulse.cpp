#include "hmt/pulse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hmt {

namespace {
constexpr double kPi = std::numbers::pi;
}

double eval_pulse(const PulseSpec& spec, double t) {
  if (spec.sigma <= 0.0) throw std::invalid_argument("eval_pulse: sigma must be positive");
  const double x = t - spec.delta_t;
  return std::pow(2.0 / spec.sigma, 0.25) * std::exp(-kPi * x * x / spec.sigma);
}

SampledSignal sample_pulse(const PulseSpec& spec, double ts, std::size_t n_samples, double t0) {
  if (ts <= 0.0) throw std::invalid_argument("sample_pulse: ts must be positive");
  if (n_samples == 0) throw std::invalid_argument("sample_pulse: need at least one sample");
  SampledSignal out;
  out.ts = ts;
  out.t0 = t0;
  out.samples.resize(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = t0 + static_cast<double>(k) * ts;
    const double a = eval_pulse(spec, t);
    if (spec.delta_f == 0.0) {
      out.samples[k] = a;
    } else {
      const double ph = 2.0 * kPi * spec.delta_f * t;
      out.samples[k] = cplx{a * std::cos(ph), a * std::sin(ph)};
    }
  }
  return out;
}

cplx ambiguity_closed(double sigma, double tau, double nu) {
  if (sigma <= 0.0) throw std::invalid_argument("ambiguity_closed: sigma must be positive");
  const double mag = std::exp(-0.5 * kPi * (tau * tau / sigma + sigma * nu * nu));
  const double ph = -kPi * tau * nu;
  return {mag * std::cos(ph), mag * std::sin(ph)};
}

cplx cross_ambiguity(double sigma, double delta_t, double delta_f, double tau, double nu) {
  const cplx a = ambiguity_closed(sigma, tau - delta_t, nu - delta_f);
  const double ph = -2.0 * kPi * (nu - delta_f) * delta_t;
  return a * cplx{std::cos(ph), std::sin(ph)};
}

}  // namespace hmt
