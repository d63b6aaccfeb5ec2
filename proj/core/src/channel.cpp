#include "hmt/channel.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <stdexcept>

#include "hmt/rng.hpp"

namespace hmt {

namespace {

constexpr double kPi = std::numbers::pi;

void check_spec(const ScatteringSpec& spec) {
  if (spec.f_d <= 0.0) throw std::invalid_argument("scattering: f_d must be positive");
  if (spec.delay_scale() <= 0.0) throw std::invalid_argument("scattering: delay scale must be positive");
}

}  // namespace

ScatteringSpec ScatteringSpec::uniform_spread(double theta, double pulse_sigma) {
  if (theta <= 0.0 || pulse_sigma <= 0.0)
    throw std::invalid_argument("uniform_spread: theta and sigma must be positive");
  ScatteringSpec s;
  s.kind = ScatteringKind::Uniform;
  s.tau_max = std::sqrt(pulse_sigma * theta);
  s.f_d = std::sqrt(theta / pulse_sigma);
  return s;
}

ScatteringSpec ScatteringSpec::exponential_spread(double theta, double pulse_sigma) {
  if (theta <= 0.0 || pulse_sigma <= 0.0)
    throw std::invalid_argument("exponential_spread: theta and sigma must be positive");
  ScatteringSpec s;
  s.kind = ScatteringKind::Exponential;
  s.tau_rms = std::sqrt(pulse_sigma * theta);
  s.f_d = std::sqrt(theta / pulse_sigma);
  return s;
}

double scattering_density(const ScatteringSpec& spec, double tau, double nu) {
  check_spec(spec);
  if (spec.kind == ScatteringKind::Uniform) {
    if (tau <= 0.0 || tau > spec.tau_max || std::abs(nu) >= spec.f_d) return 0.0;
    return 1.0 / (2.0 * spec.tau_max * spec.f_d);
  }
  if (tau <= 0.0 || std::abs(nu) >= spec.f_d) return 0.0;
  const double r = nu / spec.f_d;
  return std::exp(-tau / spec.tau_rms) / (kPi * spec.tau_rms * spec.f_d * std::sqrt(1.0 - r * r));
}

ChannelRealization sample_realization(const ScatteringSpec& spec, int n_paths,
                                      std::uint64_t rng_seed) {
  check_spec(spec);
  if (n_paths < 1) throw std::invalid_argument("sample_realization: need at least one path");
  RandomSource rng(rng_seed);
  ChannelRealization out;
  out.paths.resize(static_cast<std::size_t>(n_paths));

  const double amp = 1.0 / std::sqrt(static_cast<double>(n_paths));
  for (auto& p : out.paths) {
    if (spec.kind == ScatteringKind::Uniform) {
      // delay in (0, tau_max]: flip the half-open uniform
      p.tau = spec.tau_max * (1.0 - rng.uniform());
      p.nu = rng.uniform(-spec.f_d, spec.f_d);
    } else {
      double tau;
      do {
        tau = -spec.tau_rms * std::log(1.0 - rng.uniform());
      } while (tau > 10.0 * spec.tau_rms || tau <= 0.0);
      p.tau = tau;
      // inverse CDF of the U-shaped Doppler spectrum
      p.nu = spec.f_d * std::sin(kPi * (rng.uniform() - 0.5));
    }
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    p.h = cplx{amp * std::cos(phi), amp * std::sin(phi)};
  }

  // equal magnitudes, so exact unit power needs only one rescale
  double pw = 0.0;
  for (const auto& p : out.paths) pw += std::norm(p.h);
  const double s = 1.0 / std::sqrt(pw);
  for (auto& p : out.paths) p.h *= s;
  return out;
}

SampledSignal apply_channel(const ChannelRealization& real, const SampledSignal& x) {
  if (x.ts <= 0.0 || x.samples.empty()) throw std::invalid_argument("apply_channel: empty signal");
  if (real.paths.empty()) throw std::invalid_argument("apply_channel: empty realization");

  long max_d = 0;
  for (const auto& p : real.paths) {
    const long d = std::lround(p.tau / x.ts);
    if (d < 0) throw std::invalid_argument("apply_channel: negative delay");
    max_d = std::max(max_d, d);
  }

  SampledSignal out;
  out.ts = x.ts;
  out.t0 = x.t0;
  out.samples.assign(x.samples.size() + static_cast<std::size_t>(max_d), cplx{0.0, 0.0});

  const long n_in = static_cast<long>(x.samples.size());
  for (const auto& p : real.paths) {
    const long d = std::lround(p.tau / x.ts);
    // e^{j2pi nu t} advanced by recurrence over output samples
    const double dph = 2.0 * kPi * p.nu * x.ts;
    const cplx step{std::cos(dph), std::sin(dph)};
    const double ph0 = 2.0 * kPi * p.nu * (x.t0 + static_cast<double>(d) * x.ts);
    cplx ramp = p.h * cplx{std::cos(ph0), std::sin(ph0)};
    for (long s = 0; s < n_in; ++s) {
      out.samples[static_cast<std::size_t>(s + d)] += ramp * x.samples[static_cast<std::size_t>(s)];
      ramp *= step;
    }
  }
  return out;
}

SampledSignal add_noise(const SampledSignal& x, NoiseSpec noise, std::uint64_t rng_seed) {
  if (noise.sigma_w2 < 0.0) throw std::invalid_argument("add_noise: negative variance");
  SampledSignal out = x;
  if (noise.sigma_w2 == 0.0) return out;
  RandomSource rng(rng_seed);
  const double s = std::sqrt(noise.sigma_w2);
  for (auto& v : out.samples) v += s * rng.cgauss();
  return out;
}

std::string to_json_string(const ScatteringSpec& spec, const ChannelRealization& real) {
  nlohmann::json j;
  j["kind"] = spec.kind == ScatteringKind::Uniform ? "uni" : "exp";
  if (spec.kind == ScatteringKind::Uniform)
    j["tau_max"] = spec.tau_max;
  else
    j["tau_rms"] = spec.tau_rms;
  j["f_d"] = spec.f_d;
  auto& paths = j["paths"] = nlohmann::json::array();
  for (const auto& p : real.paths)
    paths.push_back({{"tau", p.tau}, {"nu", p.nu}, {"re", p.h.real()}, {"im", p.h.imag()}});
  return j.dump(2);
}

ChannelRealization realization_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ChannelRealization out;
  for (const auto& jp : j.at("paths"))
    out.paths.push_back({jp.at("tau").get<double>(), jp.at("nu").get<double>(),
                         cplx{jp.at("re").get<double>(), jp.at("im").get<double>()}});
  return out;
}

}  // namespace hmt
