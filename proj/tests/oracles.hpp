#pragma once

// Reference values computed by routes independent of the library internals:
// plain Riemann sums, fixed-order Gauss-Legendre panels, and closed error
// function forms written out from scratch. Tests compare library output
// against these, never against other library calls.

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>

namespace oracles {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double gauss_env(double sigma, double t) {
  return std::pow(2.0 / sigma, 0.25) * std::exp(-kPi * t * t / sigma);
}

// A_g(tau, nu) = integral of g(t) g(t - tau) e^{-j2pi nu t} dt, midpoint rule
inline std::complex<double> ambiguity_riemann(double sigma, double tau, double nu) {
  const double step = std::sqrt(sigma) / 40.0;
  const double half = 6.0 * std::sqrt(sigma) + std::abs(tau);
  const long n = static_cast<long>(std::ceil(2.0 * half / step));
  std::complex<double> acc{0.0, 0.0};
  for (long k = 0; k < n; ++k) {
    const double t = -half + (k + 0.5) * step;
    acc += gauss_env(sigma, t) * gauss_env(sigma, t - tau) *
           std::polar(1.0, -2.0 * kPi * nu * t);
  }
  return acc * step;
}

// integral of g(t - delta_t) e^{j2pi delta_f t} g(t - tau) e^{-j2pi nu t} dt
inline std::complex<double> cross_ambiguity_riemann(double sigma, double delta_t, double delta_f,
                                                    double tau, double nu) {
  const double step = std::sqrt(sigma) / 40.0;
  const double lo = std::min(delta_t, tau) - 6.0 * std::sqrt(sigma);
  const double hi = std::max(delta_t, tau) + 6.0 * std::sqrt(sigma);
  const long n = static_cast<long>(std::ceil((hi - lo) / step));
  std::complex<double> acc{0.0, 0.0};
  for (long k = 0; k < n; ++k) {
    const double t = lo + (k + 0.5) * step;
    acc += gauss_env(sigma, t - delta_t) * gauss_env(sigma, t - tau) *
           std::polar(1.0, 2.0 * kPi * (delta_f - nu) * t);
  }
  return acc * step;
}

// |A_g|^2 summed over the nonzero lattice shifts of both cosets: half-step
// index pairs (k, l) of equal parity, k = l = 0 excluded
inline double delta_interference_ring(double sigma, double T, double F, int R) {
  double acc = 0.0;
  for (int k = -2 * R; k <= 2 * R; ++k)
    for (int l = -2 * R; l <= 2 * R; ++l) {
      if ((k & 1) != (l & 1)) continue;
      if (k == 0 && l == 0) continue;
      const double dt = 0.5 * k * T, df = 0.5 * l * F;
      acc += std::exp(-kPi * (dt * dt / sigma + sigma * df * df));
    }
  return acc;
}

// closed-form axis factors for the interference sum, written independently

inline double uni_delay_closed(double sigma, double tau_max, double x) {
  const double r = std::sqrt(kPi / sigma);
  return 0.5 * std::sqrt(sigma) * (std::erf(r * (tau_max - x)) - std::erf(r * (0.0 - x)));
}

inline double uni_doppler_closed(double sigma, double f_d, double y) {
  const double r = std::sqrt(sigma * kPi);
  return 0.5 / std::sqrt(sigma) * (std::erf(r * (f_d - y)) - std::erf(r * (-f_d - y)));
}

inline double exp_delay_closed(double sigma, double tau_rms, double x) {
  const double c = sigma / (2.0 * kPi * tau_rms);
  const double a = std::exp(sigma / (4.0 * kPi * tau_rms * tau_rms) - x / tau_rms);
  const double b = 0.5 * std::sqrt(sigma) * std::erfc(std::sqrt(kPi / sigma) * (c - x));
  return a * b;
}

// (1/pi) integral over theta in (-pi/2, pi/2) of e^{-sigma pi (f_d sin theta - y)^2},
// one fixed 201-point Gauss-Legendre panel
inline double exp_doppler_weight_gl(double sigma, double f_d, double y) {
  auto f = [&](double th) {
    const double d = f_d * std::sin(th) - y;
    return std::exp(-sigma * kPi * d * d);
  };
  return boost::math::quadrature::gauss<double, 201>::integrate(f, -0.5 * kPi, 0.5 * kPi) / kPi;
}

struct InterferenceParams {
  bool uniform = true;
  double sigma = 0.0;
  double tau_max = 0.0;  // uniform
  double tau_rms = 0.0;  // exponential
  double f_d = 0.0;
  double T = 0.0, F = 0.0;
  double sigma_c2 = 1.0;
  double sigma_w2 = 0.0;
};

// E_IN assembled from the closed axis forms above; radius R in full lattice
// steps, half-step pairs of equal parity, probe term excluded
inline double interference_closed(const InterferenceParams& q, double delta_t, double delta_f,
                                  int R) {
  double acc = 0.0;
  for (int k = -2 * R; k <= 2 * R + 1; ++k)
    for (int l = -2 * R; l <= 2 * R + 1; ++l) {
      if ((k & 1) != (l & 1)) continue;
      if (k == 0 && l == 0) continue;
      const double x = delta_t - 0.5 * k * q.T;
      const double y = delta_f - 0.5 * l * q.F;
      const double dv = q.uniform ? uni_delay_closed(q.sigma, q.tau_max, x)
                                  : exp_delay_closed(q.sigma, q.tau_rms, x) / q.tau_rms;
      const double fv = q.uniform ? uni_doppler_closed(q.sigma, q.f_d, y)
                                  : exp_doppler_weight_gl(q.sigma, q.f_d, y);
      acc += dv * fv;
    }
  const double norm = q.uniform ? q.sigma_c2 / (2.0 * q.tau_max * q.f_d) : q.sigma_c2;
  const double a00 = std::exp(
      -0.5 * kPi * (delta_t * delta_t / q.sigma + q.sigma * delta_f * delta_f));
  return norm * acc + q.sigma_w2 * a00;
}

}  // namespace oracles
