#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hmt/channel.hpp"
#include "hmt/lattice.hpp"

namespace hmt {

struct SinrParams {
  ScatteringSpec scattering;
  LatticeSpec lattice;
  double sigma = 0.0;      // pulse dispersion
  double sigma_c2 = 1.0;   // symbol power
  double sigma_w2 = 0.0;   // noise variance
  int trunc_radius = 0;    // 0: auto (largest omitted interference term < 1e-12)
};

struct OffsetResult {
  double delta_t = 0.0;
  double delta_f = 0.0;
  double sinr_db = 0.0;
  enum class Method { ClosedForm, GridSearch } method = Method::GridSearch;
};

// Interference-plus-noise energy at the probe symbol: lattice-shifted
// scattering integrals (quadrature) summed over both cosets, plus the noise
// term sigma_w2 * |A(0,0)| with the receive-offset ambiguity magnitude
// entering at first power. The first power matches the source analysis as
// written; the Monte Carlo comparison in the acceptance suite bounds the
// effect of that convention.
double interference_energy(const SinrParams& p, double delta_t, double delta_f);

// Desired-symbol energy; closed forms in the delay direction, quadrature for
// the exponential channel's Doppler direction.
double signal_energy(const SinrParams& p, double delta_t, double delta_f);

double sinr_uni(const SinrParams& p, double delta_t, double delta_f);  // dB
double sinr_exp(const SinrParams& p, double delta_t, double delta_f);  // dB
double sinr_db(const SinrParams& p, double delta_t, double delta_f);   // dispatch on kind

// The analysis derives pulse offsets by maximizing the matched-energy
// numerator; the full objective includes the offset-dependent denominator.
// Both are exposed.
enum class SearchObjective { FullSinr, NumeratorOnly };

// 41x41 coarse grid over [0, tau_max] (or [0, 5 tau_rms]) x (-f_d, f_d),
// then golden-section per axis. sinr_db of the result is always the full
// objective at p.sigma_w2.
OffsetResult upper_bound_search(const SinrParams& p,
                                SearchObjective objective = SearchObjective::FullSinr);

// (tau_max/2, 0)
std::pair<double, double> closed_form_offset_uni(const ScatteringSpec& scat);

// Closed-form timing offset for the exponential profile: root of the
// stationarity quadratic after the erfc approximation, evaluated as printed
// in the source analysis. Falls back to the numeric maximizer of the delay
// factor (with a warning) if the printed discriminant goes negative.
std::pair<double, double> closed_form_offset_exp(double sigma, const ScatteringSpec& scat);

struct ExpOffsetDetails {
  double delta_t_closed = 0.0;   // printed quadratic root
  double delta_t_numeric = 0.0;  // fine-grid maximizer of the delay factor
  double discriminant = 0.0;
  bool used_fallback = false;
};
ExpOffsetDetails exp_offset_details(double sigma, const ScatteringSpec& scat);

// --- factor-level pieces, exposed for verification and tests ---

// integral of e^{-pi (tau - x)^2 / sigma} over (0, tau_max], error function form
double uni_delay_integral(double sigma, double tau_max, double x);
// integral of e^{-sigma pi (nu - y)^2} over (-f_d, f_d), error function form
double uni_doppler_integral(double sigma, double f_d, double y);

// a(x) * b(x): exponential-weighted delay integral, closed form
double exp_delay_ab(double sigma, double tau_rms, double x);
// b(x) = (sqrt(sigma)/2) erfc(sqrt(pi/sigma) (c - x)), c = sigma/(2 pi tau_rms)
double exp_delay_b(double sigma, double tau_rms, double x);
// U-shape-weighted Doppler integral via the nu = f_d sin(theta) substitution;
// normalized so it integrates the Doppler density times the pulse factor
double exp_doppler_weight(double sigma, double f_d, double y);
// d/dy of the unnormalized Doppler integral; odd in y
double exp_doppler_slope(double sigma, double f_d, double y);
// second derivative; negative across the Doppler span at small sigma*y^2
double exp_doppler_slope_derivative(double sigma, double f_d, double y);

// rational approximation of erfc(x/sqrt(2)) used by the offset derivation
double erfc_ratio_approx(double x);

// --- derivation verification reports ---

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;  // measured residual / extremum
  double bound = 0.0;  // tolerance it was held against
};

struct CheckReport {
  std::string title;
  std::vector<Check> checks;
  bool all_passed() const;
};

// Numerical audit of the uniform-profile offset derivation: factor
// separability, quadrature-vs-closed-form agreement, the alpha/beta and
// kappa/chi stationarity balances, and centering of the optimum.
CheckReport verify_uni_offset_derivation(const SinrParams& p, int n_points = 41);

// Numerical audit of the exponential-profile offset derivation: b(x) closed
// form, the erfc approximation bound, stationarity at the numeric maximizer,
// oddness and negative slope of the Doppler gradient.
CheckReport verify_exp_offset_derivation(const SinrParams& p, int n_points = 41);

std::string to_json_string(const CheckReport& report);

}  // namespace hmt
