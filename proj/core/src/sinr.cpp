#include "hmt/sinr.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hmt/pulse.hpp"
#include "hmt/rng.hpp"

namespace hmt {

namespace {

constexpr double kPi = std::numbers::pi;

// One Gauss-Kronrod 61 panel; boost scales both the value and the L1 norm
// it reports (its refinement-error output does not get rescaled, so it is
// not usable here).
template <class F>
double gk_panel(const F& f, double a, double b, double* l1) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, nullptr,
                                                                       l1);
}

// Bisection-refined GK61: a panel is accepted once its value agrees with the
// sum of its two halves to within its width's share of the budget, 1e-8 of
// the integral's L1 norm. abs_floor raises the budget's base for callers
// summing many terms, where an underflowed tail term only needs to be known
// as negligible. Throws when the budget cannot be met.
template <class F>
double gk(const F& f, double a, double b, double abs_floor = 0.0) {
  double l1_root = 0.0;
  const double root = gk_panel(f, a, b, &l1_root);
  const double budget = 1e-8 * std::max(l1_root, std::max(abs_floor, 1e-300));
  struct Rec {
    const F& f;
    double budget, width;
    double leftover = 0.0;
    double run(double a, double b, double parent, int depth) {
      const double m = 0.5 * (a + b);
      double l1l = 0.0, l1r = 0.0;
      const double left = gk_panel(f, a, m, &l1l);
      const double right = gk_panel(f, m, b, &l1r);
      const double sum = left + right;
      const double diff = std::abs(sum - parent);
      if (diff <= budget * ((b - a) / width)) return sum;
      if (depth >= 13) {
        leftover = std::max(leftover, diff);
        return sum;
      }
      return run(a, m, left, depth + 1) + run(m, b, right, depth + 1);
    }
  } rec{f, budget, b - a};
  const double v = rec.run(a, b, root, 0);
  if (rec.leftover > 0.0) {
    std::ostringstream os;
    os << "sinr: quadrature did not converge (interval [" << a << ", " << b << "], leftover "
       << rec.leftover << ", budget " << budget << ")";
    throw std::runtime_error(os.str());
  }
  return v;
}

// quadrature route for the uniform-profile delay factor
double q_uni_delay(double sigma, double tau_max, double x, double abs_floor = 0.0) {
  return gk([&](double tau) { return std::exp(-kPi * (tau - x) * (tau - x) / sigma); }, 0.0,
            tau_max, abs_floor);
}

// quadrature route for the uniform-profile Doppler factor
double q_uni_doppler(double sigma, double f_d, double y, double abs_floor = 0.0) {
  return gk([&](double nu) { return std::exp(-sigma * kPi * (nu - y) * (nu - y)); }, -f_d, f_d,
            abs_floor);
}

// exponential-weighted delay factor; upper cut sits far past both the
// exponential tail and the Gaussian bump, so this matches the closed form
// over (0, infinity) to well below the refinement tolerance
double q_exp_delay(double sigma, double tau_rms, double x, double abs_floor = 0.0) {
  const double cut = std::max(10.0 * tau_rms, x) + 8.0 * std::sqrt(sigma);
  return gk(
      [&](double tau) {
        return std::exp(-tau / tau_rms - kPi * (tau - x) * (tau - x) / sigma);
      },
      0.0, cut, abs_floor);
}

double exp_doppler_weight_impl(double sigma, double f_d, double y, double abs_floor) {
  return gk(
             [&](double th) {
               const double d = f_d * std::sin(th) - y;
               return std::exp(-sigma * kPi * d * d);
             },
             -0.5 * kPi, 0.5 * kPi, abs_floor) /
         kPi;
}

void require_kind(const SinrParams& p, ScatteringKind kind, const char* what) {
  if (p.scattering.kind != kind) throw std::invalid_argument(std::string(what) + ": wrong scattering kind");
}

void check_params(const SinrParams& p) {
  if (p.sigma <= 0.0) throw std::invalid_argument("sinr: sigma must be positive");
  if (p.sigma_c2 < 0.0 || p.sigma_w2 < 0.0) throw std::invalid_argument("sinr: negative power");
  if (p.lattice.T <= 0.0 || p.lattice.F <= 0.0) throw std::invalid_argument("sinr: bad lattice");
}

struct AxisCache {
  // integral values indexed by half-step count k: offset = 0.5*k*step
  std::vector<double> vals;
  int lo = 0;
  double& at(int k) { return vals[static_cast<std::size_t>(k - lo)]; }
};

}  // namespace

double uni_delay_integral(double sigma, double tau_max, double x) {
  const double r = std::sqrt(kPi / sigma);
  return 0.5 * std::sqrt(sigma) * (std::erf(r * (tau_max - x)) + std::erf(r * x));
}

double uni_doppler_integral(double sigma, double f_d, double y) {
  const double r = std::sqrt(sigma * kPi);
  return 0.5 / std::sqrt(sigma) * (std::erf(r * (f_d - y)) + std::erf(r * (f_d + y)));
}

double exp_delay_b(double sigma, double tau_rms, double x) {
  const double c = sigma / (2.0 * kPi * tau_rms);
  return 0.5 * std::sqrt(sigma) * std::erfc(std::sqrt(kPi / sigma) * (c - x));
}

double exp_delay_ab(double sigma, double tau_rms, double x) {
  const double a = std::exp(sigma / (4.0 * kPi * tau_rms * tau_rms) - x / tau_rms);
  return a * exp_delay_b(sigma, tau_rms, x);
}

double exp_doppler_weight(double sigma, double f_d, double y) {
  return exp_doppler_weight_impl(sigma, f_d, y, 0.0);
}

double exp_doppler_slope(double sigma, double f_d, double y) {
  return gk(
      [&](double th) {
        const double d = f_d * std::sin(th) - y;
        return 2.0 * sigma * kPi * d * std::exp(-sigma * kPi * d * d) * f_d;
      },
      -0.5 * kPi, 0.5 * kPi);
}

double exp_doppler_slope_derivative(double sigma, double f_d, double y) {
  return gk(
      [&](double th) {
        const double d = f_d * std::sin(th) - y;
        const double e = sigma * kPi * d * d;
        return 2.0 * sigma * kPi * (2.0 * e - 1.0) * std::exp(-e) * f_d;
      },
      -0.5 * kPi, 0.5 * kPi);
}

double erfc_ratio_approx(double x) {
  return 2.0 * std::exp(-0.5 * x * x) / (1.64 * x + std::sqrt(0.76 * x * x + 4.0));
}

double signal_energy(const SinrParams& p, double delta_t, double delta_f) {
  check_params(p);
  const auto& s = p.scattering;
  if (s.kind == ScatteringKind::Uniform) {
    return p.sigma_c2 / (2.0 * s.tau_max * s.f_d) * uni_delay_integral(p.sigma, s.tau_max, delta_t) *
           uni_doppler_integral(p.sigma, s.f_d, delta_f);
  }
  return p.sigma_c2 * exp_delay_ab(p.sigma, s.tau_rms, delta_t) / s.tau_rms *
         exp_doppler_weight(p.sigma, s.f_d, delta_f);
}

double interference_energy(const SinrParams& p, double delta_t, double delta_f) {
  check_params(p);
  const auto& s = p.scattering;
  const bool uni = s.kind == ScatteringKind::Uniform;
  const double T = p.lattice.T, F = p.lattice.F;

  // Convergence floors at 1e-7 of each axis factor's on-probe scale: far
  // interferer rows only need to be known as negligible, and the error
  // estimator turns conservative once they underflow. Worst case this admits
  // 1e-15 * peak absolute error per term, ~1e-10 relative on the sum.
  const double rs = std::sqrt(p.sigma);
  const double dt_floor = 1e-7 * std::min(uni ? s.tau_max : s.tau_rms, rs);
  const double df_floor = 1e-7 * (uni ? std::min(2.0 * s.f_d, 1.0 / rs) : 1.0);
  auto delay_val = [&](double x) {
    return uni ? q_uni_delay(p.sigma, s.tau_max, x, dt_floor)
               : q_exp_delay(p.sigma, s.tau_rms, x, dt_floor) / s.tau_rms;
  };
  auto dop_val = [&](double y) {
    return uni ? q_uni_doppler(p.sigma, s.f_d, y, df_floor)
               : exp_doppler_weight_impl(p.sigma, s.f_d, y, df_floor);
  };
  const double norm = uni ? p.sigma_c2 / (2.0 * s.tau_max * s.f_d) : p.sigma_c2;

  // Per-axis caches over half-lattice steps: even entries are coset-1 rows,
  // odd entries coset-2. Interference couples even-with-even and
  // odd-with-odd only.
  AxisCache dt_cache, df_cache;
  auto fill = [&](AxisCache& cache, int R, auto&& f, double step, double center) {
    cache.lo = -2 * R;
    cache.vals.clear();
    cache.vals.reserve(static_cast<std::size_t>(4 * R + 2));
    for (int k = -2 * R; k <= 2 * R + 1; ++k) cache.vals.push_back(f(center - 0.5 * k * step));
  };

  auto total_at = [&](int R) {
    fill(dt_cache, R, delay_val, T, delta_t);
    fill(df_cache, R, dop_val, F, delta_f);
    double acc = 0.0;
    for (int k = -2 * R; k <= 2 * R + 1; ++k) {
      const bool odd = k & 1;
      for (int l = -2 * R + (odd ? 1 : 0); l <= 2 * R + 1; l += 2) {
        if ((l & 1) != (k & 1)) continue;
        if (!odd && k == 0 && l == 0) continue;  // the probe symbol itself
        acc += dt_cache.at(k) * df_cache.at(l);
      }
    }
    return norm * acc;
  };

  int R = p.trunc_radius > 0 ? p.trunc_radius : 4;
  double total = total_at(R);
  if (p.trunc_radius == 0) {
    for (; R < 10; ++R) {
      const double wider = total_at(R + 1);
      if (std::abs(wider - total) <= 1e-12 * std::max(wider, 1e-30)) {
        total = wider;
        break;
      }
      total = wider;
    }
  }

  const double a00 = std::exp(-0.5 * kPi * (delta_t * delta_t / p.sigma +
                                            p.sigma * delta_f * delta_f));
  return total + p.sigma_w2 * a00;
}

double sinr_uni(const SinrParams& p, double delta_t, double delta_f) {
  require_kind(p, ScatteringKind::Uniform, "sinr_uni");
  return 10.0 * std::log10(signal_energy(p, delta_t, delta_f) /
                           interference_energy(p, delta_t, delta_f));
}

double sinr_exp(const SinrParams& p, double delta_t, double delta_f) {
  require_kind(p, ScatteringKind::Exponential, "sinr_exp");
  return 10.0 * std::log10(signal_energy(p, delta_t, delta_f) /
                           interference_energy(p, delta_t, delta_f));
}

double sinr_db(const SinrParams& p, double delta_t, double delta_f) {
  return p.scattering.kind == ScatteringKind::Uniform ? sinr_uni(p, delta_t, delta_f)
                                                      : sinr_exp(p, delta_t, delta_f);
}

namespace {

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

OffsetResult upper_bound_search(const SinrParams& p, SearchObjective objective) {
  check_params(p);
  const auto& s = p.scattering;
  const bool uni = s.kind == ScatteringKind::Uniform;
  const double span_t = uni ? s.tau_max : 5.0 * s.tau_rms;
  const double f_d = s.f_d;

  auto value = [&](double dt, double df) {
    if (objective == SearchObjective::NumeratorOnly) return signal_energy(p, dt, df);
    return 10.0 * std::log10(signal_energy(p, dt, df) / interference_energy(p, dt, df));
  };

  constexpr int G = 41;
  // Doppler grid on cell midpoints: stays inside the open (-f_d, f_d) span
  // and lands on 0 exactly.
  auto df_at = [&](int j) { return -f_d + (j + 0.5) * (2.0 * f_d / G); };
  auto dt_at = [&](int i) { return span_t * i / (G - 1.0); };

  int bi = 0, bj = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      const double v = value(dt_at(i), df_at(j));
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }

  double dt = dt_at(bi), df = df_at(bj);
  const double step_t = span_t / (G - 1.0), step_f = 2.0 * f_d / G;
  for (int pass = 0; pass < 2; ++pass) {
    dt = golden_max([&](double x) { return value(x, df); }, std::max(0.0, dt - step_t),
                    std::min(span_t, dt + step_t), 1e-5 * span_t);
    df = golden_max([&](double y) { return value(dt, y); },
                    std::max(-f_d + 0.5 * step_f, df - step_f),
                    std::min(f_d - 0.5 * step_f, df + step_f), 1e-5 * 2.0 * f_d);
  }

  OffsetResult out;
  out.delta_t = dt;
  out.delta_f = df;
  out.sinr_db = 10.0 * std::log10(signal_energy(p, dt, df) / interference_energy(p, dt, df));
  out.method = OffsetResult::Method::GridSearch;
  return out;
}

std::pair<double, double> closed_form_offset_uni(const ScatteringSpec& scat) {
  if (scat.kind != ScatteringKind::Uniform)
    throw std::invalid_argument("closed_form_offset_uni: wrong scattering kind");
  return {0.5 * scat.tau_max, 0.0};
}

namespace {

double argmax_exp_delay(double sigma, double tau_rms) {
  const double span = 5.0 * tau_rms;
  constexpr int n = 10000;
  int bi = 0;
  double best = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double v = exp_delay_ab(sigma, tau_rms, span * i / n);
    if (v > best) {
      best = v;
      bi = i;
    }
  }
  const double step = span / n;
  const double x0 = span * bi / n;
  return golden_max([&](double x) { return exp_delay_ab(sigma, tau_rms, x); },
                    std::max(0.0, x0 - step), std::min(span, x0 + step), 1e-7 * span);
}

}  // namespace

ExpOffsetDetails exp_offset_details(double sigma, const ScatteringSpec& scat) {
  if (scat.kind != ScatteringKind::Exponential)
    throw std::invalid_argument("closed_form_offset_exp: wrong scattering kind");
  if (sigma <= 0.0) throw std::invalid_argument("closed_form_offset_exp: sigma must be positive");

  ExpOffsetDetails out;
  const double trms = scat.tau_rms;
  const double c = sigma / (2.0 * kPi * trms);
  const double s_tr2 = sigma / (trms * trms);
  out.discriminant = 3.28 * 3.28 * s_tr2 - 3.52 * (s_tr2 - 4.0);
  out.delta_t_numeric = argmax_exp_delay(sigma, trms);
  if (out.discriminant < 0.0) {
    std::cerr << "closed_form_offset_exp: discriminant negative, falling back to the numeric"
                 " maximizer of the delay factor\n";
    out.used_fallback = true;
    out.delta_t_closed = out.delta_t_numeric;
    return out;
  }
  const double q = std::sqrt(s_tr2);
  const double z = (3.28 * q - std::sqrt(out.discriminant)) / 1.76;
  out.delta_t_closed = c - std::sqrt(sigma / (2.0 * kPi)) * z;
  return out;
}

std::pair<double, double> closed_form_offset_exp(double sigma, const ScatteringSpec& scat) {
  const auto d = exp_offset_details(sigma, scat);
  return {d.delta_t_closed, 0.0};
}

bool CheckReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace {

void push(CheckReport& r, std::string name, double value, double bound, bool passed) {
  r.checks.push_back({std::move(name), passed, value, bound});
}

void push_below(CheckReport& r, std::string name, double value, double bound) {
  push(r, std::move(name), value, bound, value <= bound);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

CheckReport verify_uni_offset_derivation(const SinrParams& p, int n_points) {
  require_kind(p, ScatteringKind::Uniform, "verify_uni_offset_derivation");
  check_params(p);
  const double sg = p.sigma, tm = p.scattering.tau_max, fd = p.scattering.f_d;
  CheckReport r;
  r.title = "uniform-profile offset derivation";

  auto grid = [&](int i, double lo, double hi) { return lo + (hi - lo) * i / (n_points - 1.0); };

  double worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double x = grid(i, -tm, 2.0 * tm);
    worst = std::max(worst, rel(q_uni_delay(sg, tm, x), uni_delay_integral(sg, tm, x)));
  }
  push_below(r, "delay-quadrature-closed-form", worst, 1e-8);

  worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double y = grid(i, -fd, fd);
    worst = std::max(worst, rel(q_uni_doppler(sg, fd, y), uni_doppler_integral(sg, fd, y)));
  }
  push_below(r, "doppler-quadrature-closed-form", worst, 1e-8);

  {
    RandomSource rng(41);
    double w = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t1 = rng.uniform(0.0, tm), t2 = rng.uniform(0.0, tm);
      const double y1 = rng.uniform(-0.9 * fd, 0.9 * fd), y2 = rng.uniform(-0.9 * fd, 0.9 * fd);
      const double lhs = signal_energy(p, t1, y1) * signal_energy(p, t2, y2);
      const double rhs = signal_energy(p, t1, y2) * signal_energy(p, t2, y1);
      w = std::max(w, rel(lhs, rhs));
    }
    push_below(r, "numerator-factor-separability", w, 1e-10);
  }

  auto mass = [&](double hi) {  // integral of (2 pi tau / sigma) e^{-pi tau^2/sigma}
    if (hi <= 0.0) return 0.0;
    return gk([&](double t) { return 2.0 * kPi * t / sg * std::exp(-kPi * t * t / sg); }, 0.0, hi);
  };
  auto alpha_closed = [&](double dt) { return 1.0 - std::exp(-kPi * (tm - dt) * (tm - dt) / sg); };
  auto beta_closed = [&](double dt) { return 1.0 - std::exp(-kPi * dt * dt / sg); };

  worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double dt = grid(i, 0.0, tm);
    worst = std::max(worst, rel(mass(tm - dt), alpha_closed(dt)));
    worst = std::max(worst, rel(mass(dt), beta_closed(dt)));
  }
  push_below(r, "delay-balance-closed-form", worst, 1e-8);

  push_below(r, "delay-balance-at-center", rel(mass(0.5 * tm), mass(tm - 0.5 * tm)), 1e-8);

  {
    const double a = mass(tm - 0.25 * tm), b = mass(0.25 * tm);
    push(r, "delay-balance-order-below-center", a - b, 0.0, a > b);
  }

  auto kappa = [&](double df) {
    return gk([&](double v) { return 2.0 * sg * kPi * v * std::exp(-sg * kPi * v * v); }, 0.0,
              fd - df);
  };
  auto chi = [&](double df) {
    return gk([&](double v) { return 2.0 * sg * kPi * v * std::exp(-sg * kPi * v * v); }, 0.0,
              fd + df);
  };
  push_below(r, "doppler-balance-at-center", rel(kappa(0.0), chi(0.0)), 1e-8);
  {
    const double k3 = kappa(0.3 * fd), c3 = chi(0.3 * fd);
    push(r, "doppler-balance-off-center", std::abs(k3 - c3) / c3, 1e-3,
         std::abs(k3 - c3) / c3 > 1e-3);
  }

  {
    // the delay factor rises up to tau_max/2 and falls past it
    const double h = 1e-5 * tm;
    int flips = 0;
    double flip_at = -1.0;
    double prev = uni_delay_integral(sg, tm, grid(0, 0.0, tm) + h) -
                  uni_delay_integral(sg, tm, grid(0, 0.0, tm) - h);
    for (int i = 1; i < n_points; ++i) {
      const double x = grid(i, 0.0, tm);
      const double d = uni_delay_integral(sg, tm, x + h) - uni_delay_integral(sg, tm, x - h);
      // the difference lands on exactly 0.0 when a grid point sits on the
      // optimum, so a flip is positive-to-nonpositive
      if (prev > 0.0 && d <= 0.0) {
        ++flips;
        flip_at = x;
      }
      prev = d;
    }
    const double cell = tm / (n_points - 1.0);
    push(r, "delay-optimum-sign-change", flips == 1 ? std::abs(flip_at - 0.5 * tm) : -1.0, cell,
         flips == 1 && std::abs(flip_at - 0.5 * tm) <= cell);
  }

  worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double x = grid(i, 0.0, tm);
    worst = std::max(worst, rel(uni_delay_integral(sg, tm, x), uni_delay_integral(sg, tm, tm - x)));
  }
  push_below(r, "delay-reflection-symmetry", worst, 1e-12);

  return r;
}

CheckReport verify_exp_offset_derivation(const SinrParams& p, int n_points) {
  require_kind(p, ScatteringKind::Exponential, "verify_exp_offset_derivation");
  check_params(p);
  const double sg = p.sigma, tr = p.scattering.tau_rms, fd = p.scattering.f_d;
  CheckReport r;
  r.title = "exponential-profile offset derivation";

  const double c = sg / (2.0 * kPi * tr);
  auto grid = [&](int i, double lo, double hi) { return lo + (hi - lo) * i / (n_points - 1.0); };

  auto b_quad = [&](double x) {
    const double cut = std::max(0.0, x - c) + 8.0 * std::sqrt(sg);
    return gk([&](double t) { return std::exp(-kPi / sg * (t - x + c) * (t - x + c)); }, 0.0, cut);
  };

  double worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double x = grid(i, 0.0, 5.0 * tr);
    worst = std::max(worst, rel(b_quad(x), exp_delay_b(sg, tr, x)));
  }
  push_below(r, "delay-b-quadrature", worst, 1e-8);

  worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double x = grid(i, 0.0, 5.0 * tr);
    worst = std::max(worst, rel(q_exp_delay(sg, tr, x), exp_delay_ab(sg, tr, x)));
  }
  push_below(r, "delay-ab-quadrature", worst, 1e-8);

  worst = 0.0;
  for (int i = 0; i < 4 * n_points; ++i) {
    const double u = 0.1 + (3.0 - 0.1) * i / (4.0 * n_points - 1.0);
    worst = std::max(worst, rel(erfc_ratio_approx(std::sqrt(2.0) * u), std::erfc(u)));
  }
  push_below(r, "erfc-approximation", worst, 0.02);

  push_below(r, "erfc-approximation-spot", rel(erfc_ratio_approx(1.0), std::erfc(1.0 / std::sqrt(2.0))),
             0.02);

  const double x_num = argmax_exp_delay(sg, tr);
  {
    auto residual = [&](double x) {
      return std::exp(-kPi / sg * (c - x) * (c - x)) - exp_delay_b(sg, tr, x) / tr;
    };
    const double eps = 5e-4 * tr;
    const double lo = residual(x_num - eps), hi = residual(x_num + eps);
    push(r, "stationarity-sign-change", std::max(std::abs(lo), std::abs(hi)), 0.0,
         lo > 0.0 && hi < 0.0);
  }

  worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double x = grid(i, 1e-3 * tr, 5.0 * tr);
    const double h = 1e-5 * tr;
    const double num = (exp_delay_ab(sg, tr, x + h) - exp_delay_ab(sg, tr, x - h)) / (2.0 * h);
    const double a = std::exp(sg / (4.0 * kPi * tr * tr) - x / tr);
    const double closed = a * (std::exp(-kPi / sg * (c - x) * (c - x)) - exp_delay_b(sg, tr, x) / tr);
    worst = std::max(worst, std::abs(num - closed) /
                                std::max(std::abs(closed), exp_delay_ab(sg, tr, x) / tr));
  }
  push_below(r, "delay-derivative-closed-form", worst, 1e-6);

  double max_slope = 0.0;
  for (int i = 0; i < n_points; ++i)
    max_slope = std::max(max_slope, std::abs(exp_doppler_slope(sg, fd, grid(i, -0.95 * fd, 0.95 * fd))));

  push_below(r, "doppler-slope-origin", std::abs(exp_doppler_slope(sg, fd, 0.0)),
             1e-10 * std::max(max_slope, 1e-300));

  worst = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double y = grid(i, 0.0, 0.95 * fd);
    worst = std::max(worst, std::abs(exp_doppler_slope(sg, fd, y) + exp_doppler_slope(sg, fd, -y)));
  }
  push_below(r, "doppler-slope-odd", worst, 1e-10 * std::max(max_slope, 1e-300));

  {
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_points; ++i)
      mx = std::max(mx, exp_doppler_slope_derivative(sg, fd, grid(i, -0.95 * fd, 0.95 * fd)));
    push(r, "doppler-slope-decreasing", mx, 0.0, mx < 0.0);
  }

  {
    int best = 0;
    double bv = -1.0;
    constexpr int G = 81;
    for (int j = 0; j < G; ++j) {
      const double y = -fd + (j + 0.5) * (2.0 * fd / G);
      const double v = exp_doppler_weight(sg, fd, y);
      if (v > bv) {
        bv = v;
        best = j;
      }
    }
    const double y_best = -fd + (best + 0.5) * (2.0 * fd / G);
    push(r, "doppler-weight-centered", std::abs(y_best), 2.0 * fd / G,
         std::abs(y_best) <= 2.0 * fd / G);
  }

  {
    RandomSource rng(42);
    double w = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t1 = rng.uniform(0.0, 5.0 * tr), t2 = rng.uniform(0.0, 5.0 * tr);
      const double y1 = rng.uniform(-0.9 * fd, 0.9 * fd), y2 = rng.uniform(-0.9 * fd, 0.9 * fd);
      const double lhs = signal_energy(p, t1, y1) * signal_energy(p, t2, y2);
      const double rhs = signal_energy(p, t1, y2) * signal_energy(p, t2, y1);
      w = std::max(w, rel(lhs, rhs));
    }
    push_below(r, "numerator-factor-separability", w, 1e-10);
  }

  {
    const auto det = exp_offset_details(sg, p.scattering);
    const double loss =
        std::abs(sinr_exp(p, det.delta_t_closed, 0.0) - sinr_exp(p, det.delta_t_numeric, 0.0));
    push_below(r, "closed-offset-sinr-loss-db", loss, 0.05);
    push(r, "printed-discriminant-positive", det.discriminant, 0.0, det.discriminant > 0.0);
  }

  return r;
}

std::string to_json_string(const CheckReport& report) {
  nlohmann::json j;
  j["title"] = report.title;
  j["all_passed"] = report.all_passed();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks)
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"bound", c.bound}});
  return j.dump(2);
}

}  // namespace hmt
