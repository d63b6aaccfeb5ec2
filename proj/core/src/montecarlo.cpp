#include "hmt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "hmt/rng.hpp"
#include "hmt/sinr.hpp"
#include "hmt/stats.hpp"

namespace hmt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(xs[i]);
  }
  return out;
}

std::string receiver_mode_name(ReceiverMode m) {
  switch (m) {
    case ReceiverMode::TPR: return "tpr";
    case ReceiverMode::MaxSINR: return "maxsinr";
    case ReceiverMode::Manual: return "manual";
  }
  return "?";
}

void validate_config(const SimConfig& cfg) {
  if (cfg.lattice.T <= 0.0 || cfg.lattice.F <= 0.0 || cfg.lattice.M < 1 || cfg.lattice.N < 1)
    throw std::invalid_argument("sim: bad lattice");
  if (cfg.sigma <= 0.0 || cfg.ts <= 0.0) throw std::invalid_argument("sim: bad sigma/ts");
  if (cfg.scattering.delay_scale() <= 0.0 || cfg.scattering.f_d <= 0.0)
    throw std::invalid_argument("sim: bad scattering spread");
  if (cfg.n_realizations < 2) throw std::invalid_argument("sim: too few realizations for a CI");
  if (cfg.n_bursts_per_realization < 1 || cfg.n_paths < 1)
    throw std::invalid_argument("sim: bad burst/path count");
  if (cfg.sigma_c2 <= 0.0 || cfg.symbol_power <= 0.0)
    throw std::invalid_argument("sim: bad power");
  if (cfg.interior_margin < 0 || 2 * cfg.interior_margin >= cfg.lattice.M ||
      2 * cfg.interior_margin >= cfg.lattice.N)
    throw std::invalid_argument("sim: interior margin leaves no symbols");
}

struct Pos {
  int coset, m, n;
  long base;  // sample index of the symbol's time center
  double t_c, f_c;
};

// Shared per-run machinery: pulse table, carrier tables, interior positions.
struct Engine {
  const SimConfig& cfg;
  long H;
  long n_samples;
  double t0;
  std::vector<double> gtab;      // g(j*ts), j in [-H, H]
  std::vector<cplx> zf, zh;      // e^{j2pi F t_k}, e^{j pi F t_k}
  std::vector<Pos> positions;

  explicit Engine(const SimConfig& c) : cfg(c) {
    const double ts = cfg.ts;
    H = static_cast<long>(std::ceil(6.0 * std::sqrt(cfg.sigma) / ts));
    const double t_last = lattice_time_center(cfg.lattice, 2, cfg.lattice.M - 1);
    n_samples = std::lround(t_last / ts) + 2 * H + 1;
    t0 = -static_cast<double>(H) * ts;

    const double amp0 = std::pow(2.0 / cfg.sigma, 0.25);
    gtab.resize(static_cast<std::size_t>(2 * H + 1));
    for (long j = -H; j <= H; ++j)
      gtab[static_cast<std::size_t>(j + H)] =
          amp0 * std::exp(-std::numbers::pi * (j * ts) * (j * ts) / cfg.sigma);

    zf.resize(static_cast<std::size_t>(n_samples));
    zh.resize(static_cast<std::size_t>(n_samples));
    for (long k = 0; k < n_samples; ++k) {
      const double t = t0 + k * ts;
      zf[static_cast<std::size_t>(k)] = std::polar(1.0, kTwoPi * cfg.lattice.F * t);
      zh[static_cast<std::size_t>(k)] = std::polar(1.0, 0.5 * kTwoPi * cfg.lattice.F * t);
    }

    const int g = cfg.interior_margin;
    for (int coset = 1; coset <= 2; ++coset)
      for (int m = g; m < cfg.lattice.M - g; ++m)
        for (int n = g; n < cfg.lattice.N - g; ++n) {
          Pos p;
          p.coset = coset;
          p.m = m;
          p.n = n;
          p.t_c = lattice_time_center(cfg.lattice, coset, m);
          p.f_c = lattice_freq_center(cfg.lattice, coset, n);
          p.base = std::lround((p.t_c - t0) / ts);
          positions.push_back(p);
        }
  }

  double g_at(long j) const {
    return (j < -H || j > H) ? 0.0 : gtab[static_cast<std::size_t>(j + H)];
  }

  // Row-wise Horner over the frequency index keeps the carrier phases out
  // of the inner per-symbol loop.
  SampledSignal modulate_grid(const SymbolGrid& grid) const {
    if (grid.M != cfg.lattice.M || grid.N != cfg.lattice.N)
      throw std::invalid_argument("modulate_grid: dimension mismatch");
    SampledSignal x;
    x.ts = cfg.ts;
    x.t0 = t0;
    x.samples.assign(static_cast<std::size_t>(n_samples), cplx{0.0, 0.0});
    const int N = cfg.lattice.N;
    for (int coset = 1; coset <= 2; ++coset) {
      for (int m = 0; m < cfg.lattice.M; ++m) {
        const double t_c = lattice_time_center(cfg.lattice, coset, m);
        const long kc = std::lround((t_c - t0) / cfg.ts);
        const cplx* row = (coset == 1 ? grid.coset1.data() : grid.coset2.data()) +
                          static_cast<std::size_t>(m) * N;
        for (long k = kc - H; k <= kc + H; ++k) {
          const double amp = gtab[static_cast<std::size_t>(k - kc + H)];
          const cplx z = zf[static_cast<std::size_t>(k)];
          cplx s = row[N - 1];
          for (int n = N - 2; n >= 0; --n) s = s * z + row[n];
          if (coset == 2) s *= zh[static_cast<std::size_t>(k)];
          x.samples[static_cast<std::size_t>(k)] += amp * s;
        }
      }
    }
    return x;
  }
};

// Receive-side state for one set of offsets.
struct RxWork {
  double delta_t = 0.0, delta_f = 0.0;
  long kdt = 0;
  std::vector<cplx> wvec;               // g(u - dt) e^{-j2pi df u} over the window
  std::vector<cplx> gammas;             // per-path pulse coupling, one realization
  std::vector<cplx> path_phase;         // h_p e^{j2pi nu_p t_c} handled per position
};

RxWork make_rxwork(const Engine& eng, const ReceiverSpec& rx) {
  const auto [dt, df] = effective_offsets(rx);
  RxWork w;
  w.delta_t = dt;
  w.delta_f = df;
  w.kdt = std::lround(dt / eng.cfg.ts);
  w.wvec.resize(static_cast<std::size_t>(2 * eng.H + 1));
  const double amp0 = std::pow(2.0 / eng.cfg.sigma, 0.25);
  for (long i = 0; i <= 2 * eng.H; ++i) {
    const double u = (w.kdt - eng.H + i) * eng.cfg.ts;
    w.wvec[static_cast<std::size_t>(i)] =
        amp0 * std::exp(-std::numbers::pi * (u - dt) * (u - dt) / eng.cfg.sigma) *
        std::polar(1.0, -kTwoPi * df * u);
  }
  return w;
}

// Pulse-coupling factor per path: ts * sum_u g(u - tau_p) g(u - dt)
// e^{j2pi(nu_p - df)u} over the demodulation window, with the transmit
// pulse truncated exactly as the modulator truncates it.
void fill_gammas(const Engine& eng, const ChannelRealization& real, RxWork& w) {
  const double ts = eng.cfg.ts;
  w.gammas.assign(real.paths.size(), cplx{0.0, 0.0});
  for (std::size_t p = 0; p < real.paths.size(); ++p) {
    const long d = std::lround(real.paths[p].tau / ts);
    const double u0 = (w.kdt - eng.H) * ts;
    cplx ramp = std::polar(1.0, kTwoPi * real.paths[p].nu * u0);
    const cplx step = std::polar(1.0, kTwoPi * real.paths[p].nu * ts);
    cplx acc{0.0, 0.0};
    for (long i = 0; i <= 2 * eng.H; ++i) {
      const long j = w.kdt - eng.H + i - d;
      if (j >= -eng.H && j <= eng.H)
        acc += eng.gtab[static_cast<std::size_t>(j + eng.H)] *
               w.wvec[static_cast<std::size_t>(i)] * ramp;
      ramp *= step;
    }
    w.gammas[p] = acc * ts;
  }
}

cplx engine_eff(const Engine& eng, const ChannelRealization& real, const RxWork& w,
                const Pos& pos) {
  const double ts = eng.cfg.ts;
  cplx acc{0.0, 0.0};
  for (std::size_t p = 0; p < real.paths.size(); ++p) {
    const double tau_q = std::lround(real.paths[p].tau / ts) * ts;
    acc += real.paths[p].h *
           std::polar(1.0, kTwoPi * (real.paths[p].nu * pos.t_c - pos.f_c * tau_q)) *
           w.gammas[p];
  }
  return acc;
}

cplx engine_proj(const Engine& eng, const SampledSignal& r, const RxWork& w, const Pos& pos) {
  const long k0 = pos.base + w.kdt - eng.H;
  const long k1 = pos.base + w.kdt + eng.H;
  if (k0 < 0 || k1 >= static_cast<long>(r.size()))
    throw std::out_of_range("engine_proj: window outside signal");
  const double t_start = r.t0 + k0 * r.ts;
  cplx ramp = std::polar(1.0, -kTwoPi * pos.f_c * t_start);
  const cplx step = std::polar(1.0, -kTwoPi * pos.f_c * r.ts);
  cplx acc{0.0, 0.0};
  const cplx* s = r.samples.data() + k0;
  for (long i = 0; i <= 2 * eng.H; ++i) {
    acc += s[i] * w.wvec[static_cast<std::size_t>(i)] * ramp;
    ramp *= step;
  }
  return acc * r.ts;
}

std::vector<cplx> draw_noise(std::size_t n, std::uint64_t seed) {
  RandomSource rng(seed);
  std::vector<cplx> w(n);
  for (auto& v : w) v = rng.cgauss();
  return w;
}

struct Slot {
  std::string name;
  ReceiverSpec spec;  // static offsets; ignored when offsets_for is set
  std::function<ReceiverSpec(long)> offsets_for;
  double rep_dt = 0.0, rep_df = 0.0;
};

struct SlotMoments {
  std::vector<double> S, A, B, C;  // per-realization sums over probe positions
};

// One pass over shared realizations; every slot sees identical channel,
// symbol, and noise draws.
std::vector<SlotMoments> run_sinr_engine(const SimConfig& cfg, const std::vector<Slot>& slots) {
  const Engine eng(cfg);
  if (eng.positions.empty()) throw std::invalid_argument("sim: no interior positions");

  std::vector<RxWork> statics(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s)
    if (!slots[s].offsets_for) statics[s] = make_rxwork(eng, slots[s].spec);

  std::vector<SlotMoments> mom(slots.size());
  for (auto& m : mom) {
    m.S.assign(cfg.n_realizations, 0.0);
    m.A.assign(cfg.n_realizations, 0.0);
    m.B.assign(cfg.n_realizations, 0.0);
    m.C.assign(cfg.n_realizations, 0.0);
  }

  for (long r = 0; r < cfg.n_realizations; ++r) {
    const auto real = sample_realization(
        cfg.scattering, cfg.n_paths,
        derive_seed(cfg.seed, {tag_hash("real"), static_cast<std::uint64_t>(r)}));

    std::vector<RxWork*> works(slots.size());
    std::vector<RxWork> dyn(slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (slots[s].offsets_for) {
        dyn[s] = make_rxwork(eng, slots[s].offsets_for(r));
        works[s] = &dyn[s];
      } else {
        works[s] = &statics[s];
      }
      fill_gammas(eng, real, *works[s]);
    }

    for (int b = 0; b < cfg.n_bursts_per_realization; ++b) {
      const auto grid = random_grid(
          cfg.lattice, cfg.constellation, cfg.symbol_power,
          derive_seed(cfg.seed, {tag_hash("grid"), static_cast<std::uint64_t>(r),
                                 static_cast<std::uint64_t>(b)}));
      const auto x = eng.modulate_grid(grid);
      const auto y0 = apply_channel(real, x);
      SampledSignal w;
      w.ts = y0.ts;
      w.t0 = y0.t0;
      w.samples = draw_noise(y0.size(),
                             derive_seed(cfg.seed, {tag_hash("noise"), static_cast<std::uint64_t>(r),
                                                    static_cast<std::uint64_t>(b)}));

      for (std::size_t s = 0; s < slots.size(); ++s) {
        auto& m = mom[s];
        for (const auto& pos : eng.positions) {
          const cplx e = engine_eff(eng, real, *works[s], pos);
          const cplx y0p = engine_proj(eng, y0, *works[s], pos);
          const cplx np = engine_proj(eng, w, *works[s], pos);
          const cplx zi = y0p - e * grid.at(pos.coset, pos.m, pos.n);
          m.S[r] += std::norm(e);
          m.A[r] += std::norm(zi);
          m.B[r] += zi.real() * np.real() + zi.imag() * np.imag();
          m.C[r] += std::norm(np);
        }
      }
    }
  }
  return mom;
}

std::vector<CurvePoint> points_from_moments(const SimConfig& cfg, const std::vector<Slot>& slots,
                                            const std::vector<SlotMoments>& mom,
                                            const std::string& hash) {
  const Engine eng(cfg);  // positions count only
  const double K = static_cast<double>(eng.positions.size()) * cfg.n_bursts_per_realization;
  const long n = cfg.n_realizations;

  std::vector<CurvePoint> out;
  for (double snr_db : cfg.snr_db_list) {
    const double sigw2 = cfg.sigma_c2 * std::pow(10.0, -snr_db / 10.0);
    const double sc = std::sqrt(sigw2 / cfg.ts);  // noise draws are unit variance per sample
    for (std::size_t s = 0; s < slots.size(); ++s) {
      std::vector<double> a(n), b(n);
      for (long r = 0; r < n; ++r) {
        a[r] = cfg.sigma_c2 * mom[s].S[r] / K;
        b[r] = (mom[s].A[r] + 2.0 * sc * mom[s].B[r] + sc * sc * mom[s].C[r]) / K;
      }
      const auto ma = mean_var(a), mb = mean_var(b);
      double cab = 0.0;
      for (long r = 0; r < n; ++r) cab += (a[r] - ma.mean) * (b[r] - mb.mean);
      cab /= (n - 1);
      const double ratio = ma.mean / mb.mean;
      double rel2 = (ma.var / (ma.mean * ma.mean) + mb.var / (mb.mean * mb.mean) -
                     2.0 * cab / (ma.mean * mb.mean)) /
                    n;
      rel2 = std::max(rel2, 0.0);

      CurvePoint p;
      p.x = snr_db;
      p.metric = Metric::SinrDb;
      p.value = 10.0 * std::log10(ratio);
      p.ci_halfwidth = 1.959964 * (10.0 / std::numbers::ln10) * std::sqrt(rel2);
      p.receiver = slots[s].name;
      p.channel_kind = channel_kind_name(cfg.scattering);
      p.spread = cfg.scattering.spread();
      p.seed = cfg.seed;
      p.config_hash = hash;
      p.delta_t = slots[s].rep_dt;
      p.delta_f = slots[s].rep_df;
      out.push_back(std::move(p));
    }
  }
  return out;
}

Slot static_slot(const SimConfig& cfg, const std::string& name, const ReceiverSpec& rx) {
  Slot s;
  s.name = name;
  s.spec = resolve_offsets(rx, cfg.sigma, cfg.scattering);
  const auto [dt, df] = effective_offsets(s.spec);
  s.rep_dt = dt;
  s.rep_df = df;
  return s;
}

}  // namespace

std::string channel_kind_name(const ScatteringSpec& spec) {
  return spec.kind == ScatteringKind::Uniform ? "uni" : "exp";
}

std::vector<CurvePoint> measure_sinr(const SimConfig& cfg,
                                     const std::vector<NamedReceiver>& receivers) {
  validate_config(cfg);
  if (cfg.snr_db_list.empty()) throw std::invalid_argument("measure_sinr: empty SNR list");
  if (receivers.empty()) throw std::invalid_argument("measure_sinr: no receivers");
  std::vector<Slot> slots;
  for (const auto& r : receivers) slots.push_back(static_slot(cfg, r.name, r.spec));
  const auto mom = run_sinr_engine(cfg, slots);
  return points_from_moments(cfg, slots, mom, config_hash(to_config_map(cfg)));
}

std::vector<CurvePoint> measure_sinr(const SimConfig& cfg) {
  return measure_sinr(cfg, {{receiver_mode_name(cfg.receiver.mode), cfg.receiver}});
}

std::vector<CurvePoint> robustness_sweep(const SimConfig& cfg) {
  validate_config(cfg);
  if (cfg.snr_db_list.empty()) throw std::invalid_argument("robustness_sweep: empty SNR list");

  SinrParams sp;
  sp.scattering = cfg.scattering;
  sp.lattice = cfg.lattice;
  sp.sigma = cfg.sigma;
  sp.sigma_c2 = cfg.sigma_c2;
  sp.sigma_w2 = 0.0;  // offsets fixed across the sweep at the noise-free optimum
  const auto ub = upper_bound_search(sp, SearchObjective::FullSinr);

  ReceiverSpec ub_rx;
  ub_rx.mode = ReceiverMode::Manual;
  ub_rx.delta_t = ub.delta_t;
  ub_rx.delta_f = ub.delta_f;

  std::vector<Slot> slots;
  slots.push_back(static_slot(cfg, "ub", ub_rx));

  if (cfg.estimation_error == EstimationError::None) {
    slots.push_back(static_slot(cfg, "maxsinr", ReceiverSpec{ReceiverMode::MaxSINR, 0.0, 0.0}));
  } else {
    Slot s;
    s.name = "maxsinr-esterr";
    const auto nominal =
        resolve_offsets(ReceiverSpec{ReceiverMode::MaxSINR, 0.0, 0.0}, cfg.sigma, cfg.scattering);
    s.rep_dt = nominal.delta_t;
    s.rep_df = nominal.delta_f;
    const SimConfig& c = cfg;
    s.offsets_for = [&c](long r) {
      RandomSource er(derive_seed(c.seed, {tag_hash("esterr"), static_cast<std::uint64_t>(r)}));
      const double u = er.uniform(-0.5, 0.5);
      ScatteringSpec est = c.scattering;
      if (est.kind == ScatteringKind::Uniform)
        est.tau_max *= 1.0 + u;
      else
        est.tau_rms *= 1.0 + u;
      return resolve_offsets(ReceiverSpec{ReceiverMode::MaxSINR, 0.0, 0.0}, c.sigma, est);
    };
    slots.push_back(std::move(s));
  }

  slots.push_back(static_slot(cfg, "tpr", ReceiverSpec{ReceiverMode::TPR, 0.0, 0.0}));

  const auto mom = run_sinr_engine(cfg, slots);
  return points_from_moments(cfg, slots, mom, config_hash(to_config_map(cfg)));
}

std::vector<CurvePoint> measure_ber(const SimConfig& cfg,
                                    const std::vector<NamedReceiver>& receivers) {
  validate_config(cfg);
  if (cfg.ebn0_db_list.empty()) throw std::invalid_argument("measure_ber: empty Eb/N0 list");
  if (receivers.empty()) throw std::invalid_argument("measure_ber: no receivers");

  const Engine eng(cfg);
  if (eng.positions.empty()) throw std::invalid_argument("sim: no interior positions");
  const std::string hash = config_hash(to_config_map(cfg));
  const int bits = bits_per_symbol(cfg.constellation);
  // Eb/N0 -> SNR: Eb = sigma_c^2 / (density * bits_per_symbol)
  const double snr_shift_db = 10.0 * std::log10(density(cfg.lattice) * bits);

  std::vector<RxWork> works;
  std::vector<Slot> slots;
  for (const auto& r : receivers) {
    slots.push_back(static_slot(cfg, r.name, r.spec));
    works.push_back(make_rxwork(eng, slots.back().spec));
  }

  std::vector<CurvePoint> out;
  for (std::size_t pi = 0; pi < cfg.ebn0_db_list.size(); ++pi) {
    const double ebn0_db = cfg.ebn0_db_list[pi];
    const double snr_db = ebn0_db + snr_shift_db;
    const double sigw2_sample = cfg.sigma_c2 * std::pow(10.0, -snr_db / 10.0) / cfg.ts;
    const double nscale = std::sqrt(sigw2_sample);

    std::vector<long> nerr(slots.size(), 0), nbits(slots.size(), 0);
    for (long b = 0; b < cfg.max_bursts_per_point; ++b) {
      bool need = false;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (nerr[s] < cfg.min_bit_errors) need = true;
      if (!need && b > 0) break;

      const auto real = sample_realization(
          cfg.scattering, cfg.n_paths,
          derive_seed(cfg.seed, {tag_hash("ber-real"), pi, static_cast<std::uint64_t>(b)}));
      const auto grid = random_grid(
          cfg.lattice, cfg.constellation, cfg.symbol_power,
          derive_seed(cfg.seed, {tag_hash("ber-grid"), pi, static_cast<std::uint64_t>(b)}));
      auto y = apply_channel(real, eng.modulate_grid(grid));
      const auto w = draw_noise(
          y.size(),
          derive_seed(cfg.seed, {tag_hash("ber-noise"), pi, static_cast<std::uint64_t>(b)}));
      for (std::size_t k = 0; k < y.size(); ++k) y.samples[k] += nscale * w[k];

      for (std::size_t s = 0; s < slots.size(); ++s) {
        fill_gammas(eng, real, works[s]);
        for (const auto& pos : eng.positions) {
          const cplx c = grid.at(pos.coset, pos.m, pos.n);
          const cplx e = engine_eff(eng, real, works[s], pos);
          int errs = 0;
          if (std::abs(e) <= 1e-6) {
            errs = 2;  // erased symbol
          } else {
            const cplx est = engine_proj(eng, y, works[s], pos) / e;
            if ((est.real() > 0.0) != (c.real() > 0.0)) ++errs;
            if ((est.imag() > 0.0) != (c.imag() > 0.0)) ++errs;
          }
          nerr[s] += errs;
          nbits[s] += bits;
        }
      }
    }

    for (std::size_t s = 0; s < slots.size(); ++s) {
      const auto ci = wilson_interval(nerr[s], nbits[s]);
      CurvePoint p;
      p.x = ebn0_db;
      p.metric = Metric::Ber;
      p.value = static_cast<double>(nerr[s]) / static_cast<double>(nbits[s]);
      p.ci_halfwidth = 0.5 * (ci.hi - ci.lo);
      p.receiver = slots[s].name;
      p.channel_kind = channel_kind_name(cfg.scattering);
      p.spread = cfg.scattering.spread();
      p.seed = cfg.seed;
      p.config_hash = hash;
      p.delta_t = slots[s].rep_dt;
      p.delta_f = slots[s].rep_df;
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<CurvePoint> measure_ber(const SimConfig& cfg) {
  return measure_ber(cfg, {{receiver_mode_name(cfg.receiver.mode), cfg.receiver}});
}

Chi2Result scattering_chi2(const ScatteringSpec& spec, long n_paths_pooled, int bins,
                           std::uint64_t seed) {
  if (bins < 2) throw std::invalid_argument("scattering_chi2: need at least 2 bins per axis");
  if (n_paths_pooled < 50L * bins * bins)
    throw std::invalid_argument("scattering_chi2: too few paths for the bin count");

  // equal-probability cell edges under the sampler's own (truncated) law
  std::vector<double> tau_edges(bins + 1), nu_edges(bins + 1);
  if (spec.kind == ScatteringKind::Uniform) {
    for (int i = 0; i <= bins; ++i) {
      tau_edges[i] = spec.tau_max * i / bins;
      nu_edges[i] = -spec.f_d + 2.0 * spec.f_d * i / bins;
    }
  } else {
    const double trunc_mass = 1.0 - std::exp(-10.0);
    for (int i = 0; i <= bins; ++i) {
      tau_edges[i] = i == bins ? 10.0 * spec.tau_rms
                               : -spec.tau_rms * std::log1p(-(static_cast<double>(i) / bins) *
                                                            trunc_mass);
      nu_edges[i] = spec.f_d * std::sin(-0.5 * std::numbers::pi +
                                        std::numbers::pi * i / bins);
    }
  }

  std::vector<long> counts(static_cast<std::size_t>(bins) * bins, 0);
  long pooled = 0;
  const int per_draw = 64;
  for (std::uint64_t i = 0; pooled < n_paths_pooled; ++i) {
    const auto real =
        sample_realization(spec, per_draw, derive_seed(seed, {tag_hash("chi2"), i}));
    for (const auto& p : real.paths) {
      if (pooled >= n_paths_pooled) break;
      const auto ti = std::upper_bound(tau_edges.begin(), tau_edges.end(), p.tau) -
                      tau_edges.begin() - 1;
      const auto ni = std::upper_bound(nu_edges.begin(), nu_edges.end(), p.nu) -
                      nu_edges.begin() - 1;
      const long tb = std::clamp<long>(ti, 0, bins - 1);
      const long nb = std::clamp<long>(ni, 0, bins - 1);
      ++counts[static_cast<std::size_t>(tb) * bins + nb];
      ++pooled;
    }
  }

  const double expected = static_cast<double>(pooled) / (bins * bins);
  double chi2 = 0.0;
  for (long c : counts) {
    const double d = c - expected;
    chi2 += d * d / expected;
  }

  Chi2Result out;
  out.chi2 = chi2;
  out.dof = bins * bins - 1;
  out.p_value = chi2_sf(chi2, out.dof);
  out.n = pooled;
  return out;
}

ConfigMap to_config_map(const SimConfig& cfg) {
  ConfigMap m;
  m["lattice.T"] = fmt_double(cfg.lattice.T);
  m["lattice.F"] = fmt_double(cfg.lattice.F);
  m["lattice.M"] = std::to_string(cfg.lattice.M);
  m["lattice.N"] = std::to_string(cfg.lattice.N);
  m["sigma"] = fmt_double(cfg.sigma);
  m["ts"] = fmt_double(cfg.ts);
  m["pulse_len_samples"] = std::to_string(cfg.pulse_len_samples);
  m["scattering.kind"] = channel_kind_name(cfg.scattering);
  m["scattering.tau_max"] = fmt_double(cfg.scattering.tau_max);
  m["scattering.tau_rms"] = fmt_double(cfg.scattering.tau_rms);
  m["scattering.f_d"] = fmt_double(cfg.scattering.f_d);
  m["receiver.mode"] = receiver_mode_name(cfg.receiver.mode);
  m["receiver.delta_t"] = fmt_double(cfg.receiver.delta_t);
  m["receiver.delta_f"] = fmt_double(cfg.receiver.delta_f);
  m["snr_db_list"] = fmt_list(cfg.snr_db_list);
  m["ebn0_db_list"] = fmt_list(cfg.ebn0_db_list);
  m["n_realizations"] = std::to_string(cfg.n_realizations);
  m["n_bursts_per_realization"] = std::to_string(cfg.n_bursts_per_realization);
  m["n_paths"] = std::to_string(cfg.n_paths);
  m["constellation"] = "qpsk";
  m["symbol_power"] = fmt_double(cfg.symbol_power);
  m["sigma_c2"] = fmt_double(cfg.sigma_c2);
  m["seed"] = std::to_string(cfg.seed);
  m["estimation_error"] =
      cfg.estimation_error == EstimationError::None ? "none" : "uniform-half-span";
  m["interior_margin"] = std::to_string(cfg.interior_margin);
  m["min_bit_errors"] = std::to_string(cfg.min_bit_errors);
  m["max_bursts_per_point"] = std::to_string(cfg.max_bursts_per_point);
  return m;
}

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV: " + path);
  out << "x,metric,value,ci,receiver,channel-kind,spread,seed,config-hash,delta_t,delta_f\n";
  char buf[512];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.12g,%s,%.12g,%.12g,%s,%s,%.12g,%llu,%s,%.12g,%.12g\n",
                  p.x, p.metric == Metric::SinrDb ? "sinr_db" : "ber", p.value, p.ci_halfwidth,
                  p.receiver.c_str(), p.channel_kind.c_str(), p.spread,
                  static_cast<unsigned long long>(p.seed), p.config_hash.c_str(), p.delta_t,
                  p.delta_f);
    out << buf;
  }
}

}  // namespace hmt
