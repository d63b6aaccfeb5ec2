// Command-line frontend: SINR/BER/robustness experiments and the numeric
// validation suite, with reproducible CSV + manifest outputs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "hmt/channel.hpp"
#include "hmt/manifest.hpp"
#include "hmt/modem.hpp"
#include "hmt/montecarlo.hpp"
#include "hmt/pulse.hpp"
#include "hmt/rng.hpp"
#include "hmt/sinr.hpp"
#include "hmt/version.hpp"

namespace {

using hmt::ConfigMap;
using hmt::SimConfig;

std::vector<double> parse_values(const std::string& expr) {
  std::vector<double> out;
  if (expr.find(':') != std::string::npos) {
    double a = 0, s = 0, b = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(expr);
    if (!(in >> a >> c1 >> s >> c2 >> b) || c1 != ':' || c2 != ':' || s <= 0 || b < a)
      throw std::invalid_argument("bad range expression: " + expr + " (want start:step:stop)");
    for (double v = a; v <= b + 1e-9; v += s) out.push_back(v);
    return out;
  }
  std::istringstream in(expr);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad number in list: " + tok);
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

double parse_d(const std::string& k, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing text");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + k + ": bad number '" + v + "'");
  }
}

long parse_l(const std::string& k, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing text");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + k + ": bad integer '" + v + "'");
  }
}

// The manifest's config block uses exactly these keys, so a manifest is
// rerunnable by pasting its config into a key=value file.
SimConfig config_from_map(const ConfigMap& map) {
  SimConfig cfg;
  for (const auto& [k, v] : map) {
    if (k == "lattice.T") cfg.lattice.T = parse_d(k, v);
    else if (k == "lattice.F") cfg.lattice.F = parse_d(k, v);
    else if (k == "lattice.M") cfg.lattice.M = static_cast<int>(parse_l(k, v));
    else if (k == "lattice.N") cfg.lattice.N = static_cast<int>(parse_l(k, v));
    else if (k == "sigma") cfg.sigma = parse_d(k, v);
    else if (k == "ts") cfg.ts = parse_d(k, v);
    else if (k == "pulse_len_samples") cfg.pulse_len_samples = static_cast<int>(parse_l(k, v));
    else if (k == "scattering.kind") {
      if (v == "uni") cfg.scattering.kind = hmt::ScatteringKind::Uniform;
      else if (v == "exp") cfg.scattering.kind = hmt::ScatteringKind::Exponential;
      else throw std::invalid_argument("scattering.kind must be uni or exp, got " + v);
    } else if (k == "scattering.tau_max") cfg.scattering.tau_max = parse_d(k, v);
    else if (k == "scattering.tau_rms") cfg.scattering.tau_rms = parse_d(k, v);
    else if (k == "scattering.f_d") cfg.scattering.f_d = parse_d(k, v);
    else if (k == "receiver.mode") {
      if (v == "tpr") cfg.receiver.mode = hmt::ReceiverMode::TPR;
      else if (v == "maxsinr") cfg.receiver.mode = hmt::ReceiverMode::MaxSINR;
      else if (v == "manual") cfg.receiver.mode = hmt::ReceiverMode::Manual;
      else throw std::invalid_argument("receiver.mode must be tpr|maxsinr|manual, got " + v);
    } else if (k == "receiver.delta_t") cfg.receiver.delta_t = parse_d(k, v);
    else if (k == "receiver.delta_f") cfg.receiver.delta_f = parse_d(k, v);
    else if (k == "snr_db_list") cfg.snr_db_list = v.empty() ? std::vector<double>{} : parse_values(v);
    else if (k == "ebn0_db_list") cfg.ebn0_db_list = v.empty() ? std::vector<double>{} : parse_values(v);
    else if (k == "n_realizations") cfg.n_realizations = static_cast<int>(parse_l(k, v));
    else if (k == "n_bursts_per_realization") cfg.n_bursts_per_realization = static_cast<int>(parse_l(k, v));
    else if (k == "n_paths") cfg.n_paths = static_cast<int>(parse_l(k, v));
    else if (k == "constellation") {
      if (v != "qpsk") throw std::invalid_argument("constellation must be qpsk, got " + v);
    } else if (k == "symbol_power") cfg.symbol_power = parse_d(k, v);
    else if (k == "sigma_c2") cfg.sigma_c2 = parse_d(k, v);
    else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(v));
    else if (k == "estimation_error") {
      if (v == "none") cfg.estimation_error = hmt::EstimationError::None;
      else if (v == "uniform-half-span") cfg.estimation_error = hmt::EstimationError::UniformHalfSpan;
      else throw std::invalid_argument("estimation_error must be none|uniform-half-span, got " + v);
    } else if (k == "interior_margin") cfg.interior_margin = static_cast<int>(parse_l(k, v));
    else if (k == "min_bit_errors") cfg.min_bit_errors = parse_l(k, v);
    else if (k == "max_bursts_per_point") cfg.max_bursts_per_point = parse_l(k, v);
    else if (k.rfind("cli.", 0) == 0) {
      // command-level keys handled by the caller
    } else {
      throw std::invalid_argument("unknown config key: " + k);
    }
  }

  // a spread factor plus channel kind derives the scattering geometry
  const auto spread_it = map.find("cli.spread");
  const auto chan_it = map.find("cli.channel");
  if (chan_it != map.end()) {
    if (chan_it->second == "uni") cfg.scattering.kind = hmt::ScatteringKind::Uniform;
    else if (chan_it->second == "exp") cfg.scattering.kind = hmt::ScatteringKind::Exponential;
    else throw std::invalid_argument("channel must be uni or exp, got " + chan_it->second);
  }
  if (spread_it != map.end() && !spread_it->second.empty()) {
    const double theta = parse_d("cli.spread", spread_it->second);
    if (theta <= 0.0) throw std::invalid_argument("spread must be positive");
    if (cfg.sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    cfg.scattering = cfg.scattering.kind == hmt::ScatteringKind::Uniform
                         ? hmt::ScatteringSpec::uniform_spread(theta, cfg.sigma)
                         : hmt::ScatteringSpec::exponential_spread(theta, cfg.sigma);
  }
  return cfg;
}

struct CommonFlags {
  std::string config_path, channel, snr, ebn0, receivers, out, manifest, est_error;
  double spread = 0.0;
  std::string spreads;
  long realizations = 0, bursts = 0, paths = 0;
  std::uint64_t seed = 0;
  CLI::Option *o_config = nullptr, *o_channel = nullptr, *o_snr = nullptr, *o_ebn0 = nullptr,
              *o_receivers = nullptr, *o_out = nullptr, *o_manifest = nullptr,
              *o_est = nullptr, *o_spread = nullptr, *o_spreads = nullptr, *o_real = nullptr,
              *o_bursts = nullptr, *o_paths = nullptr, *o_seed = nullptr;

  void attach(CLI::App* cmd, bool with_snr, bool with_ebn0, bool with_spreads, bool with_est) {
    o_config = cmd->add_option("--config", config_path, "flat key=value config file");
    o_channel = cmd->add_option("--channel", channel, "channel kind: uni|exp");
    if (with_snr) o_snr = cmd->add_option("--snr", snr, "SNR dB list: start:step:stop or a,b,c");
    if (with_ebn0) o_ebn0 = cmd->add_option("--ebn0", ebn0, "Eb/N0 dB list: start:step:stop or a,b,c");
    o_receivers = cmd->add_option("--receiver", receivers, "comma list of tpr|maxsinr|ub");
    if (with_spreads) o_spreads = cmd->add_option("--spreads", spreads, "comma list of spread factors");
    o_spread = cmd->add_option("--spread", spread, "channel spread factor (delay scale x Doppler)");
    o_real = cmd->add_option("--realizations", realizations, "channel realizations per point");
    o_bursts = cmd->add_option("--bursts", bursts, "bursts per realization");
    o_paths = cmd->add_option("--paths", paths, "paths per realization");
    o_seed = cmd->add_option("--seed", seed, "master seed");
    if (with_est) o_est = cmd->add_option("--est-error", est_error, "none|uniform-half-span");
    o_out = cmd->add_option("--out", out, "output CSV path");
    o_manifest = cmd->add_option("--manifest", manifest, "manifest JSON path");
  }

  void overlay(ConfigMap& map) const {
    if (o_config && o_config->count()) {
      for (const auto& [k, v] : hmt::load_config_file(config_path)) map[k] = v;
    }
    auto set = [&](CLI::Option* o, const std::string& k, const std::string& v) {
      if (o && o->count()) map[k] = v;
    };
    set(o_channel, "cli.channel", channel);
    set(o_snr, "snr_db_list", snr);
    set(o_ebn0, "ebn0_db_list", ebn0);
    set(o_receivers, "cli.receivers", receivers);
    set(o_spreads, "cli.spreads", spreads);
    if (o_spread && o_spread->count()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", spread);
      map["cli.spread"] = buf;
    }
    if (o_real && o_real->count()) map["n_realizations"] = std::to_string(realizations);
    if (o_bursts && o_bursts->count()) map["n_bursts_per_realization"] = std::to_string(bursts);
    if (o_paths && o_paths->count()) map["n_paths"] = std::to_string(paths);
    if (o_seed && o_seed->count()) map["seed"] = std::to_string(seed);
    set(o_est, "estimation_error", est_error);
  }
};

ConfigMap base_map(const std::string& command) {
  ConfigMap map = hmt::to_config_map(SimConfig{});
  map["cli.command"] = command;
  return map;
}

hmt::NamedReceiver make_receiver(const std::string& name, const SimConfig& cfg) {
  if (name == "tpr") return {"tpr", hmt::ReceiverSpec{hmt::ReceiverMode::TPR, 0.0, 0.0}};
  if (name == "maxsinr") return {"maxsinr", hmt::ReceiverSpec{hmt::ReceiverMode::MaxSINR, 0.0, 0.0}};
  if (name == "ub") {
    hmt::SinrParams sp;
    sp.scattering = cfg.scattering;
    sp.lattice = cfg.lattice;
    sp.sigma = cfg.sigma;
    sp.sigma_c2 = cfg.sigma_c2;
    sp.sigma_w2 = 0.0;  // searched offsets are noise-free, hence SNR-independent
    const auto r = hmt::upper_bound_search(sp, hmt::SearchObjective::FullSinr);
    return {"ub", hmt::ReceiverSpec{hmt::ReceiverMode::Manual, r.delta_t, r.delta_f}};
  }
  throw std::invalid_argument("unknown receiver: " + name + " (want tpr, maxsinr, or ub)");
}

std::vector<hmt::NamedReceiver> receivers_from_map(const ConfigMap& map, const SimConfig& cfg,
                                                   const std::string& fallback) {
  const auto it = map.find("cli.receivers");
  const std::string expr = it == map.end() || it->second.empty() ? fallback : it->second;
  std::vector<hmt::NamedReceiver> out;
  for (const auto& n : split_names(expr)) out.push_back(make_receiver(n, cfg));
  if (out.empty()) throw std::invalid_argument("empty receiver list");
  return out;
}

struct RunPaths {
  std::string csv, manifest;
};

RunPaths resolve_paths(const CommonFlags& fl, const std::string& default_csv) {
  RunPaths p;
  p.csv = (fl.o_out && fl.o_out->count()) ? fl.out : default_csv;
  p.manifest = (fl.o_manifest && fl.o_manifest->count()) ? fl.manifest : p.csv + ".manifest.json";
  return p;
}

// manifest goes to disk before the results, then again with the finish time
hmt::RunManifest begin_manifest(const std::string& command, const ConfigMap& map,
                                const SimConfig& cfg, const RunPaths& paths) {
  hmt::RunManifest m;
  m.command = command;
  m.config = map;
  m.seed = cfg.seed;
  m.code_version = std::string(hmt::version);
  m.started = hmt::now_iso8601();
  m.outputs = {paths.csv};
  hmt::write_manifest(paths.manifest, m);
  return m;
}

void finish_manifest(hmt::RunManifest& m, const std::string& path) {
  m.finished = hmt::now_iso8601();
  hmt::write_manifest(path, m);
}

int run_sinr_curve(const CommonFlags& fl) {
  ConfigMap map = base_map("sinr-curve");
  map["cli.spread"] = "0.2";
  map["snr_db_list"] = "0:2:30";
  fl.overlay(map);
  SimConfig cfg = config_from_map(map);
  const auto receivers = receivers_from_map(map, cfg, "tpr,maxsinr");
  const auto paths = resolve_paths(fl, "sinr_curve.csv");
  auto manifest = begin_manifest("sinr-curve", map, cfg, paths);
  const auto points = hmt::measure_sinr(cfg, receivers);
  hmt::write_curve_csv(paths.csv, points);
  finish_manifest(manifest, paths.manifest);
  std::cout << "wrote " << paths.csv << " (" << points.size() << " rows)\n";
  return 0;
}

int run_spread_sweep(const CommonFlags& fl) {
  ConfigMap map = base_map("spread-sweep");
  map["cli.spreads"] = "0.05,0.1,0.15,0.2,0.25,0.3,0.35";
  map["snr_db_list"] = "20";  // sweep runs at a fixed operating SNR
  fl.overlay(map);
  map["snr_db_list"] = "20";
  const auto it = map.find("cli.spreads");
  const auto spreads = parse_values(it->second);
  if (spreads.empty()) throw std::invalid_argument("empty spread list");

  SimConfig cfg0 = config_from_map(map);
  const auto paths = resolve_paths(fl, "spread_sweep.csv");
  auto manifest = begin_manifest("spread-sweep", map, cfg0, paths);

  std::vector<hmt::CurvePoint> all;
  for (const double theta : spreads) {
    ConfigMap m2 = map;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", theta);
    m2["cli.spread"] = buf;
    SimConfig cfg = config_from_map(m2);
    const auto receivers = receivers_from_map(m2, cfg, "tpr,maxsinr");
    auto points = hmt::measure_sinr(cfg, receivers);
    for (auto& p : points) p.x = theta;
    all.insert(all.end(), points.begin(), points.end());
  }
  hmt::write_curve_csv(paths.csv, all);
  finish_manifest(manifest, paths.manifest);
  std::cout << "wrote " << paths.csv << " (" << all.size() << " rows)\n";
  return 0;
}

int run_ber_curve(const CommonFlags& fl) {
  ConfigMap map = base_map("ber-curve");
  map["cli.spread"] = "0.2";
  map["ebn0_db_list"] = "0:2:20";
  fl.overlay(map);
  SimConfig cfg = config_from_map(map);
  const auto receivers = receivers_from_map(map, cfg, "tpr,maxsinr");
  const auto paths = resolve_paths(fl, "ber_curve.csv");
  auto manifest = begin_manifest("ber-curve", map, cfg, paths);
  const auto points = hmt::measure_ber(cfg, receivers);
  hmt::write_curve_csv(paths.csv, points);
  finish_manifest(manifest, paths.manifest);
  std::cout << "wrote " << paths.csv << " (" << points.size() << " rows)\n";
  return 0;
}

int run_robustness(const CommonFlags& fl) {
  ConfigMap map = base_map("robustness");
  map["cli.spread"] = "0.1";
  map["snr_db_list"] = "0:2:30";
  map["estimation_error"] = "uniform-half-span";
  fl.overlay(map);
  SimConfig cfg = config_from_map(map);
  const auto paths = resolve_paths(fl, "robustness.csv");
  auto manifest = begin_manifest("robustness", map, cfg, paths);
  const auto points = hmt::robustness_sweep(cfg);
  hmt::write_curve_csv(paths.csv, points);
  finish_manifest(manifest, paths.manifest);
  std::cout << "wrote " << paths.csv << " (" << points.size() << " rows)\n";
  return 0;
}

// Riemann-sum ambiguity oracle, independent of the closed form.
std::complex<double> ambiguity_numeric(double sigma, double tau, double nu) {
  const double rs = std::sqrt(sigma);
  const double half = 6.0 * rs + std::abs(tau);
  const double step = rs / 40.0;
  const long n = static_cast<long>(std::ceil(2.0 * half / step));
  const double amp = std::pow(2.0 / sigma, 0.25);
  std::complex<double> acc{0.0, 0.0};
  for (long k = 0; k <= n; ++k) {
    const double t = -half + k * step;
    const double g1 = amp * std::exp(-std::numbers::pi * t * t / sigma);
    const double t2 = t - tau;
    const double g2 = amp * std::exp(-std::numbers::pi * t2 * t2 / sigma);
    acc += g1 * g2 * std::polar(1.0, -2.0 * std::numbers::pi * nu * t);
  }
  return acc * step;
}

hmt::CheckReport ambiguity_oracle_report(double sigma, std::uint64_t seed) {
  hmt::CheckReport r;
  r.title = "closed-form ambiguity vs numeric integration";
  hmt::RandomSource rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double sg = sigma * rng.uniform(0.3, 3.0);
    const double tau = rng.uniform(-3.0, 3.0) * std::sqrt(sg);
    const double nu = rng.uniform(-3.0, 3.0) / std::sqrt(sg);
    const auto diff = ambiguity_numeric(sg, tau, nu) - hmt::ambiguity_closed(sg, tau, nu);
    worst = std::max(worst, std::abs(diff));
  }
  r.checks.push_back({"ambiguity-random-draws", worst <= 1e-5, worst, 1e-5});

  const double rs = std::sqrt(sigma);
  const double step = rs / 40.0;
  double energy = 0.0;
  const double amp = std::pow(2.0 / sigma, 0.25);
  for (double t = -6.0 * rs; t <= 6.0 * rs; t += step) {
    const double g = amp * std::exp(-std::numbers::pi * t * t / sigma);
    energy += g * g * step;
  }
  r.checks.push_back({"prototype-unit-energy", std::abs(energy - 1.0) <= 1e-9,
                      std::abs(energy - 1.0), 1e-9});
  return r;
}

void print_report(const hmt::CheckReport& r) {
  std::printf("%s\n", r.title.c_str());
  for (const auto& c : r.checks)
    std::printf("  %-34s %12.5g  (bound %g)  %s\n", c.name.c_str(), c.value, c.bound,
                c.passed ? "PASS" : "FAIL");
}

int run_validate(const CommonFlags& fl, const std::string& report_path, double sigma_flag,
                 bool sigma_set) {
  ConfigMap map = base_map("validate");
  map["cli.spread"] = "0.1";
  fl.overlay(map);
  if (sigma_set) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", sigma_flag);
    map["sigma"] = buf;
  }
  SimConfig cfg = config_from_map(map);
  if (cfg.sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  const double theta = parse_d("cli.spread", map.at("cli.spread"));

  hmt::SinrParams base;
  base.lattice = cfg.lattice;
  base.sigma = cfg.sigma;
  base.sigma_c2 = cfg.sigma_c2;
  base.sigma_w2 = cfg.sigma_c2 * 1e-2;  // 20 dB operating point

  hmt::SinrParams pu = base;
  pu.scattering = hmt::ScatteringSpec::uniform_spread(theta, cfg.sigma);
  hmt::SinrParams pe = base;
  pe.scattering = hmt::ScatteringSpec::exponential_spread(theta, cfg.sigma);

  const auto ra = hmt::verify_uni_offset_derivation(pu, 41);
  const auto rb = hmt::verify_exp_offset_derivation(pe, 41);
  const auto rp = ambiguity_oracle_report(cfg.sigma, cfg.seed);

  print_report(ra);
  print_report(rb);
  print_report(rp);
  const bool ok = ra.all_passed() && rb.all_passed() && rp.all_passed();
  std::printf("overall: %s\n", ok ? "PASS" : "FAIL");

  const auto paths = resolve_paths(fl, "validate.csv");
  hmt::RunManifest m;
  m.command = "validate";
  m.config = map;
  m.seed = cfg.seed;
  m.code_version = std::string(hmt::version);
  m.started = hmt::now_iso8601();
  if (!report_path.empty()) m.outputs.push_back(report_path);
  hmt::write_manifest(paths.manifest, m);

  if (!report_path.empty()) {
    nlohmann::json j;
    j["schema"] = "validate-report/1";
    j["all_passed"] = ok;
    j["reports"] = nlohmann::json::array();
    for (const auto* r : {&ra, &rb, &rp})
      j["reports"].push_back(nlohmann::json::parse(hmt::to_json_string(*r)));
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write report: " + report_path);
    out << j.dump(2) << "\n";
  }
  finish_manifest(m, paths.manifest);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hexagonal multicarrier link simulator"};
  app.set_version_flag("--version", std::string(hmt::version));
  app.require_subcommand(1);

  auto* c_sinr = app.add_subcommand("sinr-curve", "measured SINR vs SNR");
  auto* c_sweep = app.add_subcommand("spread-sweep", "measured SINR vs channel spread at 20 dB");
  auto* c_ber = app.add_subcommand("ber-curve", "measured BER vs Eb/N0");
  auto* c_rob = app.add_subcommand("robustness", "SINR under delay-spread estimation error");
  auto* c_val = app.add_subcommand("validate", "numeric validation suite");

  CommonFlags f_sinr, f_sweep, f_ber, f_rob, f_val;
  f_sinr.attach(c_sinr, true, false, false, false);
  f_sweep.attach(c_sweep, false, false, true, false);
  f_ber.attach(c_ber, false, true, false, false);
  f_rob.attach(c_rob, true, false, false, true);
  f_val.attach(c_val, false, false, false, false);

  std::string report_path;
  double sigma_flag = 0.0;
  c_val->add_option("--report", report_path, "machine-readable JSON report path");
  auto* o_sigma = c_val->add_option("--sigma", sigma_flag, "pulse dispersion override (seconds^2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_sinr->parsed()) return run_sinr_curve(f_sinr);
    if (c_sweep->parsed()) return run_spread_sweep(f_sweep);
    if (c_ber->parsed()) return run_ber_curve(f_ber);
    if (c_rob->parsed()) return run_robustness(f_rob);
    if (c_val->parsed())
      return run_validate(f_val, report_path, sigma_flag, o_sigma->count() > 0);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
