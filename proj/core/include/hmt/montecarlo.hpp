#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmt/channel.hpp"
#include "hmt/lattice.hpp"
#include "hmt/manifest.hpp"
#include "hmt/modem.hpp"

namespace hmt {

enum class EstimationError { None, UniformHalfSpan };

struct SimConfig {
  LatticeSpec lattice{1e-4, 2.5e4, 20, 40};
  double sigma = 1e-4 / (1.7320508075688772 * 2.5e4);  // T/(sqrt(3) F) at the defaults
  double ts = 1e-6;
  int pulse_len_samples = 600;  // nominal engine support; projections truncate at +-6 sqrt(sigma)
  ScatteringSpec scattering{};
  ReceiverSpec receiver{};
  std::vector<double> snr_db_list;   // sigma_c^2/sigma_w^2 in dB
  std::vector<double> ebn0_db_list;  // BER sweeps only
  int n_realizations = 2000;
  int n_bursts_per_realization = 1;
  int n_paths = 64;
  Constellation constellation = Constellation::QPSK;
  double symbol_power = 1.0;
  double sigma_c2 = 1.0;
  std::uint64_t seed = 1;
  EstimationError estimation_error = EstimationError::None;
  int interior_margin = 2;  // guard ring excluded from statistics, per coset
  long min_bit_errors = 100;
  long max_bursts_per_point = 4000;
};

enum class Metric { SinrDb, Ber };

struct CurvePoint {
  double x = 0.0;  // SNR dB, Eb/N0 dB, or spread factor
  Metric metric = Metric::SinrDb;
  double value = 0.0;
  double ci_halfwidth = 0.0;
  std::string receiver;
  std::string channel_kind;
  double spread = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
  double delta_t = 0.0;
  double delta_f = 0.0;
};

struct NamedReceiver {
  std::string name;
  ReceiverSpec spec;
};

// Measured SINR over cfg.snr_db_list. All receivers see the same channel
// realizations, symbol grids, and noise draws: per-realization streams are
// derived from (seed, stream tag, realization index) only.
std::vector<CurvePoint> measure_sinr(const SimConfig& cfg);
std::vector<CurvePoint> measure_sinr(const SimConfig& cfg,
                                     const std::vector<NamedReceiver>& receivers);

// Full transmit/receive chain BER over cfg.ebn0_db_list with Wilson CIs;
// bursts continue until every receiver has min_bit_errors errors or the
// burst cap is hit.
std::vector<CurvePoint> measure_ber(const SimConfig& cfg);
std::vector<CurvePoint> measure_ber(const SimConfig& cfg,
                                    const std::vector<NamedReceiver>& receivers);

// Three-way comparison per SNR point: searched upper bound, the closed-form
// receiver under per-realization delay-spread estimation error, and TPR.
std::vector<CurvePoint> robustness_sweep(const SimConfig& cfg);

struct Chi2Result {
  double chi2 = 0.0;
  double p_value = 0.0;
  int dof = 0;
  long n = 0;
};

// Joint delay/Doppler goodness-of-fit for sample_realization against the
// scattering density, on a bins x bins equal-probability partition.
Chi2Result scattering_chi2(const ScatteringSpec& spec, long n_paths_pooled, int bins,
                           std::uint64_t seed);

std::string channel_kind_name(const ScatteringSpec& spec);

ConfigMap to_config_map(const SimConfig& cfg);

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points);

}  // namespace hmt
