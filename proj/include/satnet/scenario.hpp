#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace satnet {

/// Multiple access scheme selecting which streams are active.
enum class Scheme { DRSMA, M_RSMA, M_SDMA };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

/// All scalar parameters of the network, channel statistics, and solver.
/// Noise variance is fixed to 1 by convention; P_g and P_l are therefore
/// interpreted as linear SNR budgets.
struct ScenarioConfig {
  int M = 2;                         // LEO satellites
  int N = 6;                         // GEO users
  int K = 4;                         // LEO users (total)
  std::vector<int> group_sizes{2, 2};  // K_m per LEO, sums to K
  int N_tg = 4;                      // GEO feeds
  int N_tl = 3;                      // LEO feeds

  double P_g = 31.6227766016838;     // 15 dB
  double P_l = 10.0;                 // 10 dB

  double sigma2_e_g = 0.0;           // phase error variance, rad^2
  double sigma2_e_l = 0.0;

  double carrier_freq = 20e9;        // Hz
  double bandwidth = 500e6;          // Hz
  double ut_gain_dBi = 39.7;
  double geo_gain_max_dBi = 58.5;
  double leo_gain_dBi = 30.5;
  double geo_height_m = 35786e3;
  double leo_height_m = 600e3;
  double theta3dB_geo_deg = 0.4412;
  double theta3dB_leo_deg = 4.4127;
  // LEO nadir offset from the GEO beam center, in GEO coverage radii.
  double leo_center_factor = 0.5;
  double rician_factor_dB = 10.0;
  double noise_temp_K = 290.0;

  // Lognormal rain fade: ln(chi_dB) ~ N(rain_mu_dB, rain_sigma_dB).
  double rain_mu_dB = -3.125;
  double rain_sigma_dB = 1.591;
  bool rain_per_feed = false;        // one fade draw per UT when false

  double tau = 1e-5;                 // SCA stopping tolerance
  double beta = 0.1;                 // initial rank-one penalty factor
  int max_sca_iters = 200;
  double rank_gap_tol = 1e-4;        // relative gap for eigen extraction
  int randomization_count = 100;

  double solver_eps = 1e-8;          // conic solver residual/gap tolerance
  int solver_max_iters = 200;

  Scheme scheme = Scheme::DRSMA;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  int group_of(int k) const;          // LEO index serving global LU k
  int group_offset(int m) const;      // first global LU index of LEO m

  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig load(const std::string& path);
  std::string to_json_text() const;
};

}  // namespace satnet
