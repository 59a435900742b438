#pragma once

#include <string>
#include <vector>

#include "satnet/channel.hpp"
#include "satnet/scenario.hpp"

namespace satnet {

/// Lifted PSD beamforming matrices (decision variables of the SDP).
struct CovariateSet {
  MatrixXcd F_gc, F_gd;            // N_tg x N_tg
  std::vector<MatrixXcd> F_lcm;    // per LEO, N_tl x N_tl
  std::vector<MatrixXcd> F_lpk;    // per LU (global index), N_tl x N_tl
};

struct PrecoderSet {
  VectorXcd w_c, w_d;              // length N_tg
  std::vector<VectorXcd> p_cm;     // per LEO, length N_tl
  std::vector<VectorXcd> p_pk;     // per LU, length N_tl
};

CovariateSet outer_products(const PrecoderSet& p);

/// Noise-normalized expected powers entering the rate formulas.
struct PowerSegments {
  // per GU n
  std::vector<double> S_gc, S_gd, Sres_gc, Sres_gd, I_g_tot;
  // per LU k (global index)
  std::vector<double> S_g2l_c, Sres_g2l_c, S_l_c, Sres_l_c, S_l_p, Sres_l_p,
      I_l_tot;
};

/// Per-UT common-rate portions, entrywise >= 0.
struct CommonRateSplit {
  std::vector<double> c_g;      // N
  std::vector<double> c_sup;    // K
  std::vector<double> c_sub;    // K
};

struct RateReport {
  std::vector<double> R_gc, R_gd;          // per GU
  std::vector<double> R_sup, R_sub, R_p;   // per LU
  double R_c = 0.0;                        // super-common rate
  std::vector<double> R_sub_c;             // per LEO sub-common rate
  std::vector<double> total_gu;            // R_n
  std::vector<double> total_lu;            // R_{k_m}
  double mmf = 0.0;

  // Column order: mmf, R_c, then per GU (R_gc, R_gd, total), then per LU
  // (R_sup, R_sub, R_p, total).
  static std::string csv_header(int N, int K);
  std::string csv_row() const;
};

PowerSegments power_segments(const ChannelStatistics& stats,
                             const CovariateSet& F, const ScenarioConfig& config);

/// Fills the five approximate ergodic rates from the power segments.
RateReport approx_rates(const PowerSegments& seg, const ScenarioConfig& config,
                        double sigma2_noise = 1.0);

double common_rate(const RateReport& report);
double subcommon_rate(const RateReport& report, const ScenarioConfig& config, int m);

/// Completes R_c, sub-common rates, totals and mmf in-place.
void total_rates(const CommonRateSplit& c, RateReport& report,
                 const ScenarioConfig& config);

/// Instantaneous decoding SINRs for one realized channel draw.
struct InstantSinrs {
  std::vector<double> rho_gc, rho_gd;        // per GU
  std::vector<double> rho_sup, rho_sub, rho_p;  // per LU
};

/// Actual channels in the same layout as the estimate.
struct ChannelRealization {
  std::vector<VectorXcd> h_g;
  std::vector<VectorXcd> h_g2l;
  std::vector<std::vector<VectorXcd>> h_l;
  std::vector<std::vector<VectorXcd>> h_l2g;
};

ChannelRealization realize_channels(const ChannelEstimate& est,
                                    const ScenarioConfig& config, Rng& rng);

InstantSinrs instantaneous_sinrs(const ChannelRealization& actual,
                                 const ChannelEstimate& est,
                                 const PrecoderSet& P,
                                 const ScenarioConfig& config,
                                 double sigma2_noise = 1.0);

}  // namespace satnet
