#pragma once

#include <Eigen/Dense>
#include <vector>

#include "satnet/geometry.hpp"
#include "satnet/scenario.hpp"

namespace satnet {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

/// Estimated channel vectors for every link. LU indices are global
/// (0..K-1); hat_h_l[m][k] covers serving and cross links alike.
struct ChannelEstimate {
  std::vector<VectorXcd> hat_h_g;                 // GEO -> GU n, length N_tg
  std::vector<VectorXcd> hat_h_g2l;               // GEO -> LU k, length N_tg
  std::vector<std::vector<VectorXcd>> hat_h_l;    // LEO m -> LU k, length N_tl
  std::vector<std::vector<VectorXcd>> hat_h_l2g;  // LEO m -> GU n, length N_tl
};

/// Correlation matrices of the phase-error factor Phi = exp(-j phi_e).
struct PhaseCorrelation {
  MatrixXd X;      // E{Phi Phi^H}
  MatrixXd X_res;  // E{(Phi-1)(Phi-1)^H}
  double sigma2 = 0.0;
};

/// Second-moment channel matrix and its residual for one link.
struct LinkStat {
  MatrixXcd H;      // E{h h^H}
  MatrixXcd H_res;  // E{h~ h~^H}
};

struct ChannelStatistics {
  std::vector<LinkStat> g;                 // per GU
  std::vector<LinkStat> g2l;               // per LU
  std::vector<std::vector<LinkStat>> l;    // [m][k]
  std::vector<std::vector<LinkStat>> l2g;  // [m][n]
};

/// Tapered reflector beam gain; continuous at theta = 0 where it equals gmax.
double geo_beam_gain(double theta, double theta3dB, double gmax);

void sample_geo_channel(const LinkGeometry& geo, const ScenarioConfig& config,
                        Rng& rng, ChannelEstimate& est);
void sample_leo_channel(const LinkGeometry& geo, const ScenarioConfig& config,
                        Rng& rng, ChannelEstimate& est);
ChannelEstimate sample_channels(const LinkGeometry& geo,
                                const ScenarioConfig& config, Rng& rng);

PhaseCorrelation phase_error_correlation(double sigma2, int dim);

/// diag(hat) * X * diag(hat)^H for a given phase correlation matrix.
MatrixXcd phase_weighted_moment(const VectorXcd& hat, const MatrixXd& X);

ChannelStatistics channel_statistics(const ChannelEstimate& est,
                                     double sigma2_g, double sigma2_l);

/// Draws an actual channel h = hat_h o exp(-j phi_e), phi_e ~ N(0, sigma2 I).
VectorXcd realize_phase_error(const VectorXcd& hat, double sigma2, Rng& rng);

}  // namespace satnet
