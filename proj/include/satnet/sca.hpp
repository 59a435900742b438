#pragma once

#include <string>
#include <vector>

#include "satnet/channel.hpp"
#include "satnet/conic.hpp"
#include "satnet/mask.hpp"
#include "satnet/rate.hpp"
#include "satnet/scenario.hpp"

namespace satnet {

/// Auxiliary-variable values of one solved subproblem. Entries of disabled
/// stream families stay at zero.
struct SlackState {
  double t = 0.0;
  std::vector<double> alpha_gc, alpha_gd, alpha_sup, alpha_sub, alpha_p;
  std::vector<double> eta_gc, eta_gd, eta_sup, eta_sub, eta_p;
  std::vector<double> xi_gc, xi_gd, xi_sup, xi_sub, xi_p;
};

struct SCAIterRecord {
  int iter = 0;
  double objective = 0.0;  // t - f_P
  double t = 0.0;
  double penalty = 0.0;
  double max_rel_gap = 0.0;  // max over blocks of (tr - lambda_max)/tr
  SolveStatus status = SolveStatus::Error;
  double seconds = 0.0;
  double beta = 0.0;
  bool beta_escalated = false;
};

struct SCATrace {
  std::vector<SCAIterRecord> iters;
  std::string csv() const;
};

struct SCAResult {
  CovariateSet F;
  PrecoderSet precoders;
  CommonRateSplit split;
  RateReport report;
  SCATrace trace;
  bool converged = false;
  int iterations = 0;
  double mmf = 0.0;  // of the extracted precoders
  double sdp_objective = 0.0;
  std::string message;
};

/// Variable handles of the assembled subproblem (-1 where masked off).
struct P4Vars {
  int t = -1;
  std::vector<int> c_g, c_sup, c_sub;
  std::vector<int> a_gc, a_gd, a_sup, a_sub, a_p;
  std::vector<int> e_gc, e_gd, e_sup, e_sub, e_p;
  std::vector<int> x_gc, x_gd, x_sup, x_sub, x_p;
  int F_gc = -1, F_gd = -1;
  std::vector<int> F_lcm, F_lpk;
};

struct InitState {
  CovariateSet F;
  PrecoderSet precoders;
  SlackState slack;  // xi fields hold the initial Taylor points
};

/// SVD/MRT initialization; common_frac is the power fraction given to each
/// active common stream (0.5 = equal split). A disabled stream's share goes
/// to the remaining pool.
InitState initialize(const ChannelEstimate& est, const ChannelStatistics& stats,
                     const ScenarioConfig& config, const StreamMask& mask,
                     double common_frac = 0.5);

/// Fills the xi fields of a slack state with ln of the five denominator
/// segments evaluated at a concrete iterate (the Taylor anchor points).
void xi_from_segments(const PowerSegments& seg, const ScenarioConfig& config,
                      SlackState& s);

/// Tangent of e^xi at xi_point: e^{xi_point} (xi - xi_point + 1).
LinExpr taylor_upper(int xi_var, double xi_point);

ConicProgram build_p4(const ChannelStatistics& stats,
                      const ScenarioConfig& config, const StreamMask& mask,
                      const std::vector<VectorXcd>& eigvecs,
                      const SlackState& prev, double beta, P4Vars& vars);

/// beta * sum over blocks of (tr F - v^H F v).
double penalty_value(const CovariateSet& F,
                     const std::vector<VectorXcd>& eigvecs, double beta);

double rank_one_gap(const MatrixXcd& F);

/// Leading eigenvectors of all blocks in builder order
/// (F_gc, F_gd, F_lcm..., F_lpk...); near-zero blocks get e_1.
std::vector<VectorXcd> leading_eigvecs(const CovariateSet& F);

PrecoderSet extract_precoders(const CovariateSet& F,
                              const ChannelStatistics& stats,
                              const ScenarioConfig& config,
                              const CommonRateSplit& split, Rng& rng);

SCAResult solve_mmf(const ChannelEstimate& est, const ScenarioConfig& config);

}  // namespace satnet
