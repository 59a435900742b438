#include "satnet/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace satnet {

namespace {

/// Real part of tr(H F); PSD x Hermitian traces are real up to roundoff,
/// so tiny negatives are clamped to zero.
double real_trace(const MatrixXcd& H, const MatrixXcd& F) {
  if (H.rows() != F.rows() || H.cols() != F.cols())
    throw std::invalid_argument("real_trace: dimension mismatch");
  double v = (H.cwiseProduct(F.transpose())).sum().real();
  if (v < 0.0 && v > -1e-9) v = 0.0;
  return v;
}

double log_ratio(double num, double den) { return std::log2(num / den); }

}  // namespace

CovariateSet outer_products(const PrecoderSet& p) {
  CovariateSet F;
  F.F_gc = p.w_c * p.w_c.adjoint();
  F.F_gd = p.w_d * p.w_d.adjoint();
  F.F_lcm.reserve(p.p_cm.size());
  for (const auto& v : p.p_cm) F.F_lcm.push_back(v * v.adjoint());
  F.F_lpk.reserve(p.p_pk.size());
  for (const auto& v : p.p_pk) F.F_lpk.push_back(v * v.adjoint());
  return F;
}

PowerSegments power_segments(const ChannelStatistics& stats,
                             const CovariateSet& F,
                             const ScenarioConfig& config) {
  const int N = config.N, K = config.K, M = config.M;
  PowerSegments seg;
  seg.S_gc.resize(N);
  seg.S_gd.resize(N);
  seg.Sres_gc.resize(N);
  seg.Sres_gd.resize(N);
  seg.I_g_tot.resize(N);
  for (int n = 0; n < N; ++n) {
    seg.S_gc[n] = real_trace(stats.g[n].H, F.F_gc);
    seg.S_gd[n] = real_trace(stats.g[n].H, F.F_gd);
    seg.Sres_gc[n] = real_trace(stats.g[n].H_res, F.F_gc);
    seg.Sres_gd[n] = real_trace(stats.g[n].H_res, F.F_gd);
    double I = 0.0;
    for (int m = 0; m < M; ++m) {
      I += real_trace(stats.l2g[m][n].H, F.F_lcm[m]);
      for (int k = 0; k < K; ++k)
        if (config.group_of(k) == m) I += real_trace(stats.l2g[m][n].H, F.F_lpk[k]);
    }
    seg.I_g_tot[n] = I;
  }

  seg.S_g2l_c.resize(K);
  seg.Sres_g2l_c.resize(K);
  seg.S_l_c.resize(K);
  seg.Sres_l_c.resize(K);
  seg.S_l_p.resize(K);
  seg.Sres_l_p.resize(K);
  seg.I_l_tot.resize(K);
  for (int k = 0; k < K; ++k) {
    const int m = config.group_of(k);
    seg.S_g2l_c[k] = real_trace(stats.g2l[k].H, F.F_gc);
    seg.Sres_g2l_c[k] = real_trace(stats.g2l[k].H_res, F.F_gc);
    seg.S_l_c[k] = real_trace(stats.l[m][k].H, F.F_lcm[m]);
    seg.Sres_l_c[k] = real_trace(stats.l[m][k].H_res, F.F_lcm[m]);
    seg.S_l_p[k] = real_trace(stats.l[m][k].H, F.F_lpk[k]);
    seg.Sres_l_p[k] = real_trace(stats.l[m][k].H_res, F.F_lpk[k]);
    double I = 0.0;
    for (int i = 0; i < K; ++i)
      if (i != k && config.group_of(i) == m)
        I += real_trace(stats.l[m][k].H, F.F_lpk[i]);
    for (int j = 0; j < M; ++j) {
      if (j == m) continue;
      I += real_trace(stats.l[j][k].H, F.F_lcm[j]);
      for (int i = 0; i < K; ++i)
        if (config.group_of(i) == j) I += real_trace(stats.l[j][k].H, F.F_lpk[i]);
    }
    I += real_trace(stats.g2l[k].H, F.F_gd);
    seg.I_l_tot[k] = I;
  }
  return seg;
}

RateReport approx_rates(const PowerSegments& seg, const ScenarioConfig& config,
                        double sigma2_noise) {
  if (sigma2_noise <= 0) throw std::invalid_argument("noise power must be > 0");
  const int N = config.N, K = config.K;
  RateReport rep;
  rep.R_gc.resize(N);
  rep.R_gd.resize(N);
  for (int n = 0; n < N; ++n) {
    const double base = seg.I_g_tot[n] + sigma2_noise;
    rep.R_gc[n] = log_ratio(seg.S_gc[n] + seg.S_gd[n] + base,
                            seg.Sres_gc[n] + seg.S_gd[n] + base);
    rep.R_gd[n] = log_ratio(seg.Sres_gc[n] + seg.S_gd[n] + base,
                            seg.Sres_gc[n] + seg.Sres_gd[n] + base);
  }
  rep.R_sup.resize(K);
  rep.R_sub.resize(K);
  rep.R_p.resize(K);
  for (int k = 0; k < K; ++k) {
    const double base = seg.I_l_tot[k] + sigma2_noise;
    rep.R_sup[k] =
        log_ratio(seg.S_g2l_c[k] + seg.S_l_c[k] + seg.S_l_p[k] + base,
                  seg.Sres_g2l_c[k] + seg.S_l_c[k] + seg.S_l_p[k] + base);
    rep.R_sub[k] =
        log_ratio(seg.Sres_g2l_c[k] + seg.S_l_c[k] + seg.S_l_p[k] + base,
                  seg.Sres_g2l_c[k] + seg.Sres_l_c[k] + seg.S_l_p[k] + base);
    rep.R_p[k] =
        log_ratio(seg.Sres_g2l_c[k] + seg.Sres_l_p[k] + seg.S_l_p[k] + base,
                  seg.Sres_g2l_c[k] + seg.Sres_l_c[k] + seg.Sres_l_p[k] + base);
  }
  return rep;
}

double common_rate(const RateReport& report) {
  double r = std::numeric_limits<double>::infinity();
  for (double v : report.R_gc) r = std::min(r, v);
  for (double v : report.R_sup) r = std::min(r, v);
  return std::isfinite(r) ? r : 0.0;
}

double subcommon_rate(const RateReport& report, const ScenarioConfig& config,
                      int m) {
  double r = std::numeric_limits<double>::infinity();
  for (int k = 0; k < config.K; ++k)
    if (config.group_of(k) == m) r = std::min(r, report.R_sub[k]);
  return std::isfinite(r) ? r : 0.0;
}

void total_rates(const CommonRateSplit& c, RateReport& report,
                 const ScenarioConfig& config) {
  const int N = config.N, K = config.K;
  if (static_cast<int>(c.c_g.size()) != N ||
      static_cast<int>(c.c_sup.size()) != K ||
      static_cast<int>(c.c_sub.size()) != K)
    throw std::invalid_argument("total_rates: split size mismatch");
  report.R_c = common_rate(report);
  report.R_sub_c.resize(config.M);
  for (int m = 0; m < config.M; ++m)
    report.R_sub_c[m] = subcommon_rate(report, config, m);
  report.total_gu.resize(N);
  for (int n = 0; n < N; ++n) report.total_gu[n] = c.c_g[n] + report.R_gd[n];
  report.total_lu.resize(K);
  for (int k = 0; k < K; ++k)
    report.total_lu[k] = c.c_sup[k] + c.c_sub[k] + report.R_p[k];
  double mmf = std::numeric_limits<double>::infinity();
  for (double v : report.total_gu) mmf = std::min(mmf, v);
  for (double v : report.total_lu) mmf = std::min(mmf, v);
  report.mmf = std::isfinite(mmf) ? mmf : 0.0;
}

std::string RateReport::csv_header(int N, int K) {
  std::ostringstream os;
  os << "mmf,R_c";
  for (int n = 0; n < N; ++n)
    os << ",R_gc_" << n << ",R_gd_" << n << ",total_gu_" << n;
  for (int k = 0; k < K; ++k)
    os << ",R_sup_" << k << ",R_sub_" << k << ",R_p_" << k << ",total_lu_" << k;
  return os.str();
}

std::string RateReport::csv_row() const {
  std::ostringstream os;
  os.precision(12);
  os << mmf << ',' << R_c;
  for (size_t n = 0; n < R_gc.size(); ++n)
    os << ',' << R_gc[n] << ',' << R_gd[n] << ','
       << (n < total_gu.size() ? total_gu[n] : 0.0);
  for (size_t k = 0; k < R_sup.size(); ++k)
    os << ',' << R_sup[k] << ',' << R_sub[k] << ',' << R_p[k] << ','
       << (k < total_lu.size() ? total_lu[k] : 0.0);
  return os.str();
}

ChannelRealization realize_channels(const ChannelEstimate& est,
                                    const ScenarioConfig& config, Rng& rng) {
  ChannelRealization r;
  r.h_g.reserve(est.hat_h_g.size());
  for (const auto& h : est.hat_h_g)
    r.h_g.push_back(realize_phase_error(h, config.sigma2_e_g, rng));
  r.h_g2l.reserve(est.hat_h_g2l.size());
  for (const auto& h : est.hat_h_g2l)
    r.h_g2l.push_back(realize_phase_error(h, config.sigma2_e_g, rng));
  r.h_l.resize(est.hat_h_l.size());
  for (size_t m = 0; m < est.hat_h_l.size(); ++m)
    for (const auto& h : est.hat_h_l[m])
      r.h_l[m].push_back(realize_phase_error(h, config.sigma2_e_l, rng));
  r.h_l2g.resize(est.hat_h_l2g.size());
  for (size_t m = 0; m < est.hat_h_l2g.size(); ++m)
    for (const auto& h : est.hat_h_l2g[m])
      r.h_l2g[m].push_back(realize_phase_error(h, config.sigma2_e_l, rng));
  return r;
}

InstantSinrs instantaneous_sinrs(const ChannelRealization& actual,
                                 const ChannelEstimate& est,
                                 const PrecoderSet& P,
                                 const ScenarioConfig& config,
                                 double sigma2_noise) {
  const int N = config.N, K = config.K, M = config.M;
  auto pow2 = [](const VectorXcd& h, const VectorXcd& w) {
    return std::norm(h.dot(w));  // |h^H w|^2
  };

  InstantSinrs s;
  s.rho_gc.resize(N);
  s.rho_gd.resize(N);
  for (int n = 0; n < N; ++n) {
    const VectorXcd& h = actual.h_g[n];
    const VectorXcd& hat = est.hat_h_g[n];
    const VectorXcd res = h - hat;  // h~ = h - hat_h
    double I = 0.0;
    for (int m = 0; m < M; ++m) {
      I += pow2(actual.h_l2g[m][n], P.p_cm[m]);
      for (int i = 0; i < K; ++i)
        if (config.group_of(i) == m) I += pow2(actual.h_l2g[m][n], P.p_pk[i]);
    }
    double res_c = pow2(res, P.w_c);
    s.rho_gc[n] = pow2(hat, P.w_c) /
                  (res_c + pow2(h, P.w_d) + I + sigma2_noise);
    s.rho_gd[n] = pow2(hat, P.w_d) /
                  (res_c + pow2(res, P.w_d) + I + sigma2_noise);
  }

  s.rho_sup.resize(K);
  s.rho_sub.resize(K);
  s.rho_p.resize(K);
  for (int k = 0; k < K; ++k) {
    const int m = config.group_of(k);
    const VectorXcd& hg = actual.h_g2l[k];
    const VectorXcd& hg_hat = est.hat_h_g2l[k];
    const VectorXcd hg_res = hg - hg_hat;
    const VectorXcd& hl = actual.h_l[m][k];
    const VectorXcd& hl_hat = est.hat_h_l[m][k];
    const VectorXcd hl_res = hl - hl_hat;

    double I = 0.0;
    for (int i = 0; i < K; ++i)
      if (i != k && config.group_of(i) == m) I += pow2(hl, P.p_pk[i]);
    for (int j = 0; j < M; ++j) {
      if (j == m) continue;
      I += pow2(actual.h_l[j][k], P.p_cm[j]);
      for (int i = 0; i < K; ++i)
        if (config.group_of(i) == j) I += pow2(actual.h_l[j][k], P.p_pk[i]);
    }
    I += pow2(hg, P.w_d);

    double res_gc = pow2(hg_res, P.w_c);
    double res_lc = pow2(hl_res, P.p_cm[m]);
    double res_lp = pow2(hl_res, P.p_pk[k]);
    double S_lc = pow2(hl, P.p_cm[m]);
    double S_lp = pow2(hl, P.p_pk[k]);
    s.rho_sup[k] = pow2(hg_hat, P.w_c) /
                   (res_gc + S_lc + S_lp + I + sigma2_noise);
    s.rho_sub[k] = pow2(hl_hat, P.p_cm[m]) /
                   (res_gc + res_lc + S_lp + I + sigma2_noise);
    s.rho_p[k] = pow2(hl_hat, P.p_pk[k]) /
                 (res_gc + res_lc + res_lp + I + sigma2_noise);
  }
  return s;
}

}  // namespace satnet
