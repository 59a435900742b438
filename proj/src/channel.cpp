#include "satnet/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace satnet {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kLightSpeed = 299792458.0;
constexpr double kBeamTaper = 2.07123;  // places the -3 dB point at theta3dB

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Free-space amplitude of one feed, noise-normalized: sqrt(Gr*Gsat) /
/// (4 pi d / lambda * sqrt(kappa T B)).
double link_amplitude(double sat_gain, double ut_gain, double dist,
                      const ScenarioConfig& c) {
  double lambda = kLightSpeed / c.carrier_freq;
  double noise = std::sqrt(kBoltzmann * c.noise_temp_K * c.bandwidth);
  return std::sqrt(ut_gain * sat_gain) / (4.0 * kPi * dist / lambda * noise);
}

double sample_rain_fade(const ScenarioConfig& c, Rng& rng) {
  std::normal_distribution<double> n(c.rain_mu_dB, c.rain_sigma_dB);
  double chi_dB;
  do {
    chi_dB = std::exp(n(rng));
  } while (!(chi_dB > 0.0));
  return db_to_linear(chi_dB);  // chi > 1, attenuation
}

VectorXcd random_phases(int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = std::polar(1.0, -u(rng));
  return v;
}

}  // namespace

double geo_beam_gain(double theta, double theta3dB, double gmax) {
  if (theta < 0 || theta3dB <= 0 || gmax <= 0)
    throw std::invalid_argument("geo_beam_gain: bad arguments");
  double u = kBeamTaper * std::sin(theta) / std::sin(theta3dB);
  double bracket;
  if (u < 1e-4) {
    // series of J1(u)/(2u) + 36 J3(u)/u^3 near u = 0
    bracket = 1.0 - 5.0 * u * u / 64.0;
  } else {
    bracket = std::cyl_bessel_j(1, u) / (2.0 * u) +
              36.0 * std::cyl_bessel_j(3, u) / (u * u * u);
  }
  return gmax * bracket * bracket;
}

void sample_geo_channel(const LinkGeometry& geo, const ScenarioConfig& c,
                        Rng& rng, ChannelEstimate& est) {
  const double ut_gain = db_to_linear(c.ut_gain_dBi);
  const double gmax = db_to_linear(c.geo_gain_max_dBi);
  const double theta3dB = c.theta3dB_geo_deg * kPi / 180.0;

  auto draw = [&](int u) {
    double gain = geo_beam_gain(geo.geo_angle[u], theta3dB, gmax);
    double amp = link_amplitude(gain, ut_gain, geo.geo_dist[u], c);
    VectorXcd h = random_phases(c.N_tg, rng);
    if (c.rain_per_feed) {
      for (int f = 0; f < c.N_tg; ++f)
        h(f) *= amp / std::sqrt(sample_rain_fade(c, rng));
    } else {
      h *= amp / std::sqrt(sample_rain_fade(c, rng));
    }
    return h;
  };

  est.hat_h_g.resize(c.N);
  est.hat_h_g2l.resize(c.K);
  for (int n = 0; n < c.N; ++n) est.hat_h_g[n] = draw(n);
  for (int k = 0; k < c.K; ++k) est.hat_h_g2l[k] = draw(c.N + k);
}

void sample_leo_channel(const LinkGeometry& geo, const ScenarioConfig& c,
                        Rng& rng, ChannelEstimate& est) {
  const double ut_gain = db_to_linear(c.ut_gain_dBi);
  const double leo_gain = db_to_linear(c.leo_gain_dBi);
  const double kappa = db_to_linear(c.rician_factor_dB);

  auto draw = [&](int m, int u) {
    double amp = link_amplitude(leo_gain, ut_gain, geo.leo_dist[m][u], c);
    double gamma = amp * amp;  // E{|g|^2}, Rician power
    double mean = std::sqrt(kappa * gamma / (2.0 * (kappa + 1.0)));
    double sigma = std::sqrt(gamma / (2.0 * (kappa + 1.0)));
    std::normal_distribution<double> n(mean, sigma);
    std::complex<double> g(n(rng), n(rng));
    return (g * random_phases(c.N_tl, rng).array()).matrix().eval();
  };

  est.hat_h_l.assign(c.M, std::vector<VectorXcd>(c.K));
  est.hat_h_l2g.assign(c.M, std::vector<VectorXcd>(c.N));
  for (int m = 0; m < c.M; ++m) {
    for (int k = 0; k < c.K; ++k) est.hat_h_l[m][k] = draw(m, c.N + k);
    for (int n = 0; n < c.N; ++n) est.hat_h_l2g[m][n] = draw(m, n);
  }
}

ChannelEstimate sample_channels(const LinkGeometry& geo,
                                const ScenarioConfig& c, Rng& rng) {
  ChannelEstimate est;
  sample_geo_channel(geo, c, rng, est);
  sample_leo_channel(geo, c, rng, est);
  return est;
}

PhaseCorrelation phase_error_correlation(double sigma2, int dim) {
  if (sigma2 < 0) throw std::invalid_argument("sigma2 must be >= 0");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  PhaseCorrelation pc;
  pc.sigma2 = sigma2;
  double m = std::exp(-sigma2 / 2.0);
  pc.X = MatrixXd::Constant(dim, dim, std::exp(-sigma2));
  pc.X.diagonal().setOnes();
  pc.X_res = MatrixXd::Constant(dim, dim, (1.0 - m) * (1.0 - m));
  pc.X_res.diagonal().setConstant(2.0 - 2.0 * m);
  return pc;
}

MatrixXcd phase_weighted_moment(const VectorXcd& hat, const MatrixXd& X) {
  if (hat.size() != X.rows() || X.rows() != X.cols())
    throw std::invalid_argument("phase_weighted_moment: dimension mismatch");
  return hat.asDiagonal() * X.cast<std::complex<double>>() *
         hat.conjugate().asDiagonal();
}

ChannelStatistics channel_statistics(const ChannelEstimate& est,
                                     double sigma2_g, double sigma2_l) {
  ChannelStatistics st;
  auto make = [](const VectorXcd& h, double s2) {
    PhaseCorrelation pc = phase_error_correlation(s2, static_cast<int>(h.size()));
    return LinkStat{phase_weighted_moment(h, pc.X),
                    phase_weighted_moment(h, pc.X_res)};
  };
  st.g.reserve(est.hat_h_g.size());
  for (const auto& h : est.hat_h_g) st.g.push_back(make(h, sigma2_g));
  st.g2l.reserve(est.hat_h_g2l.size());
  for (const auto& h : est.hat_h_g2l) st.g2l.push_back(make(h, sigma2_g));
  st.l.resize(est.hat_h_l.size());
  for (size_t m = 0; m < est.hat_h_l.size(); ++m)
    for (const auto& h : est.hat_h_l[m]) st.l[m].push_back(make(h, sigma2_l));
  st.l2g.resize(est.hat_h_l2g.size());
  for (size_t m = 0; m < est.hat_h_l2g.size(); ++m)
    for (const auto& h : est.hat_h_l2g[m]) st.l2g[m].push_back(make(h, sigma2_l));
  return st;
}

VectorXcd realize_phase_error(const VectorXcd& hat, double sigma2, Rng& rng) {
  if (sigma2 < 0) throw std::invalid_argument("sigma2 must be >= 0");
  if (sigma2 == 0) return hat;
  std::normal_distribution<double> n(0.0, std::sqrt(sigma2));
  VectorXcd h(hat.size());
  for (int i = 0; i < hat.size(); ++i) h(i) = hat(i) * std::polar(1.0, -n(rng));
  return h;
}

}  // namespace satnet
