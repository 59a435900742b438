#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "satnet/channel.hpp"
#include "satnet/geometry.hpp"

using namespace satnet;

namespace {

constexpr double kPi = 3.14159265358979323846;

VectorXcd random_unit(int d, Rng& rng) {
  std::normal_distribution<double> n;
  VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = std::complex<double>(n(rng), n(rng));
  return v / v.norm();
}

}  // namespace

TEST_CASE("beam gain center and -3 dB point") {
  const double t3 = 0.4412 * kPi / 180.0;
  const double gmax = std::pow(10.0, 5.85);
  CHECK(geo_beam_gain(0.0, t3, gmax) == doctest::Approx(gmax));
  CHECK(geo_beam_gain(t3, t3, gmax) ==
        doctest::Approx(0.5 * gmax).epsilon(0.01));
  // linear in gmax
  CHECK(geo_beam_gain(t3, t3, 2.0 * gmax) ==
        doctest::Approx(2.0 * geo_beam_gain(t3, t3, gmax)));
}

TEST_CASE("beam gain continuous at zero and monotone to the -3 dB angle") {
  const double t3 = 4.4127 * kPi / 180.0;
  CHECK(geo_beam_gain(1e-9, t3, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  double prev = geo_beam_gain(0.0, t3, 1.0);
  for (int i = 1; i <= 200; ++i) {
    const double g = geo_beam_gain(t3 * i / 200.0, t3, 1.0);
    CHECK(g <= prev + 1e-12);
    prev = g;
  }
}

TEST_CASE("geometry determinism and slant-distance bounds") {
  ScenarioConfig c;
  Rng r1(42), r2(42);
  const LinkGeometry a = sample_geometry(c, r1);
  const LinkGeometry b = sample_geometry(c, r2);
  REQUIRE(a.geo_dist.size() == static_cast<size_t>(c.N + c.K));
  for (size_t i = 0; i < a.geo_dist.size(); ++i) {
    CHECK(a.geo_dist[i] == b.geo_dist[i]);
    CHECK(a.geo_angle[i] == b.geo_angle[i]);
    CHECK(a.geo_dist[i] >= c.geo_height_m);
    CHECK(a.geo_angle[i] >= 0.0);
    CHECK(a.geo_angle[i] < kPi / 2.0);
  }
  for (int m = 0; m < c.M; ++m)
    for (int i = 0; i < c.N + c.K; ++i)
      CHECK(a.leo_dist[m][i] >= c.leo_height_m);
}

TEST_CASE("GEO entry magnitude matches the scalar link budget") {
  ScenarioConfig c;
  c.N = 1;
  c.K = 0;
  c.M = 0;
  c.group_sizes.clear();
  c.rain_sigma_dB = 1e-12;  // pins the fade at chi_dB = exp(mu)
  LinkGeometry geo;
  geo.geo_dist = {c.geo_height_m};
  geo.geo_angle = {0.0};

  ChannelEstimate est;
  Rng rng(5);
  sample_geo_channel(geo, c, rng, est);

  const double lambda = 299792458.0 / c.carrier_freq;
  const double noise =
      std::sqrt(1.380649e-23 * c.noise_temp_K * c.bandwidth);
  const double gain = std::pow(10.0, c.geo_gain_max_dBi / 10.0) *
                      std::pow(10.0, c.ut_gain_dBi / 10.0);
  const double chi = std::pow(10.0, std::exp(c.rain_mu_dB) / 10.0);
  const double amp = std::sqrt(gain) /
                     (4.0 * kPi * c.geo_height_m / lambda * noise) /
                     std::sqrt(chi);
  for (int f = 0; f < c.N_tg; ++f)
    CHECK(std::abs(est.hat_h_g[0](f)) == doctest::Approx(amp).epsilon(1e-6));

  // 1/d dependence: doubling the distance halves the magnitude
  geo.geo_dist = {2.0 * c.geo_height_m};
  ChannelEstimate est2;
  Rng rng2(5);
  sample_geo_channel(geo, c, rng2, est2);
  CHECK(std::abs(est2.hat_h_g[0](0)) ==
        doctest::Approx(0.5 * std::abs(est.hat_h_g[0](0))).epsilon(1e-6));
}

TEST_CASE("LEO Rician power normalization") {
  ScenarioConfig c;
  Rng grng(3);
  const LinkGeometry geo = sample_geometry(c, grng);

  // At a huge Rician factor the channel power is deterministic: two draws
  // agree entrywise in magnitude.
  ScenarioConfig los = c;
  los.rician_factor_dB = 200.0;
  ChannelEstimate a, b;
  Rng r1(9), r2(10);
  sample_leo_channel(geo, los, r1, a);
  sample_leo_channel(geo, los, r2, b);
  const double p_los = std::norm(a.hat_h_l[0][0](0));
  CHECK(std::norm(b.hat_h_l[0][0](0)) ==
        doctest::Approx(p_los).epsilon(1e-6));

  // At the default factor, the Monte Carlo mean power matches the same
  // link-budget value E{|g|^2} = gamma.
  const int draws = 20000;
  double acc = 0.0;
  Rng r3(11);
  for (int i = 0; i < draws; ++i) {
    ChannelEstimate e;
    sample_leo_channel(geo, c, r3, e);
    acc += std::norm(e.hat_h_l[0][0](0));
  }
  CHECK(acc / draws == doctest::Approx(p_los).epsilon(0.05));
}

TEST_CASE("phase error correlation closed forms") {
  SUBCASE("perfect CSI") {
    const PhaseCorrelation pc = phase_error_correlation(0.0, 3);
    CHECK((pc.X - MatrixXd::Ones(3, 3)).norm() == doctest::Approx(0.0));
    CHECK(pc.X_res.norm() == doctest::Approx(0.0));
  }
  SUBCASE("entries and PSD") {
    const double s2 = 0.3;
    const double m = std::exp(-s2 / 2.0);
    const PhaseCorrelation pc = phase_error_correlation(s2, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) {
          CHECK(pc.X(i, j) == doctest::Approx(1.0));
          CHECK(pc.X_res(i, j) == doctest::Approx(2.0 - 2.0 * m));
        } else {
          CHECK(pc.X(i, j) == doctest::Approx(std::exp(-s2)));
          CHECK(pc.X_res(i, j) == doctest::Approx((1.0 - m) * (1.0 - m)));
        }
        // entrywise relation X_res = X - 2m + 1 off the diagonal and on it
        CHECK(pc.X_res(i, j) ==
              doctest::Approx(pc.X(i, j) - 2.0 * m + 1.0).epsilon(1e-12));
      }
    Eigen::SelfAdjointEigenSolver<MatrixXd> ex(pc.X), er(pc.X_res);
    CHECK(ex.eigenvalues().minCoeff() >= -1e-10);
    CHECK(er.eigenvalues().minCoeff() >= -1e-10);
  }
  SUBCASE("Monte Carlo at 5 degrees") {
    const double s2 = std::pow(5.0 * kPi / 180.0, 2.0);
    const PhaseCorrelation pc = phase_error_correlation(s2, 4);
    Rng rng(77);
    std::normal_distribution<double> n(0.0, std::sqrt(s2));
    const int draws = 1000000;
    std::complex<double> acc_x = 0.0, acc_r = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double a = n(rng), b = n(rng);
      const std::complex<double> pa = std::polar(1.0, -a);
      const std::complex<double> pb = std::polar(1.0, -b);
      acc_x += pa * std::conj(pb);
      acc_r += (pa - 1.0) * std::conj(pb - 1.0);
    }
    CHECK(std::abs(acc_x / double(draws) - pc.X(0, 1)) < 1e-2);
    CHECK(std::abs(acc_r / double(draws) - pc.X_res(0, 1)) < 1e-2);
  }
  CHECK_THROWS(phase_error_correlation(-1.0, 2));
}

TEST_CASE("channel statistics properties") {
  Rng rng(12);
  ChannelEstimate est;
  est.hat_h_g = {2.5 * random_unit(4, rng)};
  est.hat_h_g2l = {};

  SUBCASE("zero variance reduces to the outer product") {
    const ChannelStatistics st = channel_statistics(est, 0.0, 0.0);
    const MatrixXcd outer = est.hat_h_g[0] * est.hat_h_g[0].adjoint();
    CHECK((st.g[0].H - outer).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(st.g[0].H_res.norm() == doctest::Approx(0.0));
  }
  SUBCASE("trace identity and Hermitian PSD") {
    const ChannelStatistics st = channel_statistics(est, 0.21, 0.0);
    CHECK(st.g[0].H.trace().real() ==
          doctest::Approx(est.hat_h_g[0].squaredNorm()).epsilon(1e-12));
    CHECK((st.g[0].H - st.g[0].H.adjoint()).norm() < 1e-12);
    CHECK((st.g[0].H_res - st.g[0].H_res.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eh(st.g[0].H),
        er(st.g[0].H_res);
    CHECK(eh.eigenvalues().minCoeff() >= -1e-10);
    CHECK(er.eigenvalues().minCoeff() >= -1e-10);
  }
  SUBCASE("Monte Carlo second moment") {
    const double s2 = 0.05;
    const ChannelStatistics st = channel_statistics(est, s2, 0.0);
    const int draws = 100000;
    MatrixXcd acc = MatrixXcd::Zero(4, 4);
    Rng mc(13);
    for (int i = 0; i < draws; ++i) {
      const VectorXcd h = realize_phase_error(est.hat_h_g[0], s2, mc);
      acc += h * h.adjoint();
    }
    acc /= draws;
    // per-entry magnitude bounded by |h_i||h_j|; 3 standard errors with a
    // conservative unit-scale variance bound
    const double scale = est.hat_h_g[0].cwiseAbs().maxCoeff();
    const double tol = 3.0 * scale * scale / std::sqrt(double(draws));
    CHECK((acc - st.g[0].H).cwiseAbs().maxCoeff() < tol);
  }
}

TEST_CASE("phase error realization") {
  Rng rng(21);
  const VectorXcd hat = 1.7 * random_unit(5, rng);
  SUBCASE("zero variance is the identity") {
    CHECK((realize_phase_error(hat, 0.0, rng) - hat).norm() == 0.0);
  }
  SUBCASE("magnitudes preserved") {
    const VectorXcd h = realize_phase_error(hat, 0.4, rng);
    for (int i = 0; i < 5; ++i)
      CHECK(std::abs(h(i)) == doctest::Approx(std::abs(hat(i))).epsilon(1e-12));
  }
  SUBCASE("mean shrinks by exp(-sigma2/2)") {
    const double s2 = 0.2;
    VectorXcd acc = VectorXcd::Zero(5);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) acc += realize_phase_error(hat, s2, rng);
    acc /= draws;
    const VectorXcd expect = hat * std::exp(-s2 / 2.0);
    CHECK((acc - expect).norm() / expect.norm() < 0.01);
  }
}

TEST_CASE("channel sampling determinism") {
  ScenarioConfig c;
  Rng g1(8), g2(8);
  const LinkGeometry geo1 = sample_geometry(c, g1);
  const LinkGeometry geo2 = sample_geometry(c, g2);
  Rng r1(8), r2(8);
  const ChannelEstimate a = sample_channels(geo1, c, r1);
  const ChannelEstimate b = sample_channels(geo2, c, r2);
  for (int n = 0; n < c.N; ++n)
    CHECK((a.hat_h_g[n] - b.hat_h_g[n]).norm() == 0.0);
  for (int m = 0; m < c.M; ++m)
    for (int k = 0; k < c.K; ++k)
      CHECK((a.hat_h_l[m][k] - b.hat_h_l[m][k]).norm() == 0.0);
  // independent draws differ across UTs
  CHECK((a.hat_h_g[0] - a.hat_h_g[1]).norm() > 0.0);
}
