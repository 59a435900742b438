#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "satnet/geometry.hpp"
#include "satnet/mask.hpp"
#include "satnet/sca.hpp"

using namespace satnet;

TEST_CASE("scheme to mask mapping") {
  CHECK(mask_for(Scheme::DRSMA).geo_common);
  CHECK(mask_for(Scheme::DRSMA).sub_common);
  CHECK_FALSE(mask_for(Scheme::M_RSMA).geo_common);
  CHECK(mask_for(Scheme::M_RSMA).sub_common);
  CHECK_FALSE(mask_for(Scheme::M_SDMA).geo_common);
  CHECK_FALSE(mask_for(Scheme::M_SDMA).sub_common);
}

TEST_CASE("scheme name round trip") {
  for (Scheme s : {Scheme::DRSMA, Scheme::M_RSMA, Scheme::M_SDMA})
    CHECK(scheme_from_string(to_string(s)) == s);
  CHECK(scheme_from_string("D-RSMA") == Scheme::DRSMA);
  CHECK_THROWS(scheme_from_string("NOMA"));
}

TEST_CASE("masked initialization zeroes the disabled streams") {
  ScenarioConfig c;
  Rng rng(3);
  const LinkGeometry geo = sample_geometry(c, rng);
  const ChannelEstimate est = sample_channels(geo, c, rng);
  const ChannelStatistics st = channel_statistics(est, 0.0, 0.0);

  const InitState sdma = initialize(est, st, c, mask_for(Scheme::M_SDMA));
  CHECK(sdma.precoders.w_c.norm() == 0.0);
  for (int m = 0; m < c.M; ++m) CHECK(sdma.precoders.p_cm[m].norm() == 0.0);
  // the freed power goes to the remaining pool
  CHECK(sdma.precoders.w_d.squaredNorm() ==
        doctest::Approx(c.P_g).epsilon(1e-9));

  const InitState mrsma = initialize(est, st, c, mask_for(Scheme::M_RSMA));
  CHECK(mrsma.precoders.w_c.norm() == 0.0);
  for (int m = 0; m < c.M; ++m) CHECK(mrsma.precoders.p_cm[m].norm() > 0.0);
}

TEST_CASE("SDMA rate accounting uses private rates only") {
  ScenarioConfig c;
  c.M = 1;
  c.N = 2;
  c.K = 1;
  c.group_sizes = {1};
  c.N_tg = 2;
  c.N_tl = 2;
  c.scheme = Scheme::M_SDMA;
  c.seed = 5;
  Rng rng(c.seed);
  const LinkGeometry geo = sample_geometry(c, rng);
  const ChannelEstimate est = sample_channels(geo, c, rng);
  const SCAResult res = solve_mmf(est, c);
  REQUIRE(res.message.empty());
  // c_sup = c_sub = 0 under the mask, so the LU total is the private rate
  for (int k = 0; k < c.K; ++k) {
    CHECK(res.split.c_sup[k] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(res.split.c_sub[k] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(res.report.total_lu[k] ==
          doctest::Approx(res.report.R_p[k]).epsilon(1e-9));
  }
  // disabled covariates are pinned to zero
  CHECK(res.F.F_gc.trace().real() < 1e-6);
  CHECK(res.F.F_lcm[0].trace().real() < 1e-6);
}
