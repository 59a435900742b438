#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "satnet/sweep.hpp"

using namespace satnet;

namespace {

ScenarioConfig tiny_config() {
  ScenarioConfig c;
  c.M = 1;
  c.N = 2;
  c.K = 2;
  c.group_sizes = {2};
  c.N_tg = 2;
  c.N_tl = 2;
  return c;
}

SweepResult fake_result() {
  SweepResult r;
  for (double v : {10.0, 12.0, 14.0})
    for (Scheme s : {Scheme::DRSMA, Scheme::M_SDMA}) {
      SweepCell c;
      c.variable = "P_l_dB";
      c.value = v;
      c.scheme = s;
      c.mmf_values = {1.0, 1.5};
      c.mean_mmf = 1.25;
      c.stderr_mmf = 0.25;
      c.n_ok = 2;
      c.n_fail = 0;
      c.mean_iters = 42.5;
      r.cells.push_back(c);
    }
  return r;
}

}  // namespace

TEST_CASE("sweep variable application") {
  const ScenarioConfig base = tiny_config();
  SUBCASE("power in dB") {
    CHECK(apply_sweep_value(base, "P_l_dB", 20.0).P_l ==
          doctest::Approx(100.0));
    CHECK(apply_sweep_value(base, "P_g_dB", 0.0).P_g == doctest::Approx(1.0));
  }
  SUBCASE("user counts rebalance groups") {
    const ScenarioConfig k = apply_sweep_value(base, "K", 5.0);
    CHECK(k.K == 5);
    CHECK(k.group_sizes == std::vector<int>{5});
    ScenarioConfig two = base;
    two.M = 2;
    two.group_sizes = {1, 1};
    const ScenarioConfig k2 = apply_sweep_value(two, "K", 5.0);
    CHECK(k2.group_sizes == std::vector<int>{3, 2});
    const ScenarioConfig m = apply_sweep_value(two, "M", 1.0);
    CHECK(m.group_sizes == std::vector<int>{2});
  }
  SUBCASE("phase error variance in squared degrees") {
    const double rad = 3.14159265358979323846 / 180.0;
    const ScenarioConfig s = apply_sweep_value(base, "sigma_e_deg", 25.0);
    CHECK(s.sigma2_e_g == doctest::Approx(25.0 * rad * rad));
    CHECK(s.sigma2_e_l == doctest::Approx(25.0 * rad * rad));
  }
  CHECK_THROWS(apply_sweep_value(base, "bogus", 1.0));
}

TEST_CASE("realization seeds are deterministic and distinct") {
  CHECK(realization_seed(1, 0) == realization_seed(1, 0));
  CHECK(realization_seed(1, 0) != realization_seed(1, 1));
  CHECK(realization_seed(1, 0) != realization_seed(2, 0));
}

TEST_CASE("spec validation") {
  SweepSpec s;
  s.base = tiny_config();
  CHECK_NOTHROW(s.validate());
  SweepSpec bad = s;
  bad.realizations = 0;
  CHECK_THROWS(bad.validate());
  bad = s;
  bad.variable = "bogus";
  bad.values = {1.0};
  CHECK_THROWS(bad.validate());
  bad = s;
  bad.variable = "K";
  CHECK_THROWS(bad.validate());  // empty grid
}

TEST_CASE("csv layout and parse-back") {
  const SweepResult r = fake_result();
  const std::string csv = sweep_csv(r);
  std::istringstream is(csv);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "sweep_var,value,scheme,mean_mmf,stderr,n_ok,n_fail,mean_iters");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    char var[32], scheme[32];
    double value, mean, se, iters;
    int ok, fail;
    REQUIRE(std::sscanf(line.c_str(), "%31[^,],%lf,%31[^,],%lf,%lf,%d,%d,%lf",
                        var, &value, scheme, &mean, &se, &ok, &fail,
                        &iters) == 8);
    CHECK(mean == 1.25);
    CHECK(se == 0.25);
    CHECK(fail == 0);
  }
  CHECK(rows == 6);  // 3 grid points x 2 schemes
}

TEST_CASE("plot file is written") {
  const std::string path = "test_plot_out.svg";
  emit_plot(fake_result(), path);
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("<svg") != std::string::npos);
  CHECK(ss.str().find("polyline") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("single-run sweep wraps one result") {
  SweepSpec s;
  s.base = tiny_config();
  s.base.seed = 9;
  s.seed = 9;
  s.realizations = 1;
  s.schemes = {Scheme::M_SDMA};
  const SweepResult r = run_sweep(s);
  REQUIRE(r.cells.size() == 1);
  REQUIRE(r.runs.size() == 1);
  CHECK(r.cells[0].n_ok == 1);
  CHECK(r.cells[0].n_fail == 0);
  CHECK(r.cells[0].mean_mmf == doctest::Approx(r.runs[0].mmf));
  CHECK(r.runs[0].trace.iters.size() > 0);
  CHECK(r.runs[0].id() == "M_SDMA_r0");
}

TEST_CASE("sweep determinism and serial/parallel equivalence") {
  SweepSpec s;
  s.base = tiny_config();
  s.seed = 4;
  s.realizations = 3;
  s.schemes = {Scheme::M_SDMA, Scheme::M_RSMA};
  s.variable = "P_l_dB";
  s.values = {5.0, 10.0};
  const SweepResult a = run_sweep(s, true);
  const SweepResult b = run_sweep(s, false);
  CHECK(sweep_csv(a) == sweep_csv(b));
  const SweepResult c = run_sweep(s, true);
  CHECK(sweep_csv(a) == sweep_csv(c));
  // shared channels: scheme nesting per realization
  const int R = s.realizations;
  for (int g = 0; g < 2; ++g)
    for (int r = 0; r < R; ++r) {
      const RunRecord& sdma = a.runs[(g * 2 + 0) * R + r];
      const RunRecord& mrsma = a.runs[(g * 2 + 1) * R + r];
      CHECK(sdma.seed == mrsma.seed);
      CHECK(mrsma.mmf >= sdma.mmf - 1e-3);
    }
}
