#include "satnet/scenario.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace satnet {

Scheme scheme_from_string(const std::string& s) {
  if (s == "DRSMA" || s == "D-RSMA") return Scheme::DRSMA;
  if (s == "M_RSMA" || s == "M-RSMA") return Scheme::M_RSMA;
  if (s == "M_SDMA" || s == "M-SDMA") return Scheme::M_SDMA;
  throw std::invalid_argument("unknown scheme: " + s);
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::DRSMA: return "DRSMA";
    case Scheme::M_RSMA: return "M_RSMA";
    case Scheme::M_SDMA: return "M_SDMA";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (M < 0 || N < 1 || K < 0) throw std::invalid_argument("need N >= 1, M >= 0, K >= 0");
  if (static_cast<int>(group_sizes.size()) != M)
    throw std::invalid_argument("group_sizes must have M entries");
  int sum = std::accumulate(group_sizes.begin(), group_sizes.end(), 0);
  if (sum != K) throw std::invalid_argument("sum(group_sizes) must equal K");
  for (int g : group_sizes)
    if (g < 0) throw std::invalid_argument("group sizes must be >= 0");
  if (N_tg < 1 || N_tl < 1) throw std::invalid_argument("antenna counts must be >= 1");
  if (P_g <= 0 || P_l <= 0) throw std::invalid_argument("power budgets must be positive");
  if (sigma2_e_g < 0 || sigma2_e_l < 0) throw std::invalid_argument("phase error variance must be >= 0");
  if (tau <= 0) throw std::invalid_argument("tau must be positive");
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
}

int ScenarioConfig::group_of(int k) const {
  int off = 0;
  for (int m = 0; m < M; ++m) {
    off += group_sizes[m];
    if (k < off) return m;
  }
  throw std::out_of_range("LU index out of range");
}

int ScenarioConfig::group_offset(int m) const {
  int off = 0;
  for (int j = 0; j < m; ++j) off += group_sizes[j];
  return off;
}

namespace {

template <typename T>
void get_if(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ScenarioConfig c;
  get_if(j, "M", c.M);
  get_if(j, "N", c.N);
  get_if(j, "K", c.K);
  get_if(j, "group_sizes", c.group_sizes);
  get_if(j, "N_tg", c.N_tg);
  get_if(j, "N_tl", c.N_tl);
  get_if(j, "P_g", c.P_g);
  get_if(j, "P_l", c.P_l);
  get_if(j, "sigma2_e_g", c.sigma2_e_g);
  get_if(j, "sigma2_e_l", c.sigma2_e_l);
  get_if(j, "carrier_freq", c.carrier_freq);
  get_if(j, "bandwidth", c.bandwidth);
  get_if(j, "ut_gain_dBi", c.ut_gain_dBi);
  get_if(j, "geo_gain_max_dBi", c.geo_gain_max_dBi);
  get_if(j, "leo_gain_dBi", c.leo_gain_dBi);
  get_if(j, "geo_height_m", c.geo_height_m);
  get_if(j, "leo_height_m", c.leo_height_m);
  get_if(j, "theta3dB_geo_deg", c.theta3dB_geo_deg);
  get_if(j, "theta3dB_leo_deg", c.theta3dB_leo_deg);
  get_if(j, "leo_center_factor", c.leo_center_factor);
  get_if(j, "rician_factor_dB", c.rician_factor_dB);
  get_if(j, "noise_temp_K", c.noise_temp_K);
  get_if(j, "rain_mu_dB", c.rain_mu_dB);
  get_if(j, "rain_sigma_dB", c.rain_sigma_dB);
  get_if(j, "rain_per_feed", c.rain_per_feed);
  get_if(j, "tau", c.tau);
  get_if(j, "beta", c.beta);
  get_if(j, "max_sca_iters", c.max_sca_iters);
  get_if(j, "rank_gap_tol", c.rank_gap_tol);
  get_if(j, "randomization_count", c.randomization_count);
  get_if(j, "solver_eps", c.solver_eps);
  get_if(j, "solver_max_iters", c.solver_max_iters);
  get_if(j, "seed", c.seed);
  if (j.contains("scheme")) c.scheme = scheme_from_string(j.at("scheme").get<std::string>());
  // A config that changes K but omits group_sizes gets an even split.
  if (!j.contains("group_sizes") && (j.contains("K") || j.contains("M"))) {
    c.group_sizes.assign(c.M, 0);
    for (int k = 0; k < c.K; ++k) c.group_sizes[k % std::max(c.M, 1)]++;
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json_text() const {
  nlohmann::json j{
      {"M", M}, {"N", N}, {"K", K}, {"group_sizes", group_sizes},
      {"N_tg", N_tg}, {"N_tl", N_tl}, {"P_g", P_g}, {"P_l", P_l},
      {"sigma2_e_g", sigma2_e_g}, {"sigma2_e_l", sigma2_e_l},
      {"carrier_freq", carrier_freq}, {"bandwidth", bandwidth},
      {"ut_gain_dBi", ut_gain_dBi}, {"geo_gain_max_dBi", geo_gain_max_dBi},
      {"leo_gain_dBi", leo_gain_dBi}, {"geo_height_m", geo_height_m},
      {"leo_height_m", leo_height_m}, {"theta3dB_geo_deg", theta3dB_geo_deg},
      {"theta3dB_leo_deg", theta3dB_leo_deg},
      {"leo_center_factor", leo_center_factor},
      {"rician_factor_dB", rician_factor_dB},
      {"noise_temp_K", noise_temp_K}, {"rain_mu_dB", rain_mu_dB},
      {"rain_sigma_dB", rain_sigma_dB}, {"rain_per_feed", rain_per_feed},
      {"tau", tau}, {"beta", beta}, {"max_sca_iters", max_sca_iters},
      {"rank_gap_tol", rank_gap_tol}, {"randomization_count", randomization_count},
      {"solver_eps", solver_eps}, {"solver_max_iters", solver_max_iters},
      {"scheme", to_string(scheme)}, {"seed", seed}};
  return j.dump(2);
}

}  // namespace satnet
