#include "satnet/geometry.hpp"

#include <cmath>

namespace satnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x, y;
};

Vec2 uniform_in_disc(Vec2 center, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r = radius * std::sqrt(unit(rng));
  double phi = 2.0 * kPi * unit(rng);
  return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

}  // namespace

LinkGeometry sample_geometry(const ScenarioConfig& config, Rng& rng) {
  config.validate();
  const double geo_radius =
      config.geo_height_m * std::tan(config.theta3dB_geo_deg * kPi / 180.0);
  const double leo_radius =
      config.leo_height_m * std::tan(config.theta3dB_leo_deg * kPi / 180.0);

  // GEO beam center at the origin; LEO nadir points evenly spaced on a
  // circle of leo_center_factor GEO coverage radii, controlling how deep
  // the LEO cells sit inside the GEO beam.
  std::vector<Vec2> leo_center(config.M);
  for (int m = 0; m < config.M; ++m) {
    double phi = config.M > 0 ? 2.0 * kPi * m / config.M : 0.0;
    double rho = config.leo_center_factor * geo_radius;
    leo_center[m] = {rho * std::cos(phi), rho * std::sin(phi)};
  }

  const int total = config.N + config.K;
  std::vector<Vec2> ut(total);
  for (int n = 0; n < config.N; ++n) ut[n] = uniform_in_disc({0, 0}, geo_radius, rng);
  int i = config.N;
  for (int m = 0; m < config.M; ++m)
    for (int k = 0; k < config.group_sizes[m]; ++k)
      ut[i++] = uniform_in_disc(leo_center[m], leo_radius, rng);

  LinkGeometry g;
  g.geo_dist.resize(total);
  g.geo_angle.resize(total);
  g.leo_dist.assign(config.M, std::vector<double>(total));
  g.leo_angle.assign(config.M, std::vector<double>(total));
  for (int u = 0; u < total; ++u) {
    double off = std::hypot(ut[u].x, ut[u].y);
    g.geo_dist[u] = std::hypot(config.geo_height_m, off);
    g.geo_angle[u] = std::atan2(off, config.geo_height_m);
    for (int m = 0; m < config.M; ++m) {
      double dx = ut[u].x - leo_center[m].x;
      double dy = ut[u].y - leo_center[m].y;
      double doff = std::hypot(dx, dy);
      g.leo_dist[m][u] = std::hypot(config.leo_height_m, doff);
      g.leo_angle[m][u] = std::atan2(doff, config.leo_height_m);
    }
  }
  return g;
}

}  // namespace satnet
