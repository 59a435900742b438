#pragma once

#include <random>
#include <vector>

#include "satnet/scenario.hpp"

namespace satnet {

using Rng = std::mt19937_64;

/// Slant distances and off-axis angles for every satellite -> UT link.
/// UTs are placed uniformly on planar coverage discs whose edges sit at
/// the 3 dB beam angle; beam centers are at the disc centers.
struct LinkGeometry {
  // GEO -> UT, index i in [0, N+K): GUs first, then LUs in global order.
  std::vector<double> geo_dist;    // m
  std::vector<double> geo_angle;   // rad, off GEO beam axis
  // LEO m -> UT i, [m][i], same UT ordering.
  std::vector<std::vector<double>> leo_dist;
  std::vector<std::vector<double>> leo_angle;
};

LinkGeometry sample_geometry(const ScenarioConfig& config, Rng& rng);

}  // namespace satnet
