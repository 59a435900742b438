#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satnet/sca.hpp"
#include "satnet/scenario.hpp"

namespace satnet {

/// Batch experiment description: a grid over one scenario variable, a number
/// of channel realizations per grid point, and the schemes to compare. An
/// empty variable name means a single grid point at the base config.
struct SweepSpec {
  std::string variable;          // "", P_l_dB, P_g_dB, K, M, sigma_e_deg
  std::vector<double> values;    // grid; ignored when variable is empty
  int realizations = 20;
  std::vector<Scheme> schemes{Scheme::DRSMA, Scheme::M_RSMA, Scheme::M_SDMA};
  ScenarioConfig base;
  std::uint64_t seed = 1;

  void validate() const;
};

/// One optimizer run inside a sweep (grid point x scheme x realization).
struct RunRecord {
  std::string variable;
  double value = 0.0;
  Scheme scheme = Scheme::DRSMA;
  int realization = 0;
  std::uint64_t seed = 0;
  double mmf = 0.0;
  bool converged = false;
  bool ok = false;  // solver completed without failure
  int iterations = 0;
  SCATrace trace;
  RateReport report;
  std::string message;

  std::string id() const;  // stable identifier for trace file names
};

/// Aggregate over realizations for one grid point x scheme.
struct SweepCell {
  std::string variable;
  double value = 0.0;
  Scheme scheme = Scheme::DRSMA;
  std::vector<double> mmf_values;  // successful runs, realization order
  double mean_mmf = 0.0;
  double stderr_mmf = 0.0;
  int n_ok = 0;
  int n_fail = 0;
  double mean_iters = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;    // grid-major, scheme-minor order
  std::vector<RunRecord> runs;     // same order, realization-minor
};

/// Returns the base config with the sweep variable applied. P_*_dB set the
/// linear budgets from dB; K and M redistribute users evenly across groups;
/// sigma_e_deg is a phase-error variance in squared degrees applied to both
/// link families.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 const std::string& variable, double value);

/// Seed of realization r; all schemes at one (grid point, realization) share
/// it, hence bit-identical channels.
std::uint64_t realization_seed(std::uint64_t base_seed, int r);

/// Runs the whole grid. Tasks are independent and run in parallel when
/// OpenMP is enabled and `parallel` is true; the output order is
/// deterministic either way. Solver failures are recorded, never thrown.
SweepResult run_sweep(const SweepSpec& spec, bool parallel = true);

/// CSV columns: sweep_var,value,scheme,mean_mmf,stderr,n_ok,n_fail,mean_iters.
std::string sweep_csv(const SweepResult& result);
void write_csv(const SweepResult& result, const std::string& path);

/// Mean-MMF-vs-grid line plot with error bars, one polyline per scheme,
/// written as a standalone SVG file.
void emit_plot(const SweepResult& result, const std::string& path);

}  // namespace satnet
