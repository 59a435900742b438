#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "satnet/sweep.hpp"

namespace fs = std::filesystem;
using namespace satnet;

namespace {

/// Parses "var=start:step:stop" into a SweepSpec grid.
void parse_sweep(const std::string& text, SweepSpec& spec) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw CLI::ValidationError("--sweep", "expected var=start:step:stop");
  spec.variable = text.substr(0, eq);
  const std::string grid = text.substr(eq + 1);
  const auto c1 = grid.find(':');
  const auto c2 = grid.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("--sweep", "expected var=start:step:stop");
  const double start = std::stod(grid.substr(0, c1));
  const double step = std::stod(grid.substr(c1 + 1, c2 - c1 - 1));
  const double stop = std::stod(grid.substr(c2 + 1));
  if (step <= 0.0) throw CLI::ValidationError("--sweep", "step must be > 0");
  spec.values.clear();
  for (double v = start; v <= stop + 1e-9 * std::abs(step); v += step)
    spec.values.push_back(v);
  if (spec.values.empty())
    throw CLI::ValidationError("--sweep", "empty grid");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale GEO+LEO rate-splitting beamforming experiments"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run an experiment sweep");
  std::string config_path, sweep_text, out_dir;
  std::vector<std::string> scheme_names;
  int realizations = 20;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int max_failures = 0;
  bool plot = true, serial = false, write_traces = true;
  run->add_option("--config", config_path, "Scenario config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--scheme", scheme_names,
                  "Scheme(s) to run: DRSMA, M_RSMA, M_SDMA (repeatable; "
                  "default all three)");
  run->add_option("--sweep", sweep_text,
                  "Sweep one variable: var=start:step:stop with var in "
                  "{P_l_dB, P_g_dB, K, M, sigma_e_deg}");
  run->add_option("--realizations", realizations,
                  "Channel realizations per grid point")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Base RNG seed (default from config)")
      ->each([&](const std::string&) { has_seed = true; });
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--max-failures", max_failures,
                  "Tolerated solver failures before a nonzero exit");
  run->add_flag("!--no-plot", plot, "Skip the SVG plot");
  run->add_flag("!--no-traces", write_traces, "Skip per-run trace files");
  run->add_flag("--serial", serial, "Disable parallel execution");

  CLI11_PARSE(app, argc, argv);

  try {
    SweepSpec spec;
    spec.base = ScenarioConfig::load(config_path);
    spec.realizations = realizations;
    spec.seed = has_seed ? seed : spec.base.seed;
    if (!scheme_names.empty()) {
      spec.schemes.clear();
      for (const std::string& s : scheme_names)
        spec.schemes.push_back(scheme_from_string(s));
    }
    if (!sweep_text.empty()) parse_sweep(sweep_text, spec);
    spec.validate();

    fs::create_directories(out_dir);
    const SweepResult result = run_sweep(spec, !serial);

    write_csv(result, (fs::path(out_dir) / "results.csv").string());
    if (write_traces)
      for (const RunRecord& rec : result.runs) {
        std::ofstream f(fs::path(out_dir) / ("trace_" + rec.id() + ".csv"),
                        std::ios::binary);
        f << rec.trace.csv();
      }
    if (plot)
      emit_plot(result, (fs::path(out_dir) / "plot.svg").string());

    int failures = 0;
    for (const SweepCell& c : result.cells) failures += c.n_fail;
    for (const SweepCell& c : result.cells)
      std::cout << (c.variable.empty() ? "none" : c.variable) << "="
                << c.value << " " << to_string(c.scheme)
                << ": mean_mmf=" << c.mean_mmf << " stderr=" << c.stderr_mmf
                << " n_ok=" << c.n_ok << " n_fail=" << c.n_fail << "\n";
    if (failures > max_failures) {
      std::cerr << failures << " solver failure(s) exceed the tolerated "
                << max_failures << "\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
