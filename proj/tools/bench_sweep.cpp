// Compares serial and parallel execution of one desk-scale sweep point.
#include <chrono>
#include <cstdio>

#include "satnet/sweep.hpp"

using namespace satnet;

namespace {

double time_run(const SweepSpec& spec, bool parallel, double* mean_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult r = run_sweep(spec, parallel);
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  *mean_out = r.cells.front().mean_mmf;
  return dt;
}

}  // namespace

int main(int argc, char** argv) {
  SweepSpec spec;
  spec.realizations = argc > 1 ? std::atoi(argv[1]) : 8;
  spec.schemes = {Scheme::DRSMA};

  double mean_par = 0.0, mean_ser = 0.0;
  const double t_par = time_run(spec, true, &mean_par);
  const double t_ser = time_run(spec, false, &mean_ser);

  std::printf("realizations: %d\n", spec.realizations);
  std::printf("parallel: %.2f s (mean mmf %.6f)\n", t_par, mean_par);
  std::printf("serial:   %.2f s (mean mmf %.6f)\n", t_ser, mean_ser);
  std::printf("speedup:  %.2fx\n", t_ser / t_par);
  if (mean_par != mean_ser) {
    std::printf("MISMATCH: serial and parallel results differ\n");
    return 1;
  }
  return 0;
}
