#include "satnet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "satnet/geometry.hpp"

namespace satnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool known_variable(const std::string& v) {
  return v.empty() || v == "P_l_dB" || v == "P_g_dB" || v == "K" || v == "M" ||
         v == "sigma_e_deg";
}

/// Distribute K users over M groups as evenly as possible.
std::vector<int> even_groups(int K, int M) {
  std::vector<int> g(M, K / M);
  for (int i = 0; i < K % M; ++i) ++g[i];
  return g;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  if (!known_variable(variable))
    throw std::invalid_argument("unknown sweep variable: " + variable);
  if (!variable.empty() && values.empty())
    throw std::invalid_argument("empty sweep grid");
  if (realizations < 1) throw std::invalid_argument("realizations < 1");
  if (schemes.empty()) throw std::invalid_argument("no schemes selected");
}

std::string RunRecord::id() const {
  std::ostringstream os;
  if (!variable.empty()) os << variable << "_" << fmt(value) << "_";
  os << to_string(scheme) << "_r" << realization;
  return os.str();
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 const std::string& variable, double value) {
  ScenarioConfig c = base;
  if (variable.empty()) return c;
  if (variable == "P_l_dB") {
    c.P_l = std::pow(10.0, value / 10.0);
  } else if (variable == "P_g_dB") {
    c.P_g = std::pow(10.0, value / 10.0);
  } else if (variable == "K") {
    c.K = static_cast<int>(std::lround(value));
    c.group_sizes = even_groups(c.K, c.M);
  } else if (variable == "M") {
    c.M = static_cast<int>(std::lround(value));
    c.group_sizes = even_groups(c.K, c.M);
  } else if (variable == "sigma_e_deg") {
    // Variance in squared degrees, converted to rad^2.
    const double s2 = value * (kPi / 180.0) * (kPi / 180.0);
    c.sigma2_e_g = s2;
    c.sigma2_e_l = s2;
  } else {
    throw std::invalid_argument("unknown sweep variable: " + variable);
  }
  c.validate();
  return c;
}

std::uint64_t realization_seed(std::uint64_t base_seed, int r) {
  // splitmix64 of (base_seed, r): well-separated streams per realization.
  std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (r + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SweepResult run_sweep(const SweepSpec& spec, bool parallel) {
  spec.validate();
  const std::vector<double> grid =
      spec.variable.empty() ? std::vector<double>{0.0} : spec.values;
  const int G = static_cast<int>(grid.size());
  const int S = static_cast<int>(spec.schemes.size());
  const int R = spec.realizations;

  SweepResult result;
  result.runs.resize(static_cast<size_t>(G) * S * R);

  // One task per (grid point, realization): the channel draw is made once
  // and shared by every scheme, so per-seed scheme comparisons are fair.
  const int n_tasks = G * R;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int task = 0; task < n_tasks; ++task) {
    const int g = task / R;
    const int r = task % R;
    const ScenarioConfig point =
        apply_sweep_value(spec.base, spec.variable, grid[g]);
    const std::uint64_t seed = realization_seed(spec.seed, r);

    for (int s = 0; s < S; ++s) {
      RunRecord& rec = result.runs[(static_cast<size_t>(g) * S + s) * R + r];
      rec.variable = spec.variable;
      rec.value = grid[g];
      rec.scheme = spec.schemes[s];
      rec.realization = r;
      rec.seed = seed;
      ScenarioConfig cfg = point;
      cfg.scheme = spec.schemes[s];
      cfg.seed = seed;
      try {
        Rng rng(seed);
        const LinkGeometry geo = sample_geometry(cfg, rng);
        const ChannelEstimate est = sample_channels(geo, cfg, rng);
        SCAResult res = solve_mmf(est, cfg);
        rec.mmf = res.mmf;
        rec.converged = res.converged;
        rec.iterations = res.iterations;
        rec.trace = std::move(res.trace);
        rec.report = std::move(res.report);
        rec.message = res.message;
        rec.ok = res.message.empty() && std::isfinite(res.mmf);
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.message = e.what();
      }
    }
  }

  for (int g = 0; g < G; ++g)
    for (int s = 0; s < S; ++s) {
      SweepCell cell;
      cell.variable = spec.variable;
      cell.value = grid[g];
      cell.scheme = spec.schemes[s];
      double sum = 0.0, iter_sum = 0.0;
      for (int r = 0; r < R; ++r) {
        const RunRecord& rec =
            result.runs[(static_cast<size_t>(g) * S + s) * R + r];
        if (!rec.ok) {
          ++cell.n_fail;
          continue;
        }
        ++cell.n_ok;
        cell.mmf_values.push_back(rec.mmf);
        sum += rec.mmf;
        iter_sum += rec.iterations;
      }
      if (cell.n_ok > 0) {
        cell.mean_mmf = sum / cell.n_ok;
        cell.mean_iters = iter_sum / cell.n_ok;
        double ss = 0.0;
        for (double v : cell.mmf_values)
          ss += (v - cell.mean_mmf) * (v - cell.mean_mmf);
        if (cell.n_ok > 1)
          cell.stderr_mmf = std::sqrt(ss / (cell.n_ok - 1) / cell.n_ok);
      }
      result.cells.push_back(std::move(cell));
    }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "sweep_var,value,scheme,mean_mmf,stderr,n_ok,n_fail,mean_iters\n";
  for (const SweepCell& c : result.cells)
    os << (c.variable.empty() ? "none" : c.variable) << "," << fmt(c.value)
       << "," << to_string(c.scheme) << "," << fmt(c.mean_mmf) << ","
       << fmt(c.stderr_mmf) << "," << c.n_ok << "," << c.n_fail << ","
       << fmt(c.mean_iters) << "\n";
  return os.str();
}

void write_csv(const SweepResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << sweep_csv(result);
}

void emit_plot(const SweepResult& result, const std::string& path) {
  const int W = 640, H = 480, ml = 70, mr = 20, mt = 30, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
  for (const SweepCell& c : result.cells) {
    xmin = std::min(xmin, c.value);
    xmax = std::max(xmax, c.value);
    ymax = std::max(ymax, c.mean_mmf + 2 * c.stderr_mmf);
  }
  if (result.cells.empty()) throw std::runtime_error("empty sweep result");
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.05;
  auto X = [&](double v) {
    return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto Y = [&](double v) { return H - mb - v / ymax * (H - mt - mb); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = ymax * i / 5.0;
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y(v) + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    const double u = xmin + (xmax - xmin) * i / 5.0;
    os << "<text x=\"" << X(u) << "\" y=\"" << H - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(u)
       << "</text>\n";
  }
  const std::string& var = result.cells.front().variable;
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
     << "\" font-size=\"13\" text-anchor=\"middle\">"
     << (var.empty() ? "grid" : var) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (mt + H - mb) / 2 << ")\">mean MMF (bits/s/Hz)</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::vector<Scheme> schemes;
  for (const SweepCell& c : result.cells)
    if (std::find(schemes.begin(), schemes.end(), c.scheme) == schemes.end())
      schemes.push_back(c.scheme);
  for (size_t s = 0; s < schemes.size(); ++s) {
    const char* col = colors[s % 4];
    std::ostringstream pts;
    for (const SweepCell& c : result.cells) {
      if (c.scheme != schemes[s]) continue;
      pts << X(c.value) << "," << Y(c.mean_mmf) << " ";
      os << "<line x1=\"" << X(c.value) << "\" y1=\""
         << Y(c.mean_mmf - c.stderr_mmf) << "\" x2=\"" << X(c.value)
         << "\" y2=\"" << Y(c.mean_mmf + c.stderr_mmf) << "\" stroke=\"" << col
         << "\"/>\n";
      os << "<circle cx=\"" << X(c.value) << "\" cy=\"" << Y(c.mean_mmf)
         << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    }
    os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
       << col << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << W - mr - 10 << "\" y=\"" << mt + 16 * (s + 1)
       << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << col << "\">"
       << to_string(schemes[s]) << "</text>\n";
  }
  os << "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << os.str();
}

}  // namespace satnet
