// File formats: field snapshots (exact decimal round-trip), CSV diagnostics
// and measurement tables, and the flat key=value experiment config.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "nodalab/solver.hpp"

namespace nodalab {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- field snapshots ----------------------------------------------------------
//
// Header line `dim J t`, then one line `j1 [j2] re im` per retained mode with
// (j1, j2) lexicographically sorted. 17 significant digits round-trip doubles
// exactly.

inline std::string save_snapshot(const SpectralField& f, double t) {
  std::ostringstream out;
  out << f.dim() << ' ' << f.cutoff() << ' ' << fmt17(t) << '\n';
  const int J = f.cutoff();
  for (int j1 = -J; j1 <= J; ++j1) {
    if (f.dim() == 1) {
      const cplx c = f.at(j1);
      out << j1 << ' ' << fmt17(c.real()) << ' ' << fmt17(c.imag()) << '\n';
    } else {
      for (int j2 = -J; j2 <= J; ++j2) {
        const cplx c = f.at(j1, j2);
        out << j1 << ' ' << j2 << ' ' << fmt17(c.real()) << ' ' << fmt17(c.imag()) << '\n';
      }
    }
  }
  return out.str();
}

struct LoadedSnapshot {
  SpectralField field{1, 1};
  double t = 0.0;
};

inline LoadedSnapshot load_snapshot(const std::string& text) {
  std::istringstream in(text);
  int dim = 0, cutoff = 0;
  double t = 0.0;
  if (!(in >> dim >> cutoff >> t)) throw ConfigError("load_snapshot: bad header");
  LoadedSnapshot out{SpectralField(dim, cutoff), t};
  int j1 = 0, j2 = 0;
  double re = 0.0, im = 0.0;
  if (dim == 1) {
    while (in >> j1 >> re >> im) out.field.set(j1, cplx{re, im});
  } else {
    while (in >> j1 >> j2 >> re >> im) out.field.set(j1, j2, cplx{re, im});
  }
  if (out.field.hermitian_defect() > 1e-12 * std::fmax(1.0, out.field.max_coeff_abs()))
    throw ConfigError("load_snapshot: coefficients are not Hermitian-symmetric");
  return out;
}

// --- experiment configuration ---------------------------------------------------

struct ExperimentConfig {
  unsigned long long seed = 1;
  int dim = 1;
  int cutoff = 64;          // band of the evolved solution
  int coeff_cutoff = 8;     // band of the synthesized coefficients
  double beta = 1.0;
  double delta = 0.1;
  double margin = 2.0;
  double amplitude = 0.0;   // 0: pure heat
  double dt = 0.0;          // 0: choose from the accuracy constraint
  double t_min = 5e-3;
  double t_max = 0.36787944117144233;
  int points_per_decade = 8;
  int resolution = 256;     // 2D measurement grid
  int oversample = 16;      // 1D zero-count oversampling
  double split_t = 0.0;     // calibration split; 0: median of the grid
  double k_const = 1.0;     // observability constant K
  double m_const = 0.0;     // covering constant M; 0: bisect
  double c0_const = 2.718281828459045;
  double c3_const = 0.36;
  double horizon_c = 2.0;   // C in the horizon requirement t0 <= 1/(C M1^2)
  std::string outdir = "out";

  void validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("config: dim must be 1 or 2");
    if (cutoff < 1 || coeff_cutoff < 1) throw ConfigError("config: cutoffs must be >= 1");
    if (!(t_min > 0.0 && t_min < t_max)) throw ConfigError("config: need 0 < t_min < t_max");
    if (points_per_decade < 1) throw ConfigError("config: points_per_decade must be >= 1");
    if (oversample < 1) throw ConfigError("config: oversample must be >= 1");
  }
};

inline std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "seed=" << c.seed << '\n';
  out << "dim=" << c.dim << '\n';
  out << "cutoff=" << c.cutoff << '\n';
  out << "coeff_cutoff=" << c.coeff_cutoff << '\n';
  out << "beta=" << fmt17(c.beta) << '\n';
  out << "delta=" << fmt17(c.delta) << '\n';
  out << "margin=" << fmt17(c.margin) << '\n';
  out << "amplitude=" << fmt17(c.amplitude) << '\n';
  out << "dt=" << fmt17(c.dt) << '\n';
  out << "t_min=" << fmt17(c.t_min) << '\n';
  out << "t_max=" << fmt17(c.t_max) << '\n';
  out << "points_per_decade=" << c.points_per_decade << '\n';
  out << "resolution=" << c.resolution << '\n';
  out << "oversample=" << c.oversample << '\n';
  out << "split_t=" << fmt17(c.split_t) << '\n';
  out << "k_const=" << fmt17(c.k_const) << '\n';
  out << "m_const=" << fmt17(c.m_const) << '\n';
  out << "c0_const=" << fmt17(c.c0_const) << '\n';
  out << "c3_const=" << fmt17(c.c3_const) << '\n';
  out << "horizon_c=" << fmt17(c.horizon_c) << '\n';
  out << "outdir=" << c.outdir << '\n';
  return out.str();
}

inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config: expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "seed") c.seed = std::stoull(val);
    else if (key == "dim") c.dim = std::stoi(val);
    else if (key == "cutoff") c.cutoff = std::stoi(val);
    else if (key == "coeff_cutoff") c.coeff_cutoff = std::stoi(val);
    else if (key == "beta") c.beta = std::stod(val);
    else if (key == "delta") c.delta = std::stod(val);
    else if (key == "margin") c.margin = std::stod(val);
    else if (key == "amplitude") c.amplitude = std::stod(val);
    else if (key == "dt") c.dt = std::stod(val);
    else if (key == "t_min") c.t_min = std::stod(val);
    else if (key == "t_max") c.t_max = std::stod(val);
    else if (key == "points_per_decade") c.points_per_decade = std::stoi(val);
    else if (key == "resolution") c.resolution = std::stoi(val);
    else if (key == "oversample") c.oversample = std::stoi(val);
    else if (key == "split_t") c.split_t = std::stod(val);
    else if (key == "k_const") c.k_const = std::stod(val);
    else if (key == "m_const") c.m_const = std::stod(val);
    else if (key == "c0_const") c.c0_const = std::stod(val);
    else if (key == "c3_const") c.c3_const = std::stod(val);
    else if (key == "horizon_c") c.horizon_c = std::stod(val);
    else if (key == "outdir") c.outdir = val;
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return c;
}

// --- CSV writers -----------------------------------------------------------------

// Diagnostics: t,l2,qD,gevrey_<delta>_<beta>,...,config
inline std::string diagnostics_csv(const SolveRecord& rec, const std::string& config_hash) {
  std::ostringstream out;
  out << "t,l2,qD";
  for (const GevreyParams& p : rec.gevrey_radii) {
    char col[64];
    std::snprintf(col, sizeof(col), ",gevrey_%g_%g", p.delta, p.beta);
    out << col;
  }
  out << ",config\n";
  for (const Snapshot& s : rec.snapshots) {
    out << fmt17(s.t) << ',' << fmt17(s.l2) << ',' << fmt17(s.qD);
    for (std::size_t i = 0; i < rec.gevrey_radii.size(); ++i) {
      const double norm = s.gevrey_guard_exceeded[i] ? std::numeric_limits<double>::quiet_NaN()
                                                     : std::exp(s.gevrey_log_norm[i]);
      out << ',' << fmt17(norm);
    }
    out << ',' << config_hash << '\n';
  }
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("write_file: cannot open " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("read_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nodalab
