// Command-line front end: synthesize coefficient bundles, run solves and
// sweeps, measure nodal sets, certify line zero counts, evaluate bounds, fit
// scaling laws, and run the bundled verification suite.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "nodalab/reports.hpp"

namespace fs = std::filesystem;
using namespace nodalab;

namespace {

void add_config_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path) {
  cmd->add_option("-c,--config", config_path, "flat key=value config file");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--dim", cfg.dim, "spatial dimension (1 or 2)");
  cmd->add_option("--cutoff", cfg.cutoff, "solution band J");
  cmd->add_option("--coeff-cutoff", cfg.coeff_cutoff, "coefficient band");
  cmd->add_option("--beta", cfg.beta, "inverse Gevrey exponent in (0,1]");
  cmd->add_option("--delta", cfg.delta, "Gevrey radius");
  cmd->add_option("--margin", cfg.margin, "synthesis decay margin (> 1)");
  cmd->add_option("--amplitude", cfg.amplitude, "coefficient amplitude (0 = pure heat)");
  cmd->add_option("--dt", cfg.dt, "time step (0 = automatic)");
  cmd->add_option("--t-min", cfg.t_min, "first snapshot time");
  cmd->add_option("--t-max", cfg.t_max, "last snapshot time (<= e^-1)");
  cmd->add_option("--points-per-decade", cfg.points_per_decade, "snapshot density");
  cmd->add_option("--resolution", cfg.resolution, "2D measurement grid");
  cmd->add_option("--oversample", cfg.oversample, "1D zero-count oversampling");
  cmd->add_option("--split-t", cfg.split_t, "calibration split time (0 = median)");
  cmd->add_option("--k-const", cfg.k_const, "observability constant K");
  cmd->add_option("--m-const", cfg.m_const, "covering constant M (0 = bisect)");
  cmd->add_option("--c0-const", cfg.c0_const, "base constant C0");
  cmd->add_option("--c3-const", cfg.c3_const, "Stirling constant C3");
  cmd->add_option("--horizon-c", cfg.horizon_c, "horizon constant C in t0 <= 1/(C M1^2)");
  cmd->add_option("-o,--outdir", cfg.outdir, "output directory");
}

ExperimentConfig resolve_config(const CLI::App* cmd, ExperimentConfig cli_values,
                                const std::string& config_path) {
  if (config_path.empty()) return cli_values;
  ExperimentConfig cfg = parse_config(read_file(config_path));
  // Explicit command-line options override file values.
  const ExperimentConfig defaults;
  if (cmd->count("--seed")) cfg.seed = cli_values.seed;
  if (cmd->count("--dim")) cfg.dim = cli_values.dim;
  if (cmd->count("--cutoff")) cfg.cutoff = cli_values.cutoff;
  if (cmd->count("--coeff-cutoff")) cfg.coeff_cutoff = cli_values.coeff_cutoff;
  if (cmd->count("--beta")) cfg.beta = cli_values.beta;
  if (cmd->count("--delta")) cfg.delta = cli_values.delta;
  if (cmd->count("--margin")) cfg.margin = cli_values.margin;
  if (cmd->count("--amplitude")) cfg.amplitude = cli_values.amplitude;
  if (cmd->count("--dt")) cfg.dt = cli_values.dt;
  if (cmd->count("--t-min")) cfg.t_min = cli_values.t_min;
  if (cmd->count("--t-max")) cfg.t_max = cli_values.t_max;
  if (cmd->count("--points-per-decade")) cfg.points_per_decade = cli_values.points_per_decade;
  if (cmd->count("--resolution")) cfg.resolution = cli_values.resolution;
  if (cmd->count("--oversample")) cfg.oversample = cli_values.oversample;
  if (cmd->count("--split-t")) cfg.split_t = cli_values.split_t;
  if (cmd->count("--k-const")) cfg.k_const = cli_values.k_const;
  if (cmd->count("--m-const")) cfg.m_const = cli_values.m_const;
  if (cmd->count("--c0-const")) cfg.c0_const = cli_values.c0_const;
  if (cmd->count("--c3-const")) cfg.c3_const = cli_values.c3_const;
  if (cmd->count("--horizon-c")) cfg.horizon_c = cli_values.horizon_c;
  if (cmd->count("--outdir")) cfg.outdir = cli_values.outdir;
  return cfg;
}

void ensure_outdir(const std::string& dir) { fs::create_directories(dir); }

int cmd_synth(const ExperimentConfig& cfg) {
  const GevreyParams gev{cfg.beta, cfg.delta};
  const CoefficientSet coeffs =
      cfg.amplitude == 0.0
          ? zero_coefficients(cfg.dim, gev)
          : random_coefficients(cfg.seed, cfg.dim, gev, cfg.margin, cfg.coeff_cutoff, cfg.amplitude);
  ensure_outdir(cfg.outdir);
  write_file(cfg.outdir + "/v.snap", save_snapshot(coeffs.v, 0.0));
  for (std::size_t k = 0; k < coeffs.w.size(); ++k)
    write_file(cfg.outdir + "/w" + std::to_string(k + 1) + ".snap", save_snapshot(coeffs.w[k], 0.0));
  std::ostringstream manifest;
  manifest << "beta=" << fmt17(cfg.beta) << "\ndelta=" << fmt17(cfg.delta) << "\nM0=" << fmt17(coeffs.M0)
           << "\nM1=" << fmt17(coeffs.M1) << "\nKv=" << fmt17(coeffs.Kv) << "\nKw=" << fmt17(coeffs.Kw)
           << "\nseed=" << cfg.seed << '\n';
  write_file(cfg.outdir + "/manifest.txt", manifest.str());
  std::printf("synth: wrote coefficient bundle to %s (M0=%g M1=%g Kv=%g Kw=%g)\n", cfg.outdir.c_str(),
              coeffs.M0, coeffs.M1, coeffs.Kv, coeffs.Kw);
  return 0;
}

int cmd_solve(const ExperimentConfig& cfg, const std::string& u0_path) {
  const GevreyParams gev{cfg.beta, cfg.delta};
  const CoefficientSet coeffs =
      cfg.amplitude == 0.0
          ? zero_coefficients(cfg.dim, gev)
          : random_coefficients(cfg.seed, cfg.dim, gev, cfg.margin, cfg.coeff_cutoff, cfg.amplitude);
  SolverConfig scfg;
  scfg.cutoff = cfg.cutoff;
  scfg.t0 = cfg.t_max;
  scfg.snapshot_times = log_time_grid(cfg.t_min, cfg.t_max, cfg.points_per_decade);
  scfg.gevrey_radii = {gev};
  SpectralField u0 = u0_path.empty() ? rough_initial_data(cfg.seed, cfg.dim, cfg.cutoff)
                                     : load_snapshot(read_file(u0_path)).field;
  double dt = cfg.dt;
  if (dt <= 0.0) {
    dt = 0.5 / (coeffs.M1 * cfg.cutoff + coeffs.M0);
    dt = std::fmin(dt, scfg.snapshot_times.front());
    for (std::size_t i = 1; i < scfg.snapshot_times.size(); ++i)
      dt = std::fmin(dt, scfg.snapshot_times[i] - scfg.snapshot_times[i - 1]);
    dt *= 0.999;
  }
  scfg.dt = dt;
  const SolveRecord rec = solve(u0, coeffs, scfg);
  ensure_outdir(cfg.outdir);
  const std::string hash = git_blob_hash(serialize_config(cfg));
  write_file(cfg.outdir + "/diagnostics.csv", diagnostics_csv(rec, hash));
  std::printf("solve: %zu snapshots, q0 = %g, diagnostics in %s/diagnostics.csv\n",
              rec.snapshots.size(), rec.q0, cfg.outdir.c_str());
  return 0;
}

int cmd_measure(const ExperimentConfig& cfg, const std::string& field_path) {
  const LoadedSnapshot snap = load_snapshot(read_file(field_path));
  const std::string hash = git_blob_hash(serialize_config(cfg));
  ensure_outdir(cfg.outdir);
  std::ostringstream out;
  out << "t,method,resolution,value,refined_value,n_line_max,config\n";
  if (snap.field.dim() == 1) {
    const NodalSet1D z = zeros_1d(snap.field, cfg.oversample);
    out << fmt17(snap.t) << ",count1d," << cfg.oversample * snap.field.cutoff() << ',' << z.count << ','
        << z.count << ",0," << hash << '\n';
    std::printf("measure: %d zeros (%zu suspects)\n", z.count, z.suspects.size());
  } else {
    const NodalCurve2D c = nodal_length_2d(snap.field, cfg.resolution);
    ProbePoint center{two_pi / 2.0, two_pi / 2.0};
    double longest = -1.0;
    for (const CurveSegment& s : c.segments)
      if (s.length() > longest) {
        longest = s.length();
        center = {0.5 * (s.x1 + s.x2), 0.5 * (s.y1 + s.y2)};
      }
    const int n_line =
        c.segments.empty()
            ? 0
            : max_line_intersections(c, make_probe_set(center, 0.25, 2), 256);
    out << fmt17(snap.t) << ",length2d," << cfg.resolution << ',' << fmt17(c.total_length) << ','
        << fmt17(c.refined_length) << ',' << n_line << ',' << hash << '\n';
    std::printf("measure: length %.6g (refined %.6g), max line crossings %d\n", c.total_length,
                c.refined_length, n_line);
    std::ostringstream poly;
    for (const CurveSegment& s : c.segments)
      poly << fmt17(s.x1) << ',' << fmt17(s.y1) << ',' << fmt17(s.x2) << ',' << fmt17(s.y2) << '\n';
    write_file(cfg.outdir + "/polyline.csv", poly.str());
  }
  write_file(cfg.outdir + "/nodal.csv", out.str());
  return 0;
}

int cmd_certify(const ExperimentConfig& cfg, const std::string& field_path, double px, double py,
                double theta, double r, int nmax) {
  const LoadedSnapshot snap = load_snapshot(read_file(field_path));
  std::optional<ZeroCertificate> cert;
  if (snap.field.dim() == 1)
    cert = certify_zero_bound(snap.field, Segment{px, 2.0 * r}, nmax);
  else
    cert = certify_on_line(snap.field, px, py, theta, r, nmax);
  ensure_outdir(cfg.outdir);
  std::ostringstream out;
  out << "p,theta,r,nstar,log_margin,config\n";
  if (snap.field.dim() == 1)
    out << fmt17(px);
  else
    out << fmt17(px) << ':' << fmt17(py);
  out << ',' << fmt17(theta) << ',' << fmt17(r) << ',' << (cert ? cert->nstar : 0) << ','
      << fmt17(cert ? cert->log_margin : 0.0) << ',' << git_blob_hash(serialize_config(cfg)) << '\n';
  write_file(cfg.outdir + "/certificates.csv", out.str());
  if (cert)
    std::printf("certify: zero count < %d (log margin %.4g)\n", cert->nstar, cert->log_margin);
  else
    std::printf("certify: inconclusive up to nmax = %d\n", nmax);
  return 0;
}

int cmd_bound(const ExperimentConfig& cfg, double q0, double m0, double m1, double kv, double kw) {
  BoundConstants bc;
  bc.q0 = q0;
  bc.M0 = m0;
  bc.M1 = m1;
  bc.Kv = kv;
  bc.Kw = kw;
  bc.gevrey = {cfg.beta, cfg.delta};
  bc.K = cfg.k_const;
  bc.C0 = cfg.c0_const;
  bc.C3 = cfg.c3_const;
  const std::vector<double> grid = log_time_grid(cfg.t_min, cfg.t_max, cfg.points_per_decade);
  bc.M = cfg.m_const > 0.0 ? cfg.m_const : bisect_radius_constant(bc, cfg.dim, grid);
  bc.validate();

  nlohmann::ordered_json j;
  j["constants"] = {{"q0", bc.q0}, {"M0", bc.M0}, {"M1", bc.M1},   {"Kv", bc.Kv},
                    {"Kw", bc.Kw}, {"delta", bc.gevrey.delta},     {"beta", bc.gevrey.beta},
                    {"K", bc.K},   {"M", bc.M},   {"C0", bc.C0},   {"C1", bc.C1()},
                    {"C2", bc.C2()}, {"C3", bc.C3}, {"Cmain", bc.Cmain}};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (double t : grid) {
    const double r = covering_radius(t, bc.gevrey.beta, bc.M);
    const double n0 = static_cast<double>(line_zero_budget(t, r, bc.K, cfg.dim));
    rows.push_back({{"t", t},
                    {"r", r},
                    {"n0", n0},
                    {"main", nodal_bound(t, bc.gevrey.beta, bc.Cmain)},
                    {"covering", covering_bound(t, bc, cfg.dim)},
                    {"feasibility_at_n0", zero_count_log_feasibility(n0, r, t, bc, cfg.dim)},
                    {"budget_upper", budget_feasibility_upper(n0, r, t, bc, cfg.dim)}});
  }
  j["rows"] = rows;
  ensure_outdir(cfg.outdir);
  write_file(cfg.outdir + "/bounds.json", j.dump(2) + "\n");
  std::printf("bound: %zu rows in %s/bounds.json (M = %g)\n", grid.size(), cfg.outdir.c_str(), bc.M);
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& u0_path) {
  SweepResult res;
  if (u0_path.empty()) {
    res = run_sweep(cfg);
  } else {
    const SpectralField u0 = load_snapshot(read_file(u0_path)).field;
    res = run_sweep(cfg, &u0);
  }
  ensure_outdir(cfg.outdir);
  write_file(cfg.outdir + "/diagnostics.csv", diagnostics_csv(res.record, res.config_hash));
  write_file(cfg.outdir + "/nodal.csv", nodal_csv(res));
  write_file(cfg.outdir + "/certificates.csv", certificates_csv(res));
  write_file(cfg.outdir + "/bounds.json", bounds_json(res).dump(2) + "\n");
  write_file(cfg.outdir + "/report.json", report_json(res).dump(2) + "\n");
  std::printf("sweep: %zu snapshots, Cmain = %.6g, dominance %s, outputs in %s\n", res.rows.size(),
              res.c_main, res.dominance_pass ? "pass" : "FAIL", cfg.outdir.c_str());
  return 0;
}

int cmd_fit(const std::string& csv_path, const std::string& x_col, const std::string& y_col) {
  const std::string text = read_file(csv_path);
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("fit: empty csv");
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  int xi = -1, yi = -1;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == x_col) xi = static_cast<int>(i);
    if (cols[i] == y_col) yi = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0) throw ConfigError("fit: column not found in " + header);
  std::vector<double> ts, ys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    ts.push_back(std::stod(cells[static_cast<std::size_t>(xi)]));
    ys.push_back(std::stod(cells[static_cast<std::size_t>(yi)]));
  }
  const ScalingFit fit = fit_scaling(ts, ys);
  std::printf("fit: log y = a log(1/t) + b loglog(1/t) + c\n");
  std::printf("  a (slope)     = %.6g\n  b (log power) = %.6g\n  rms residual  = %.3g\n  dropped rows  = %d\n",
              fit.slope, fit.log_power, fit.residual, fit.dropped);
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg) {
  const SuiteReport rep = verify_suite(cfg);
  ensure_outdir(cfg.outdir);
  write_file(cfg.outdir + "/report.json", suite_json(rep).dump(2) + "\n");
  for (const SuiteItem& item : rep.items)
    std::printf("[%s] %-26s %s\n", item.pass ? "PASS" : "FAIL", item.name.c_str(), item.detail.c_str());
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nodalab: nodal sets of parabolic flows with Gevrey coefficients"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path, u0_path, field_path, csv_path;
  std::string x_col = "t", y_col = "value";
  double px = 0.0, py = 0.0, theta = 0.0, radius = 0.25;
  double q0 = 9.0, m0 = 1.0, m1 = 1.0, kv = 1.0, kw = 1.0;
  int nmax = 200;

  CLI::App* synth = app.add_subcommand("synth", "synthesize a certified coefficient bundle");
  add_config_flags(synth, cfg, config_path);

  CLI::App* solve_cmd = app.add_subcommand("solve", "evolve and record diagnostics");
  add_config_flags(solve_cmd, cfg, config_path);
  solve_cmd->add_option("--u0", u0_path, "initial data snapshot (default: rough random data)");

  CLI::App* measure = app.add_subcommand("measure", "measure the nodal set of a saved field");
  add_config_flags(measure, cfg, config_path);
  measure->add_option("--field", field_path, "field snapshot file")->required();

  CLI::App* certify = app.add_subcommand("certify", "certify a zero-count bound on a segment or line");
  add_config_flags(certify, cfg, config_path);
  certify->add_option("--field", field_path, "field snapshot file")->required();
  certify->add_option("--px", px, "probe x (1D: segment center)");
  certify->add_option("--py", py, "probe y (2D only)");
  certify->add_option("--theta", theta, "line angle (2D only)");
  certify->add_option("--radius", radius, "ball radius r; the segment spans 4r");
  certify->add_option("--nmax", nmax, "largest order to try");

  CLI::App* bound = app.add_subcommand("bound", "evaluate the closed-form bounds on a time grid");
  add_config_flags(bound, cfg, config_path);
  bound->add_option("--q0", q0, "Dirichlet quotient bound");
  bound->add_option("--m0", m0, "potential sup bound");
  bound->add_option("--m1", m1, "drift sup bound");
  bound->add_option("--kv", kv, "potential Gevrey constant");
  bound->add_option("--kw", kw, "drift Gevrey constant");

  CLI::App* sweep = app.add_subcommand("sweep", "full experiment: solve, measure, certify, bound");
  add_config_flags(sweep, cfg, config_path);
  sweep->add_option("--u0", u0_path, "initial data snapshot (default: rough random data)");

  CLI::App* fit = app.add_subcommand("fit", "fit log y = a log(1/t) + b loglog(1/t) + c to a CSV");
  fit->add_option("--file", csv_path, "input csv")->required();
  fit->add_option("--x-col", x_col, "time column name");
  fit->add_option("--y-col", y_col, "value column name");

  CLI::App* verify = app.add_subcommand("verify", "run the bundled verification suite");
  add_config_flags(verify, cfg, config_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(resolve_config(synth, cfg, config_path));
    if (solve_cmd->parsed()) return cmd_solve(resolve_config(solve_cmd, cfg, config_path), u0_path);
    if (measure->parsed()) return cmd_measure(resolve_config(measure, cfg, config_path), field_path);
    if (certify->parsed())
      return cmd_certify(resolve_config(certify, cfg, config_path), field_path, px, py, theta, radius,
                         nmax);
    if (bound->parsed()) return cmd_bound(resolve_config(bound, cfg, config_path), q0, m0, m1, kv, kw);
    if (sweep->parsed()) return cmd_sweep(resolve_config(sweep, cfg, config_path), u0_path);
    if (fit->parsed()) return cmd_fit(csv_path, x_col, y_col);
    if (verify->parsed()) return cmd_verify(resolve_config(verify, cfg, config_path));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
