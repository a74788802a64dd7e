// CSV and JSON emitters for sweep results and verification reports. Output
// bytes are a pure function of the result structs, so identical runs produce
// identical artifacts.
#pragma once

#include <json.hpp>

#include "nodalab/experiment.hpp"

namespace nodalab {

// t,method,resolution,value,refined_value,n_line_max,config
inline std::string nodal_csv(const SweepResult& res) {
  std::ostringstream out;
  out << "t,method,resolution,value,refined_value,n_line_max,config\n";
  const char* method = res.config.dim == 1 ? "count1d" : "length2d";
  const int resolution = res.config.dim == 1 ? res.config.oversample * res.config.cutoff
                                             : res.config.resolution;
  for (const SweepRow& row : res.rows)
    out << fmt17(row.t) << ',' << method << ',' << resolution << ',' << fmt17(row.measured) << ','
        << fmt17(row.refined) << ',' << row.n_line_max << ',' << res.config_hash << '\n';
  return out.str();
}

// p,theta,r,nstar,log_margin,config  (p is "x" in 1D, "x:y" in 2D)
inline std::string certificates_csv(const SweepResult& res) {
  std::ostringstream out;
  out << "p,theta,r,nstar,log_margin,config\n";
  for (const CertificateRow& c : res.certificates) {
    if (res.config.dim == 1)
      out << fmt17(c.px);
    else
      out << fmt17(c.px) << ':' << fmt17(c.py);
    out << ',' << fmt17(c.theta) << ',' << fmt17(c.r) << ',' << c.nstar << ',' << fmt17(c.log_margin)
        << ',' << res.config_hash << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json bounds_json(const SweepResult& res) {
  nlohmann::ordered_json j;
  j["config"] = res.config_hash;
  j["constants"] = {{"q0", res.constants.q0},   {"M0", res.constants.M0}, {"M1", res.constants.M1},
                    {"Kv", res.constants.Kv},   {"Kw", res.constants.Kw}, {"delta", res.constants.gevrey.delta},
                    {"beta", res.constants.gevrey.beta}, {"K", res.constants.K},  {"M", res.constants.M},
                    {"C0", res.constants.C0},   {"C1", res.constants.C1()}, {"C2", res.constants.C2()},
                    {"C3", res.constants.C3},   {"Cmain", res.constants.Cmain}};
  j["calibration"] = {{"c_main", res.c_main},
                      {"degenerate", res.c_main_degenerate},
                      {"train_ids", res.train_ids},
                      {"test_ids", res.test_ids}};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : res.rows)
    rows.push_back({{"t", row.t},
                    {"measured", row.measured},
                    {"refined", row.refined},
                    {"n_line_max", row.n_line_max},
                    {"grad_floor_ok", row.grad_floor_ok},
                    {"bound_main", row.bound_main},
                    {"bound_covering", row.bound_covering},
                    {"is_test", row.is_test},
                    {"dominated", row.dominated}});
  j["rows"] = rows;
  if (res.fit_measured_ok)
    j["fit_measured"] = {{"slope", res.fit_measured.slope},
                         {"log_power", res.fit_measured.log_power},
                         {"residual", res.fit_measured.residual}};
  if (res.fit_covering_ok)
    j["fit_covering"] = {{"slope", res.fit_covering.slope},
                         {"log_power", res.fit_covering.log_power},
                         {"residual", res.fit_covering.residual}};
  return j;
}

inline nlohmann::ordered_json report_json(const SweepResult& res) {
  nlohmann::ordered_json j;
  j["config"] = res.config_hash;
  j["m_star"] = res.m_star;
  j["c_main"] = res.c_main;
  j["dominance_pass"] = res.dominance_pass;
  j["q0"] = res.constants.q0;
  j["snapshots"] = res.rows.size();
  j["certificates"] = res.certificates.size();
  int inconclusive = 0;
  for (const CertificateRow& c : res.certificates)
    if (c.nstar == 0) ++inconclusive;
  j["certificates_inconclusive"] = inconclusive;
  return j;
}

inline nlohmann::ordered_json suite_json(const SuiteReport& rep) {
  nlohmann::ordered_json j;
  j["pass"] = rep.pass;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const SuiteItem& item : rep.items)
    items.push_back({{"name", item.name}, {"pass", item.pass}, {"detail", item.detail}});
  j["items"] = items;
  return j;
}

}  // namespace nodalab
