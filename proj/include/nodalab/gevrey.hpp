// Gevrey-regular coefficient fields for the drift/potential terms, plus
// certification of the sup-norm and weighted-L2 constants the solver's
// verification layer consumes.
#pragma once

#include <random>
#include <vector>

#include "nodalab/spectral.hpp"

namespace nodalab {

struct GevreyParams {
  double beta = 1.0;   // inverse Gevrey exponent, in (0, 1]
  double delta = 0.1;  // Gevrey radius, > 0

  void validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("GevreyParams: beta must lie in (0,1]");
    if (!(delta > 0.0)) throw ConfigError("GevreyParams: delta must be positive");
  }
};

struct CertifiedConstants {
  double M0 = 1.0;  // sup-norm bound for the potential, clamped to >= 1
  double M1 = 1.0;  // sup-norm bound for drift plus its gradient, clamped to >= 1
  double Kv = 0.0;  // ||(A^d + I) e^{delta A^{beta/2}} v||_L2
  double Kw = 0.0;  // same for the drift, vector L2 norm
};

// The pair (v, w) with its certified constants. Immutable by convention:
// build through make_coefficient_set / zero_coefficients.
struct CoefficientSet {
  SpectralField v;
  std::vector<SpectralField> w;
  GevreyParams params;
  double M0 = 1.0;
  double M1 = 1.0;
  double Kv = 0.0;
  double Kw = 0.0;
  bool time_independent = true;

  int dim() const { return v.dim(); }
  bool is_zero() const {
    if (!v.is_zero()) return false;
    for (const auto& c : w)
      if (!c.is_zero()) return false;
    return true;
  }
};

namespace detail {

// Certified sup-norm bound: dense-grid max at 16J plus the l1 tail of any
// modes beyond the grid band (zero for band-limited fields, where the 16J
// grid contains the 4J and 8J grids as subsets).
inline double certified_sup_norm(const SpectralField& f) {
  const int n = 16 * f.cutoff();
  const GridField g = to_grid(f, n);
  double m = 0.0;
  for (double v : g.values) m = std::fmax(m, std::fabs(v));
  return m;
}

// Pointwise Euclidean magnitude of a vector field on a shared grid.
inline double certified_sup_norm_vec(const std::vector<SpectralField>& comps) {
  const int n = 16 * comps.front().cutoff();
  std::vector<GridField> grids;
  for (const auto& c : comps) grids.push_back(to_grid(c, n));
  double m = 0.0;
  for (std::size_t i = 0; i < grids.front().values.size(); ++i) {
    double sq = 0.0;
    for (const auto& g : grids) sq += g.values[i] * g.values[i];
    m = std::fmax(m, sq);
  }
  return std::sqrt(m);
}

// Pointwise sum of |entries| of a matrix field; dominates both |div w| and
// the Frobenius norm, which the energy floor needs.
inline double certified_sup_norm_entries_l1(const std::vector<SpectralField>& entries) {
  const int n = 16 * entries.front().cutoff();
  std::vector<GridField> grids;
  for (const auto& c : entries) grids.push_back(to_grid(c, n));
  double m = 0.0;
  for (std::size_t i = 0; i < grids.front().values.size(); ++i) {
    double s = 0.0;
    for (const auto& g : grids) s += std::fabs(g.values[i]);
    m = std::fmax(m, s);
  }
  return m;
}

// ||(A^d + I) e^{delta A^{beta/2}} f||_L2 by direct weighted summation.
inline double weighted_gevrey_l2(const SpectralField& f, const GevreyParams& p) {
  const int d = f.dim();
  double sum = 0.0;
  bool overflow = false;
  double bad_exp = 0.0;
  for_each_mode(f, [&](int j1, int j2) {
    const cplx c = f.at(j1, j2);
    const double e = gevrey_exponent(p.delta, p.beta, j1, j2);
    if (e > exp_arg_cap) {
      if (std::abs(c) != 0.0) overflow = true;
      bad_exp = std::fmax(bad_exp, e);
      return;
    }
    const double jsq = mode_norm_sq(j1, j2);
    const double weight = (d == 1 ? jsq : jsq * jsq) + 1.0;
    sum += std::norm(weight * std::exp(e) * c);
  });
  if (overflow)
    throw OverflowError("weighted_gevrey_l2: not in Gevrey class at radius " + std::to_string(p.delta) +
                        " (exponent " + std::to_string(bad_exp) + ")");
  return std::sqrt(std::pow(two_pi, d) * sum);
}

}  // namespace detail

// Recomputes (M0, M1, Kv, Kw) for the given fields at the given radius.
// Throws OverflowError when the radius leaves the representable class.
inline CertifiedConstants certify_constants(const SpectralField& v, const std::vector<SpectralField>& w,
                                            const GevreyParams& params) {
  params.validate();
  if (static_cast<int>(w.size()) != v.dim()) throw DimensionError("certify_constants: drift needs dim components");
  CertifiedConstants out;
  out.M0 = std::fmax(1.0, detail::certified_sup_norm(v));

  std::vector<SpectralField> grad_entries;
  for (const auto& comp : w)
    for (auto& dcomp : gradient(comp)) grad_entries.push_back(std::move(dcomp));
  out.M1 = std::fmax(1.0, detail::certified_sup_norm_vec(w) +
                              detail::certified_sup_norm_entries_l1(grad_entries));

  out.Kv = detail::weighted_gevrey_l2(v, params);
  double kw_sq = 0.0;
  for (const auto& comp : w) {
    const double k = detail::weighted_gevrey_l2(comp, params);
    kw_sq += k * k;
  }
  out.Kw = std::sqrt(kw_sq);
  return out;
}

// Draws a deterministic random field with coefficient decay
// amplitude * exp(-margin * delta * |j|^beta) and Gaussian factors.
inline SpectralField synth_random_gevrey(unsigned long long seed, int dim, const GevreyParams& params,
                                         double margin, int cutoff, double amplitude) {
  params.validate();
  if (!(margin > 1.0)) throw ConfigError("synth_random_gevrey: margin must exceed 1");
  const double worst = margin * gevrey_exponent(params.delta, params.beta, cutoff, dim == 2 ? cutoff : 0);
  if (worst > exp_arg_cap)
    throw OverflowError("synth_random_gevrey: decay exponent " + std::to_string(worst) + " exceeds cap");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  SpectralField f(dim, cutoff);
  const int J = cutoff;
  for (int j2 = (dim == 2 ? -J : 0); j2 <= (dim == 2 ? J : 0); ++j2)
    for (int j1 = -J; j1 <= J; ++j1) {
      if (j1 < 0 || (j1 == 0 && j2 < 0)) continue;
      const double decay = std::exp(-margin * gevrey_exponent(params.delta, params.beta, j1, j2));
      if (j1 == 0 && j2 == 0) {
        f.set(0, 0, cplx{amplitude * decay * gauss(rng), 0.0});
        continue;
      }
      const cplx g{gauss(rng) * inv_sqrt2, gauss(rng) * inv_sqrt2};
      if (dim == 1)
        f.set_pair(j1, amplitude * decay * g);
      else
        f.set_pair(j1, j2, amplitude * decay * g);
    }
  return f;
}

// true iff t0 <= 1 / (C * M1^2); the horizon assumption for all bounds.
inline bool check_time_horizon(double t0, double m1, double c) {
  if (!(t0 > 0.0 && m1 > 0.0)) throw ConfigError("check_time_horizon: inputs must be positive");
  if (!(c >= 2.0)) throw ConfigError("check_time_horizon: C must be >= 2");
  return t0 <= 1.0 / (c * m1 * m1);
}

inline CoefficientSet make_coefficient_set(SpectralField v, std::vector<SpectralField> w,
                                           const GevreyParams& params) {
  const CertifiedConstants c = certify_constants(v, w, params);
  CoefficientSet set{std::move(v), std::move(w), params, c.M0, c.M1, c.Kv, c.Kw, true};
  return set;
}

// v = w = 0 (pure heat); M0, M1 clamp to 1 by convention.
inline CoefficientSet zero_coefficients(int dim, const GevreyParams& params = {}) {
  SpectralField v(dim, 1);
  std::vector<SpectralField> w;
  for (int k = 0; k < dim; ++k) w.emplace_back(dim, 1);
  return make_coefficient_set(std::move(v), std::move(w), params);
}

// Seeded (v, w) pair at the given margin, certified.
inline CoefficientSet random_coefficients(unsigned long long seed, int dim, const GevreyParams& params,
                                          double margin, int cutoff, double amplitude) {
  SpectralField v = synth_random_gevrey(seed * 3 + 1, dim, params, margin, cutoff, amplitude);
  std::vector<SpectralField> w;
  for (int k = 0; k < dim; ++k)
    w.push_back(synth_random_gevrey(seed * 3 + 2 + static_cast<unsigned long long>(k), dim, params, margin,
                                    cutoff, amplitude));
  return make_coefficient_set(std::move(v), std::move(w), params);
}

}  // namespace nodalab
