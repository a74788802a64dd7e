// Closed-form bound evaluators: the main nodal-measure bound, the covering
// radius and per-line zero budget, the log-form feasibility test a candidate
// zero count must pass, its substituted upper bound, observability exponents,
// the vanishing-rate admissibility check, Stirling-constant scans backed by
// exact big-integer factorials, and constant calibration against data.
//
// Every evaluator has a twin in bounds_alt (same formula, independently coded
// with a different association order) so transcription slips are caught by
// the cross-check property tests.
#pragma once

#include <cstdint>
#include <vector>

#include "nodalab/gevrey.hpp"

namespace nodalab {

// The full constant ledger feeding the closed-form bounds. Anonymous
// constants of the theory become explicit configured fields here.
struct BoundConstants {
  double q0 = 9.0;
  double M0 = 1.0;
  double M1 = 1.0;
  double Kv = 1.0;
  double Kw = 1.0;
  GevreyParams gevrey{1.0, 0.1};
  double K = 1.0;        // observability constant
  double M = 100.0;      // covering-radius constant, usually bisected
  double C0 = 2.718281828459045;  // base constant of the log-form test
  double C3 = 0.36;      // Stirling floor constant
  double Cmain = 1.0;    // calibrated constant of the main bound
  double Cmu = 1.0;      // constant of the vanishing-rate formulas

  double C1() const { return Kw * Kw + Kv + M1 + M0 + q0; }
  double C2() const { return std::pow(gevrey.delta, 2.0 / (2.0 - gevrey.beta)); }

  void validate() const;  // defined after the Stirling helpers
};

inline constexpr double max_bound_time = 0.36787944117144233;  // e^{-1}: keeps log(1/t) >= 1

namespace detail {

inline void require_bound_time(double t, const char* who) {
  if (!(t > 0.0 && t <= max_bound_time * (1.0 + 1e-12)))
    throw ConfigError(std::string(who) + ": t must lie in (0, e^-1]");
}

}  // namespace detail

// Cmain * (1/t)^{1/beta} * log^{2(1/beta - 1)}(1/t).
inline double nodal_bound(double t, double beta, double c_main) {
  detail::require_bound_time(t, "nodal_bound");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("nodal_bound: beta must lie in (0,1]");
  const double inv_beta = 1.0 / beta;
  const double log_inv_t = std::log(1.0 / t);
  return c_main * std::pow(1.0 / t, inv_beta) * std::pow(log_inv_t, 2.0 * (inv_beta - 1.0));
}

// t^{1/beta - 1} / (log^{1/beta - 1}(1/t) * M), clamped into (0, 1/2].
inline double covering_radius(double t, double beta, double m) {
  detail::require_bound_time(t, "covering_radius");
  if (!(m >= 1.0)) throw ConfigError("covering_radius: M must be >= 1");
  const double p = 1.0 / beta - 1.0;
  const double raw = std::pow(t, p) / (std::pow(std::log(1.0 / t), p) * m);
  return std::fmin(raw, 0.5);
}

// floor(2 K^2 log(1/r) / t + 2d + 1): the per-line zero budget the proof
// rules out.
inline long long line_zero_budget(double t, double r, double k, int dim) {
  if (!(t > 0.0) || !(r > 0.0 && r <= 0.5)) throw ConfigError("line_zero_budget: bad t or r");
  return static_cast<long long>(std::floor(2.0 * k * k * std::log(1.0 / r) / t + 2.0 * dim + 1.0));
}

// Log-form feasibility value for a candidate per-segment zero count n; the
// count n is consistent with the chain of estimates iff the value is >= 0.
inline double zero_count_log_feasibility(double n, double r, double t, const BoundConstants& bc, int dim) {
  if (!(n >= 1.0)) throw ConfigError("zero_count_log_feasibility: n must be >= 1");
  const double beta = bc.gevrey.beta;
  const double log_r = std::log(r);
  const double lead = n + bc.K * bc.K * std::log(1.0 / r) / t + bc.C1() * t +
                      bc.C2() * std::pow(t, -beta / (2.0 - beta));
  return lead * std::log(bc.C0) + (n + 0.5 * dim) * log_r - (0.5 + n) * std::log(n) -
         n * std::log(bc.C3) + ((n + 2.0 * dim) / beta) * std::log(n + 2.0 * dim);
}

// Upper bound for the feasibility value after substituting the zero budget
// n0; the choice of covering radius makes this negative, which is the heart
// of the counting argument.
inline double budget_feasibility_upper(double n0, double r, double t, const BoundConstants& bc, int dim) {
  if (!(n0 >= 1.0)) throw ConfigError("budget_feasibility_upper: n0 must be >= 1");
  const double beta = bc.gevrey.beta;
  const double smooth = (bc.C1() * t + bc.C2() * std::pow(t, -beta / (2.0 - beta))) * std::log(bc.C0);
  const double inner = bc.C0 * bc.C0 * r * std::pow(2.0, 1.0 / beta) * std::pow(n0, 1.0 / beta - 1.0) / bc.C3;
  return smooth + n0 * std::log(inner) + (2.0 * dim / beta) * std::log(2.0 * n0);
}

// n0 / r with r = covering_radius(t): the covering combination
// n0 * r^{d-1} * r^{-d} before its constant.
inline double covering_bound(double t, const BoundConstants& bc, int dim) {
  const double r = covering_radius(t, bc.gevrey.beta, bc.M);
  return static_cast<double>(line_zero_budget(t, r, bc.K, dim)) / r;
}

// K^2 log(1/mu0) / t: the exponent of the local observability constant.
inline double observability_exponent(double mu0, double t, double k) {
  if (!(mu0 > 0.0 && mu0 <= 0.5)) throw ConfigError("observability_exponent: mu0 must lie in (0, 1/2]");
  if (!(t > 0.0)) throw ConfigError("observability_exponent: t must be positive");
  return k * k * std::log(1.0 / mu0) / t;
}

// The vanishing-rate exponent beta(mu) of the local-ratio machinery.
inline double mu_rate(double mu, double t, double q0, double m0, double m1, double c) {
  if (!(mu > 0.0 && t > 0.0)) throw ConfigError("mu_rate: mu and t must be positive");
  const double sqrt_t = std::sqrt(t);
  const double first = c *
                       (t * q0 + m1 * m1 + m1 * m1 * t + m0 * m0 * t * t + 1.0 / t + 1.0 / sqrt_t) *
                       std::log(t / (mu * mu));
  const double second = c * (m1 * sqrt_t + m1 * m1 * t + m0 * t + 1.0 / t + 1.0 / sqrt_t);
  return first + second;
}

// Admissibility of mu: 1/mu^2 >= (C/mu0^2) log(1/mu) + C (beta(mu)+1)/delta0^2
// together with 0 < mu < min(sqrt(t/2), mu0), the second strict.
inline bool check_mu_admissible(double mu, double mu0, double delta0, double t, double q0, double m0,
                                double m1, double c) {
  if (!(mu > 0.0)) return false;
  if (!(mu < std::sqrt(t / 2.0) && mu < mu0)) return false;
  const double rate = mu_rate(mu, t, q0, m0, m1, c);
  const double rhs = (c / (mu0 * mu0)) * std::log(1.0 / mu) + c * (rate + 1.0) / (delta0 * delta0);
  return 1.0 / (mu * mu) >= rhs;
}

// --- Stirling floor constant with exact integer factorials -----------------

namespace detail {

// Minimal unsigned bignum: just enough for n! up to n = 300 and its log.
class BigNat {
 public:
  explicit BigNat(std::uint32_t v) : limbs_{v} {}

  void mul_small(std::uint32_t m) {
    std::uint64_t carry = 0;
    for (std::uint32_t& limb : limbs_) {
      const std::uint64_t prod = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(prod);
      carry = prod >> 32;
    }
    while (carry != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry));
      carry >>= 32;
    }
  }

  // Natural log from the top 96 bits; relative error ~1e-16.
  double log_value() const {
    const std::size_t top = limbs_.size() - 1;
    long double mant = 0.0L;
    for (std::size_t k = 0; k < 3 && k <= top; ++k)
      mant = mant * 4294967296.0L + limbs_[top - k];
    const long double shift = 32.0L * (top >= 2 ? top - 2 : 0);
    return static_cast<double>(std::log(mant) + shift * std::log(2.0L));
  }

 private:
  std::vector<std::uint32_t> limbs_;
};

// log(n!) for 1 <= n <= nmax, from exact integer factorials.
inline const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(301, 0.0);
    BigNat fact(1);
    for (std::uint32_t n = 1; n <= 300; ++n) {
      fact.mul_small(n);
      t[n] = fact.log_value();
    }
    return t;
  }();
  return table;
}

}  // namespace detail

// Strict check c3^n * n^{n+1/2} < n! for all 1 <= n <= nmax, in the log
// domain with a directed slack on the left so rounding cannot fake a pass.
inline bool stirling_constant_valid(double c3, int nmax) {
  if (!(c3 > 0.0)) return false;
  if (nmax < 1 || nmax > 300) throw ConfigError("stirling_constant_valid: nmax must lie in [1, 300]");
  const auto& logfact = detail::log_factorial_table();
  for (int n = 1; n <= nmax; ++n) {
    const double lhs = n * std::log(c3) + (n + 0.5) * std::log(static_cast<double>(n));
    const double slack = 1e-12 * (std::fabs(lhs) + 1.0);
    if (!(lhs + slack < logfact[static_cast<std::size_t>(n)])) return false;
  }
  return true;
}

// Largest c3 (to 1e-6) passing stirling_constant_valid over n <= nmax.
inline double stirling_floor_constant(int nmax) {
  if (nmax < 1 || nmax > 300) throw ConfigError("stirling_floor_constant: nmax must lie in [1, 300]");
  double lo = 0.25, hi = 1.5;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (stirling_constant_valid(mid, nmax))
      lo = mid;
    else
      hi = mid;
  }
  double snapped = std::floor(lo * 1e6) / 1e6;
  while (!stirling_constant_valid(snapped, nmax)) snapped -= 1e-6;
  return snapped;
}

inline void BoundConstants::validate() const {
  gevrey.validate();
  if (!(M0 >= 1.0 && M1 >= 1.0)) throw ConfigError("BoundConstants: M0, M1 must be >= 1");
  if (!(q0 >= 0.0)) throw ConfigError("BoundConstants: q0 must be >= 0");
  if (!(K >= 0.0 && M >= 1.0)) throw ConfigError("BoundConstants: K >= 0 and M >= 1 required");
  if (!(C0 > 1.0)) throw ConfigError("BoundConstants: C0 must exceed 1");
  if (!(Cmain > 0.0)) throw ConfigError("BoundConstants: Cmain must be positive");
  if (!(C3 > 0.0 && C3 <= 0.3678794411714424)) throw ConfigError("BoundConstants: C3 must lie in (0, 1/e]");
  if (!stirling_constant_valid(C3, 300)) throw ConfigError("BoundConstants: C3 fails the factorial floor");
}

// --- calibration ------------------------------------------------------------

enum class BoundForm {
  InverseTime,  // C / t
  Main,         // C * (1/t)^{1/beta} * log^{2(1/beta-1)}(1/t)
};

struct CalibrationResult {
  double c = 0.0;
  bool degenerate = false;  // all observations were zero
};

// Smallest constant making the chosen form dominate every (t, value) pair.
inline CalibrationResult calibrate_constant(const std::vector<std::pair<double, double>>& pairs,
                                            BoundForm form, double beta) {
  if (pairs.empty()) throw ConfigError("calibrate_constant: no pairs");
  CalibrationResult out;
  for (const auto& [t, v] : pairs) {
    const double unit = form == BoundForm::InverseTime ? 1.0 / t : nodal_bound(t, beta, 1.0);
    out.c = std::fmax(out.c, v / unit);
  }
  if (out.c <= 0.0) {
    out.c = std::numeric_limits<double>::min();
    out.degenerate = true;
  }
  return out;
}

// Smallest M (within 1e-3 relative) whose covering radius keeps the
// substituted feasibility value negative across the whole t grid.
inline double bisect_radius_constant(const BoundConstants& base, int dim,
                                     const std::vector<double>& t_grid) {
  const auto admissible = [&](double m) {
    BoundConstants bc = base;
    bc.M = m;
    for (double t : t_grid) {
      const double r = covering_radius(t, bc.gevrey.beta, m);
      const double n0 = static_cast<double>(line_zero_budget(t, r, bc.K, dim));
      if (!(budget_feasibility_upper(n0, r, t, bc, dim) < 0.0)) return false;
    }
    return true;
  };
  double hi = 2.0;
  while (!admissible(hi)) {
    hi *= 2.0;
    if (hi > 1e12) throw ConfigError("bisect_radius_constant: no admissible M below 1e12");
  }
  double lo = 1.0;
  while (hi / lo > 1.0 + 1e-3) {
    const double mid = std::sqrt(lo * hi);
    if (admissible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// --- independently coded twins ----------------------------------------------

namespace bounds_alt {

inline double nodal_bound(double t, double beta, double c_main) {
  const double x = std::log(1.0 / t);
  return std::exp(std::log(c_main) + x / beta + (2.0 / beta - 2.0) * std::log(x));
}

inline double covering_radius(double t, double beta, double m) {
  const double p = 1.0 / beta - 1.0;
  const double log_raw = p * std::log(t) - p * std::log(std::log(1.0 / t)) - std::log(m);
  const double raw = std::exp(log_raw);
  return raw < 0.5 ? raw : 0.5;
}

inline double zero_count_log_feasibility(double n, double r, double t, const BoundConstants& bc,
                                         int dim) {
  const double beta = bc.gevrey.beta;
  const double c1 = bc.q0 + bc.M0 + bc.M1 + bc.Kv + bc.Kw * bc.Kw;
  const double c2 = std::pow(bc.gevrey.delta, 2.0 / (2.0 - beta));
  double acc = 0.0;
  acc += n * std::log(bc.C0);
  acc += (bc.K * bc.K / t) * std::log(1.0 / r) * std::log(bc.C0);
  acc += c1 * t * std::log(bc.C0);
  acc += c2 * std::log(bc.C0) / std::pow(t, beta / (2.0 - beta));
  acc += n * std::log(r) + (dim / 2.0) * std::log(r);
  acc -= n * std::log(n) + 0.5 * std::log(n);
  acc -= n * std::log(bc.C3);
  acc += (n / beta) * std::log(n + 2.0 * dim) + (2.0 * dim / beta) * std::log(n + 2.0 * dim);
  return acc;
}

inline double budget_feasibility_upper(double n0, double r, double t, const BoundConstants& bc,
                                       int dim) {
  const double beta = bc.gevrey.beta;
  const double c1 = bc.q0 + bc.M0 + bc.M1 + bc.Kv + bc.Kw * bc.Kw;
  const double c2 = std::pow(bc.gevrey.delta, 2.0 / (2.0 - beta));
  double acc = (c1 * t) * std::log(bc.C0) + (c2 * std::pow(t, -beta / (2.0 - beta))) * std::log(bc.C0);
  acc += n0 * (2.0 * std::log(bc.C0) + std::log(r) + std::log(2.0) / beta +
               (1.0 / beta - 1.0) * std::log(n0) - std::log(bc.C3));
  acc += (2.0 * dim / beta) * (std::log(2.0) + std::log(n0));
  return acc;
}

inline double mu_rate(double mu, double t, double q0, double m0, double m1, double c) {
  const double log_term = std::log(t) - 2.0 * std::log(mu);
  double first = t * q0;
  first += m1 * m1;
  first += m1 * m1 * t;
  first += m0 * m0 * t * t;
  first += 1.0 / t;
  first += std::pow(t, -0.5);
  double second = m1 * std::sqrt(t);
  second += m1 * m1 * t;
  second += m0 * t;
  second += 1.0 / t;
  second += std::pow(t, -0.5);
  return c * first * log_term + c * second;
}

inline double observability_exponent(double mu0, double t, double k) {
  return (k * k) * (-std::log(mu0)) * (1.0 / t);
}

}  // namespace bounds_alt

}  // namespace nodalab
