// Certified upper bounds on zero counts (with multiplicity) of band-limited
// functions on segments. Engine: a function with n zeros on a segment of
// length L is bounded by (L^n / n!) * sup|f^(n)| there, so exhibiting a point
// where |f| beats that product certifies "fewer than n zeros". All factorials
// and mode powers live in the log domain; the right side carries a 1e-6
// relative slack so floating-point rounding cannot flip the decision.
#pragma once

#include <optional>

#include "nodalab/trig_sum.hpp"

namespace nodalab {

struct Segment {
  double center = 0.0;
  double halflength = 0.0;  // in (0, pi]: stays inside one period

  void validate() const {
    if (!(halflength > 0.0 && halflength <= two_pi / 2.0))
      throw ConfigError("Segment: halflength must lie in (0, pi]");
  }
  double lo() const { return center - halflength; }
  double hi() const { return center + halflength; }
  double length() const { return 2.0 * halflength; }
};

struct ZeroCertificate {
  int nstar = 0;              // zero count with multiplicity is < nstar
  double sup_u = 0.0;         // witness: a certified lower bound for sup|f| on the segment
  double log_deriv_bound = 0.0;  // log of the certified sup|f^(nstar)| upper bound
  double log_margin = 0.0;    // log(sup_u) - log(rhs); positive by construction
};

enum class DerivBound {
  Global,   // sum |omega|^n |c|, valid on any segment
  Segment,  // grid max of f^(n) on the segment plus a step-size correction
};

inline constexpr int derivative_order_cap = 400;

namespace detail {

// log( sum |omega_j|^n |c_j| ), -inf when empty.
inline double log_l1_derivative(const TrigSum1D& f, int n) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double m = neg_inf;
  std::vector<double> terms;
  terms.reserve(f.freq.size());
  for (std::size_t i = 0; i < f.freq.size(); ++i) {
    const double a = std::abs(f.coeff[i]);
    const double w = std::fabs(f.freq[i]);
    if (a == 0.0) continue;
    if (n > 0 && w == 0.0) continue;
    const double t = (n > 0 ? n * std::log(w) : 0.0) + std::log(a);
    terms.push_back(t);
    m = std::fmax(m, t);
  }
  if (terms.empty()) return neg_inf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

// log of max_k |f^(n)(s_k)| over an equispaced segment grid, evaluated with
// the dominant magnitude factored out so powers never overflow.
inline double log_gridmax_derivative(const TrigSum1D& f, int n, const Segment& seg, int samples) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double m = neg_inf;
  for (std::size_t i = 0; i < f.freq.size(); ++i) {
    const double a = std::abs(f.coeff[i]);
    const double w = std::fabs(f.freq[i]);
    if (a == 0.0 || (n > 0 && w == 0.0)) continue;
    m = std::fmax(m, (n > 0 ? n * std::log(w) : 0.0) + std::log(a));
  }
  if (m == neg_inf) return neg_inf;

  TrigSum1D scaled;
  const cplx i_unit{0.0, 1.0};
  for (std::size_t i = 0; i < f.freq.size(); ++i) {
    const double a = std::abs(f.coeff[i]);
    const double w = std::fabs(f.freq[i]);
    if (a == 0.0 || (n > 0 && w == 0.0)) continue;
    // (i omega)^n = |omega|^n * (i sgn(omega))^n
    cplx unit{1.0, 0.0};
    const cplx base = f.freq[i] >= 0.0 ? i_unit : -i_unit;
    for (int k = 0; k < n % 4; ++k) unit *= base;
    const double lw = (n > 0 ? n * std::log(w) : 0.0) + std::log(a);
    scaled.freq.push_back(f.freq[i]);
    scaled.coeff.push_back(std::exp(lw - m) * (f.coeff[i] / a) * unit);
  }
  const double ds = seg.length() / (samples - 1);
  const std::vector<double> vals = scaled.sample(seg.lo(), ds, samples);
  double vmax = 0.0;
  for (double v : vals) vmax = std::fmax(vmax, std::fabs(v));
  return vmax == 0.0 ? neg_inf : m + std::log(vmax);
}

inline double log_derivative_bound(const TrigSum1D& f, int n, const Segment& seg, DerivBound mode,
                                   int samples) {
  if (n < 0 || n > derivative_order_cap)
    throw OverflowError("derivative bound: order beyond log-domain guard " +
                        std::to_string(derivative_order_cap));
  if (mode == DerivBound::Global) return log_l1_derivative(f, n);
  // sup over the segment <= grid max + (h/2) * sup|f^(n+1)|.
  const double half_step = 0.5 * seg.length() / (samples - 1);
  return log_add_exp(log_gridmax_derivative(f, n, seg, samples),
                     std::log(half_step) + log_l1_derivative(f, n + 1));
}

}  // namespace detail

// Rigorous upper bound for sup over the segment of |f^(n)|. The global mode
// returns sum |omega|^n |c_j| (segment-independent); the segment mode
// tightens it with a certified grid maximum. May overflow to +inf when the
// log value exceeds double range; use the log variant for large n.
inline double log_derivative_sup(const TrigSum1D& f, int n, const Segment& seg,
                                 DerivBound mode = DerivBound::Global, int samples = 257) {
  seg.validate();
  return detail::log_derivative_bound(f, n, seg, mode, samples);
}

inline double derivative_sup(const SpectralField& f, int n, const Segment& seg,
                             DerivBound mode = DerivBound::Global) {
  return std::exp(log_derivative_sup(as_trig_sum(f), n, seg, mode));
}

namespace detail {

inline std::optional<ZeroCertificate> certify_zero_bound_impl(const TrigSum1D& f, const Segment& seg,
                                                              int nmax, DerivBound mode, int samples) {
  seg.validate();
  if (nmax < 1) throw ConfigError("certify_zero_bound: nmax must be >= 1");
  if (f.all_zero()) return std::nullopt;

  // Witness: grid max of |f| minus an evaluation-roundoff allowance, so the
  // stored value is a true lower bound for the sup.
  const double ds = seg.length() / (samples - 1);
  const std::vector<double> vals = f.sample(seg.lo(), ds, samples);
  double witness = 0.0;
  for (double v : vals) witness = std::fmax(witness, std::fabs(v));
  double l1 = 0.0;
  for (const cplx& c : f.coeff) l1 += std::abs(c);
  witness -= 1e-13 * l1;
  if (!(witness > 0.0)) return std::nullopt;

  const double log_witness = std::log(witness);
  const double log_len = std::log(seg.length());
  for (int n = 1; n <= nmax; ++n) {
    const double log_rhs = n * log_len - std::lgamma(n + 1.0) +
                           log_derivative_bound(f, n, seg, mode, samples) + std::log1p(1e-6);
    if (log_witness > log_rhs) {
      ZeroCertificate cert;
      cert.nstar = n;
      cert.sup_u = witness;
      cert.log_deriv_bound = log_derivative_bound(f, n, seg, mode, samples);
      cert.log_margin = log_witness - log_rhs;
      return cert;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Smallest n <= nmax with sup-witness > (len^n / n!) * sup|f^(n)|; the zero
// count with multiplicity on the segment is then < n. nullopt = inconclusive.
inline std::optional<ZeroCertificate> certify_zero_bound(const TrigSum1D& f, const Segment& seg, int nmax,
                                                         DerivBound mode = DerivBound::Segment,
                                                         int samples = 257) {
  return detail::certify_zero_bound_impl(f, seg, nmax, mode, samples);
}

inline std::optional<ZeroCertificate> certify_zero_bound(const SpectralField& f, const Segment& seg,
                                                         int nmax, DerivBound mode = DerivBound::Segment,
                                                         int samples = 257) {
  return detail::certify_zero_bound_impl(as_trig_sum(f), seg, nmax, mode, samples);
}

// Certifies the restriction of a 2D field to the chord of B_{2r}(p) along
// direction theta through p: an almost-periodic sum with frequencies
// j . (cos theta, sin theta), segment length 4r.
inline std::optional<ZeroCertificate> certify_on_line(const SpectralField& f, double px, double py,
                                                      double theta, double r, int nmax,
                                                      DerivBound mode = DerivBound::Segment) {
  if (!(r > 0.0 && 2.0 * r <= two_pi / 2.0))
    throw ConfigError("certify_on_line: need 0 < 2r <= pi");
  const TrigSum1D restricted = restrict_to_line(f, px, py, theta);
  return detail::certify_zero_bound_impl(restricted, Segment{0.0, 2.0 * r}, nmax, mode, 257);
}

}  // namespace nodalab
