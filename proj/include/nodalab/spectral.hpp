// Truncated Fourier representation of real periodic functions on the torus
// (side 2*pi, dimension 1 or 2) together with the spectral operators used
// throughout: synthesis/analysis, L2 norm, powers of -Laplace, Gevrey
// multipliers, gradients, dealiased products, and an l1 sup-norm bound.
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "nodalab/common.hpp"

namespace nodalab {

// Real band-limited function on T^d, d in {1,2}, stored as a dense block of
// Fourier coefficients over |j|_inf <= cutoff with u_{-j} = conj(u_j).
class SpectralField {
 public:
  SpectralField(int dim, int cutoff)
      : dim_(dim), cutoff_(cutoff) {
    if (dim != 1 && dim != 2) throw DimensionError("SpectralField: dim must be 1 or 2");
    if (cutoff < 1) throw ConfigError("SpectralField: cutoff must be >= 1");
    const std::size_t side = static_cast<std::size_t>(2 * cutoff + 1);
    coeff_.assign(dim == 1 ? side : side * side, cplx{0.0, 0.0});
  }

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  int side() const { return 2 * cutoff_ + 1; }
  std::span<const cplx> coeffs() const { return coeff_; }

  std::size_t index(int j1, int j2 = 0) const {
    return static_cast<std::size_t>(j1 + cutoff_) +
           (dim_ == 2 ? static_cast<std::size_t>(j2 + cutoff_) * static_cast<std::size_t>(side()) : 0u);
  }

  cplx at(int j1, int j2 = 0) const {
    if (std::abs(j1) > cutoff_ || std::abs(j2) > cutoff_) return {0.0, 0.0};
    return coeff_[index(j1, j2)];
  }

  void set(int j1, cplx v) { coeff_[index(j1, 0)] = v; }
  void set(int j1, int j2, cplx v) { coeff_[index(j1, j2)] = v; }

  // Sets u_j and u_{-j} = conj(u_j) together.
  void set_pair(int j1, cplx v) {
    set(j1, v);
    set(-j1, std::conj(v));
  }
  void set_pair(int j1, int j2, cplx v) {
    set(j1, j2, v);
    set(-j1, -j2, std::conj(v));
  }

  bool is_zero() const {
    for (const cplx& c : coeff_)
      if (c != cplx{0.0, 0.0}) return false;
    return true;
  }

  double max_coeff_abs() const {
    double m = 0.0;
    for (const cplx& c : coeff_) m = std::fmax(m, std::abs(c));
    return m;
  }

  // Largest Hermitian-symmetry defect |u_{-j} - conj(u_j)|.
  double hermitian_defect() const {
    double d = 0.0;
    const int J = cutoff_;
    for (int j2 = (dim_ == 2 ? -J : 0); j2 <= (dim_ == 2 ? J : 0); ++j2)
      for (int j1 = -J; j1 <= J; ++j1)
        d = std::fmax(d, std::abs(at(-j1, -j2) - std::conj(at(j1, j2))));
    return d;
  }

  // Averages each (j, -j) pair so the symmetry holds exactly.
  void enforce_hermitian() {
    const int J = cutoff_;
    for (int j2 = (dim_ == 2 ? -J : 0); j2 <= (dim_ == 2 ? J : 0); ++j2)
      for (int j1 = -J; j1 <= J; ++j1) {
        if (j1 < 0 || (j1 == 0 && j2 < 0)) continue;
        if (j1 == 0 && j2 == 0) {
          coeff_[index(0, 0)] = cplx{at(0, 0).real(), 0.0};
          continue;
        }
        const cplx a = at(j1, j2);
        const cplx b = at(-j1, -j2);
        const cplx v = 0.5 * (a + std::conj(b));
        coeff_[index(j1, j2)] = v;
        coeff_[index(-j1, -j2)] = std::conj(v);
      }
  }

 private:
  int dim_;
  int cutoff_;
  std::vector<cplx> coeff_;
};

// Real samples at x_k = 2*pi*k/N per axis (row-major k1 + N*k2 in 2D).
struct GridField {
  int dim = 1;
  int resolution = 0;
  std::vector<double> values;

  double at(int k1, int k2 = 0) const {
    return values[static_cast<std::size_t>(k1) +
                  (dim == 2 ? static_cast<std::size_t>(k2) * static_cast<std::size_t>(resolution) : 0u)];
  }
};

namespace detail {

inline std::vector<cplx> phase_table(int n) {
  std::vector<cplx> tab(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) tab[static_cast<std::size_t>(m)] = std::polar(1.0, two_pi * m / n);
  return tab;
}

inline int mod_index(long long jk, int n) {
  long long r = jk % n;
  if (r < 0) r += n;
  return static_cast<int>(r);
}

}  // namespace detail

// Synthesis onto an equispaced N-grid. Requires N >= 2*cutoff + 2 so the
// band is unambiguous on the grid.
inline GridField to_grid(const SpectralField& f, int n) {
  const int J = f.cutoff();
  if (n < 2 * J + 2)
    throw ResolutionError("to_grid: resolution " + std::to_string(n) + " too small for cutoff " +
                          std::to_string(J) + " (need >= " + std::to_string(2 * J + 2) + ")");
  const auto tab = detail::phase_table(n);
  GridField g;
  g.dim = f.dim();
  g.resolution = n;

  double max_imag = 0.0;
  if (f.dim() == 1) {
    std::vector<cplx> acc(static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (int j = -J; j <= J; ++j) {
      const cplx c = f.at(j);
      if (c == cplx{0.0, 0.0}) continue;
      for (int k = 0; k < n; ++k)
        acc[static_cast<std::size_t>(k)] += c * tab[static_cast<std::size_t>(detail::mod_index(1LL * j * k, n))];
    }
    g.values.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      max_imag = std::fmax(max_imag, std::fabs(acc[static_cast<std::size_t>(k)].imag()));
      g.values[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)].real();
    }
  } else {
    // Separable synthesis: first over j2 for every sample row, then over j1.
    const int side = f.side();
    std::vector<cplx> partial(static_cast<std::size_t>(side) * static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (int j1 = -J; j1 <= J; ++j1) {
      const std::size_t row = static_cast<std::size_t>(j1 + J) * static_cast<std::size_t>(n);
      for (int j2 = -J; j2 <= J; ++j2) {
        const cplx c = f.at(j1, j2);
        if (c == cplx{0.0, 0.0}) continue;
        for (int k2 = 0; k2 < n; ++k2)
          partial[row + static_cast<std::size_t>(k2)] +=
              c * tab[static_cast<std::size_t>(detail::mod_index(1LL * j2 * k2, n))];
      }
    }
    std::vector<cplx> acc(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), cplx{0.0, 0.0});
    for (int j1 = -J; j1 <= J; ++j1) {
      const std::size_t row = static_cast<std::size_t>(j1 + J) * static_cast<std::size_t>(n);
      for (int k1 = 0; k1 < n; ++k1) {
        const cplx ph = tab[static_cast<std::size_t>(detail::mod_index(1LL * j1 * k1, n))];
        for (int k2 = 0; k2 < n; ++k2)
          acc[static_cast<std::size_t>(k1) + static_cast<std::size_t>(k2) * static_cast<std::size_t>(n)] +=
              ph * partial[row + static_cast<std::size_t>(k2)];
      }
    }
    g.values.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
      max_imag = std::fmax(max_imag, std::fabs(acc[i].imag()));
      g.values[i] = acc[i].real();
    }
  }

  const double amp = f.max_coeff_abs();
  if (amp > 0.0 && max_imag > 1e-12 * amp * std::fmax(1.0, static_cast<double>(f.side())))
    throw Error("to_grid: imaginary residue " + std::to_string(max_imag) +
                " exceeds tolerance; coefficients not Hermitian-symmetric");
  return g;
}

// Analysis of real grid data back to a band of cutoff J. Exact inverse of
// to_grid on band-limited data when N >= 2J+2.
inline SpectralField from_grid(const GridField& g, int cutoff) {
  const int n = g.resolution;
  if (n < 2 * cutoff + 2)
    throw ResolutionError("from_grid: resolution " + std::to_string(n) + " too small for cutoff " +
                          std::to_string(cutoff));
  const auto tab = detail::phase_table(n);
  SpectralField f(g.dim, cutoff);
  const double inv_n = 1.0 / n;

  if (g.dim == 1) {
    for (int j = -cutoff; j <= cutoff; ++j) {
      cplx s{0.0, 0.0};
      for (int k = 0; k < n; ++k)
        s += g.values[static_cast<std::size_t>(k)] *
             std::conj(tab[static_cast<std::size_t>(detail::mod_index(1LL * j * k, n))]);
      f.set(j, s * inv_n);
    }
  } else {
    // Separable analysis over k2 first, then k1.
    std::vector<cplx> partial(static_cast<std::size_t>(2 * cutoff + 1) * static_cast<std::size_t>(n),
                              cplx{0.0, 0.0});
    for (int j2 = -cutoff; j2 <= cutoff; ++j2) {
      const std::size_t row = static_cast<std::size_t>(j2 + cutoff) * static_cast<std::size_t>(n);
      for (int k2 = 0; k2 < n; ++k2) {
        const cplx ph = std::conj(tab[static_cast<std::size_t>(detail::mod_index(1LL * j2 * k2, n))]);
        for (int k1 = 0; k1 < n; ++k1)
          partial[row + static_cast<std::size_t>(k1)] +=
              g.values[static_cast<std::size_t>(k1) + static_cast<std::size_t>(k2) * static_cast<std::size_t>(n)] * ph;
      }
    }
    const double inv_n2 = inv_n * inv_n;
    for (int j2 = -cutoff; j2 <= cutoff; ++j2) {
      const std::size_t row = static_cast<std::size_t>(j2 + cutoff) * static_cast<std::size_t>(n);
      for (int j1 = -cutoff; j1 <= cutoff; ++j1) {
        cplx s{0.0, 0.0};
        for (int k1 = 0; k1 < n; ++k1)
          s += partial[row + static_cast<std::size_t>(k1)] *
               std::conj(tab[static_cast<std::size_t>(detail::mod_index(1LL * j1 * k1, n))]);
        f.set(j1, j2, s * inv_n2);
      }
    }
  }
  f.enforce_hermitian();
  return f;
}

// sqrt((2*pi)^d * sum |u_j|^2), the L2(T^d) norm.
inline double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const cplx& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(std::pow(two_pi, f.dim()) * s);
}

namespace detail {

inline double mode_norm_sq(int j1, int j2) {
  return static_cast<double>(j1) * j1 + static_cast<double>(j2) * j2;
}

template <typename Fn>
void for_each_mode(const SpectralField& f, Fn&& fn) {
  const int J = f.cutoff();
  if (f.dim() == 1) {
    for (int j1 = -J; j1 <= J; ++j1) fn(j1, 0);
  } else {
    for (int j2 = -J; j2 <= J; ++j2)
      for (int j1 = -J; j1 <= J; ++j1) fn(j1, j2);
  }
}

}  // namespace detail

// u_j -> |j|^{2s} u_j (Euclidean |j|), the multiplier of (-Laplace)^s.
inline SpectralField apply_A_power(const SpectralField& f, double s) {
  if (s < 0.0) throw ConfigError("apply_A_power: exponent must be >= 0");
  SpectralField out(f.dim(), f.cutoff());
  detail::for_each_mode(f, [&](int j1, int j2) {
    const double jsq = detail::mode_norm_sq(j1, j2);
    double factor;
    if (jsq == 0.0)
      factor = (s == 0.0) ? 1.0 : 0.0;
    else
      factor = std::pow(jsq, s);
    out.set(j1, j2, factor * f.at(j1, j2));
  });
  return out;
}

// Exponent tau*|j|^beta of the Gevrey multiplier, computed once so callers
// and tests share the exact arithmetic.
inline double gevrey_exponent(double tau, double beta, int j1, int j2 = 0) {
  const double jn = std::sqrt(detail::mode_norm_sq(j1, j2));
  if (jn == 0.0) return 0.0;
  return tau * (beta == 1.0 ? jn : std::pow(jn, beta));
}

// u_j -> exp(tau*|j|^beta) u_j. Exponents are capped at exp_arg_cap.
inline SpectralField apply_gevrey_multiplier(const SpectralField& f, double tau, double beta) {
  if (tau < 0.0) throw ConfigError("apply_gevrey_multiplier: tau must be >= 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("apply_gevrey_multiplier: beta must lie in (0,1]");
  SpectralField out(f.dim(), f.cutoff());
  detail::for_each_mode(f, [&](int j1, int j2) {
    const double e = gevrey_exponent(tau, beta, j1, j2);
    if (e > exp_arg_cap)
      throw OverflowError("apply_gevrey_multiplier: exponent " + std::to_string(e) + " at mode (" +
                          std::to_string(j1) + (f.dim() == 2 ? "," + std::to_string(j2) : "") +
                          ") exceeds cap " + std::to_string(exp_arg_cap));
    out.set(j1, j2, std::exp(e) * f.at(j1, j2));
  });
  return out;
}

// Componentwise spectral derivative: component k has coefficients i*j_k*u_j.
inline std::vector<SpectralField> gradient(const SpectralField& f) {
  std::vector<SpectralField> comps;
  for (int axis = 0; axis < f.dim(); ++axis) {
    SpectralField g(f.dim(), f.cutoff());
    detail::for_each_mode(f, [&](int j1, int j2) {
      const double jk = (axis == 0) ? j1 : j2;
      g.set(j1, j2, cplx{0.0, jk} * f.at(j1, j2));
    });
    comps.push_back(std::move(g));
  }
  return comps;
}

// Exact truncated product via an oversampled grid. The output band is
// max(Jf, Jg); sampling at Jf + Jg + Jout + 1 points per axis pushes every
// aliased mode of the full product outside the retained band, so the result
// equals the exact convolution truncated to |j|_inf <= Jout (2/3-style rule).
inline SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  if (f.dim() != g.dim()) throw DimensionError("pointwise_product: dimension mismatch");
  const int j_out = std::max(f.cutoff(), g.cutoff());
  const int n = f.cutoff() + g.cutoff() + j_out + 1;
  const GridField fg = to_grid(f, n);
  const GridField gg = to_grid(g, n);
  GridField prod;
  prod.dim = f.dim();
  prod.resolution = n;
  prod.values.resize(fg.values.size());
  for (std::size_t i = 0; i < fg.values.size(); ++i) prod.values[i] = fg.values[i] * gg.values[i];
  return from_grid(prod, j_out);
}

// Re-bands a field: truncates or zero-pads to the requested cutoff.
inline SpectralField resample(const SpectralField& f, int cutoff) {
  SpectralField out(f.dim(), cutoff);
  const int J = std::min(cutoff, f.cutoff());
  for (int j2 = (f.dim() == 2 ? -J : 0); j2 <= (f.dim() == 2 ? J : 0); ++j2)
    for (int j1 = -J; j1 <= J; ++j1) out.set(j1, j2, f.at(j1, j2));
  return out;
}

// f + a*g on the union band.
inline SpectralField add_scaled(const SpectralField& f, double a, const SpectralField& g) {
  if (f.dim() != g.dim()) throw DimensionError("add_scaled: dimension mismatch");
  const int J = std::max(f.cutoff(), g.cutoff());
  SpectralField out(f.dim(), J);
  for (int j2 = (f.dim() == 2 ? -J : 0); j2 <= (f.dim() == 2 ? J : 0); ++j2)
    for (int j1 = -J; j1 <= J; ++j1) out.set(j1, j2, f.at(j1, j2) + a * g.at(j1, j2));
  return out;
}

// sum_j |u_j|: an upper bound for the sup norm, tight for single-sign modes.
inline double sobolev_linf_bound(const SpectralField& f) {
  double s = 0.0;
  for (const cplx& c : f.coeffs()) s += std::abs(c);
  return s;
}

// Point evaluation u(x) (dim 1) by direct phasor summation.
inline double eval(const SpectralField& f, double x) {
  if (f.dim() != 1) throw DimensionError("eval: expected dim-1 field");
  const int J = f.cutoff();
  cplx s{0.0, 0.0};
  for (int j = -J; j <= J; ++j) {
    const cplx c = f.at(j);
    if (c == cplx{0.0, 0.0}) continue;
    s += c * std::polar(1.0, j * x);
  }
  return s.real();
}

// Point evaluation u(x, y) (dim 2).
inline double eval(const SpectralField& f, double x, double y) {
  if (f.dim() != 2) throw DimensionError("eval: expected dim-2 field");
  const int J = f.cutoff();
  cplx s{0.0, 0.0};
  for (int j2 = -J; j2 <= J; ++j2)
    for (int j1 = -J; j1 <= J; ++j1) {
      const cplx c = f.at(j1, j2);
      if (c == cplx{0.0, 0.0}) continue;
      s += c * std::polar(1.0, j1 * x + j2 * y);
    }
  return s.real();
}

}  // namespace nodalab
