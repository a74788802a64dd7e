// One-dimensional trigonometric sums with arbitrary real frequencies: the
// common representation for torus fields seen along a line. A restriction of
// a bivariate trigonometric polynomial to a line is almost periodic, so the
// frequency list is kept explicit instead of assuming integer modes.
#pragma once

#include <vector>

#include "nodalab/spectral.hpp"

namespace nodalab {

struct TrigSum1D {
  std::vector<double> freq;
  std::vector<cplx> coeff;

  double eval(double s) const {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < freq.size(); ++i) acc += coeff[i] * std::polar(1.0, freq[i] * s);
    return acc.real();
  }

  // Equispaced samples via per-mode phase rotation; O(modes) per sample with
  // no trig calls in the inner loop.
  std::vector<double> sample(double s0, double ds, int count) const {
    std::vector<cplx> phase(freq.size()), rot(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) {
      phase[i] = coeff[i] * std::polar(1.0, freq[i] * s0);
      rot[i] = std::polar(1.0, freq[i] * ds);
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      cplx acc{0.0, 0.0};
      for (std::size_t i = 0; i < freq.size(); ++i) {
        acc += phase[i];
        phase[i] *= rot[i];
      }
      out[static_cast<std::size_t>(k)] = acc.real();
    }
    return out;
  }

  bool all_zero() const {
    for (const cplx& c : coeff)
      if (c != cplx{0.0, 0.0}) return false;
    return true;
  }
};

inline TrigSum1D as_trig_sum(const SpectralField& f) {
  if (f.dim() != 1) throw DimensionError("as_trig_sum: expected dim-1 field");
  TrigSum1D s;
  const int J = f.cutoff();
  for (int j = -J; j <= J; ++j) {
    const cplx c = f.at(j);
    if (c == cplx{0.0, 0.0}) continue;
    s.freq.push_back(static_cast<double>(j));
    s.coeff.push_back(c);
  }
  return s;
}

// u restricted to the line through (px, py) with direction (cos theta,
// sin theta): frequencies j . tau, coefficients u_j e^{i j.p}.
inline TrigSum1D restrict_to_line(const SpectralField& f, double px, double py, double theta) {
  if (f.dim() != 2) throw DimensionError("restrict_to_line: expected dim-2 field");
  TrigSum1D s;
  const double cx = std::cos(theta), cy = std::sin(theta);
  const int J = f.cutoff();
  for (int j2 = -J; j2 <= J; ++j2)
    for (int j1 = -J; j1 <= J; ++j1) {
      const cplx c = f.at(j1, j2);
      if (c == cplx{0.0, 0.0}) continue;
      s.freq.push_back(j1 * cx + j2 * cy);
      s.coeff.push_back(c * std::polar(1.0, j1 * px + j2 * py));
    }
  return s;
}

}  // namespace nodalab
