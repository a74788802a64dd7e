// Extraction and measurement of nodal sets: certified-resolution zero
// location in 1D, marching-squares contour length in 2D, line restrictions,
// probe-line crossing counts, and local L2 mass ratios on balls.
#pragma once

#include <vector>

#include "nodalab/spectral.hpp"
#include "nodalab/trig_sum.hpp"

namespace nodalab {

struct NodalSet1D {
  std::vector<double> zeros;     // sorted locations in [0, 2*pi)
  int count = 0;                 // sign-change zeros only
  double tolerance = 1e-12;      // bisection width
  std::vector<double> suspects;  // near-zero grid points without a sign change
};

// Locates sign changes on an oversample*J grid and refines each bracket by
// bisection. Tangential near-zeros (|u| below 1e-8 * sup with no bracket)
// are reported separately, not counted.
inline NodalSet1D zeros_1d(const SpectralField& f, int oversample) {
  if (f.dim() != 1) throw DimensionError("zeros_1d: expected dim-1 field");
  if (f.is_zero()) throw ConfigError("zeros_1d: field is identically zero");
  if (oversample < 1) throw ConfigError("zeros_1d: oversample must be >= 1");
  const int J = f.cutoff();
  const int n = std::max(oversample * J, 2 * J + 2);
  const GridField g = to_grid(f, n);
  const double sup = sobolev_linf_bound(f);
  const double h = two_pi / n;

  NodalSet1D out;
  std::vector<bool> in_bracket(static_cast<std::size_t>(n), false);
  std::vector<bool> tangential(static_cast<std::size_t>(n), false);
  // Nearest nonzero neighbor value in the given direction (cyclic).
  const auto nonzero_neighbor = [&](int k, int dir) {
    for (int s = 1; s < n; ++s) {
      const double v = g.values[static_cast<std::size_t>(((k + dir * s) % n + n) % n)];
      if (v != 0.0) return v;
    }
    return 0.0;
  };
  for (int k = 0; k < n; ++k) {
    const double a = g.values[static_cast<std::size_t>(k)];
    const double b = g.values[static_cast<std::size_t>((k + 1) % n)];
    if (a == 0.0) {
      // Exact grid hit; transversal when the surrounding signs differ,
      // otherwise a tangency that only the suspect list may report.
      in_bracket[static_cast<std::size_t>(k)] = true;
      if (nonzero_neighbor(k, -1) * nonzero_neighbor(k, +1) < 0.0) {
        if (out.zeros.empty() || h * k - out.zeros.back() > 1e-9) out.zeros.push_back(h * k);
      } else {
        tangential[static_cast<std::size_t>(k)] = true;
      }
      continue;
    }
    if (!(a * b < 0.0)) continue;
    in_bracket[static_cast<std::size_t>(k)] = true;
    in_bracket[static_cast<std::size_t>((k + 1) % n)] = true;
    double lo = h * k, hi = h * (k + 1);
    double va = a;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const double vm = eval(f, mid);
      if (vm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((va < 0.0) == (vm < 0.0)) {
        lo = mid;
        va = vm;
      } else {
        hi = mid;
      }
    }
    const double z = 0.5 * (lo + hi);
    if (out.zeros.empty() || z - out.zeros.back() > 1e-9) out.zeros.push_back(z);
  }
  // Wraparound dedup: last zero vs first plus a period.
  if (out.zeros.size() > 1 && (out.zeros.front() + two_pi) - out.zeros.back() <= 1e-9) out.zeros.pop_back();
  out.count = static_cast<int>(out.zeros.size());

  for (int k = 0; k < n; ++k) {
    const double v = g.values[static_cast<std::size_t>(k)];
    if (tangential[static_cast<std::size_t>(k)]) {
      out.suspects.push_back(h * k);
      continue;
    }
    if (v == 0.0 || std::fabs(v) >= 1e-8 * sup) continue;
    if (in_bracket[static_cast<std::size_t>(k)]) continue;
    if (in_bracket[static_cast<std::size_t>((k + n - 1) % n)]) continue;
    out.suspects.push_back(h * k);
  }
  return out;
}

struct CurveSegment {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
  double length() const { return std::hypot(x2 - x1, y2 - y1); }
};

struct NodalCurve2D {
  std::vector<CurveSegment> segments;  // pieces extracted at `resolution`
  double total_length = 0.0;           // at `resolution`
  double refined_length = 0.0;         // at 2 * `resolution` (Richardson pair)
  int resolution = 0;
  // Degeneracy flag: min |grad u| over extracted endpoints against the sup
  // bound. Lengths near critical points are trustworthy only when the
  // gradient stays off the floor.
  double min_gradient = 0.0;
  bool gradient_floor_ok = true;  // min_gradient >= 1e-3 * sup bound
};

namespace detail {

inline std::vector<CurveSegment> marching_squares(const GridField& g) {
  const int n = g.resolution;
  const double h = two_pi / n;
  std::vector<CurveSegment> segs;

  const auto positive = [](double v) { return v > 0.0; };
  for (int k = 0; k < n; ++k) {
    const int kp = (k + 1) % n;
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const double v00 = g.at(i, k), v10 = g.at(ip, k), v11 = g.at(ip, kp), v01 = g.at(i, kp);
      const bool c0 = positive(v00), c1 = positive(v10), c2 = positive(v11), c3 = positive(v01);
      const int idx = (c0 ? 1 : 0) | (c1 ? 2 : 0) | (c2 ? 4 : 0) | (c3 ? 8 : 0);
      if (idx == 0 || idx == 15) continue;

      // Linear crossing positions on the four cell edges (cell-local coords).
      const auto cut = [](double a, double b) { return a / (a - b); };
      struct Pt {
        double x, y;
      };
      const Pt bottom{i + cut(v00, v10), static_cast<double>(k)};
      const Pt right{static_cast<double>(i + 1), k + cut(v10, v11)};
      const Pt top{i + cut(v01, v11), static_cast<double>(k + 1)};
      const Pt left{static_cast<double>(i), k + cut(v00, v01)};

      const auto emit = [&](const Pt& a, const Pt& b) {
        segs.push_back({a.x * h, a.y * h, b.x * h, b.y * h});
      };

      switch (idx) {
        case 1: case 14: emit(left, bottom); break;
        case 2: case 13: emit(bottom, right); break;
        case 3: case 12: emit(left, right); break;
        case 4: case 11: emit(right, top); break;
        case 6: case 9:  emit(bottom, top); break;
        case 7: case 8:  emit(left, top); break;
        case 5: {  // corners 00 and 11 positive: saddle, split by center sign
          const double center = 0.25 * (v00 + v10 + v01 + v11);
          if (center > 0.0) {
            emit(bottom, right);
            emit(left, top);
          } else {
            emit(left, bottom);
            emit(right, top);
          }
          break;
        }
        case 10: {  // corners 10 and 01 positive
          const double center = 0.25 * (v00 + v10 + v01 + v11);
          if (center > 0.0) {
            emit(left, bottom);
            emit(right, top);
          } else {
            emit(bottom, right);
            emit(left, top);
          }
          break;
        }
        default: break;
      }
    }
  }
  return segs;
}

inline double polyline_length(const std::vector<CurveSegment>& segs) {
  double s = 0.0;
  for (const auto& seg : segs) s += seg.length();
  return s;
}

}  // namespace detail

// Marching squares at N with linear edge interpolation; saddle cells are
// resolved by the bilinear cell-center sign. The length at 2N is computed as
// well so callers get a Richardson convergence pair.
inline NodalCurve2D nodal_length_2d(const SpectralField& f, int n) {
  if (f.dim() != 2) throw DimensionError("nodal_length_2d: expected dim-2 field");
  if (n < 4 * f.cutoff())
    throw ResolutionError("nodal_length_2d: resolution " + std::to_string(n) + " below 4*J");
  NodalCurve2D out;
  out.resolution = n;
  out.segments = detail::marching_squares(to_grid(f, n));
  out.total_length = detail::polyline_length(out.segments);
  out.refined_length = detail::polyline_length(detail::marching_squares(to_grid(f, 2 * n)));
  if (!out.segments.empty()) {
    const auto grad = gradient(f);
    double min_grad = std::numeric_limits<double>::infinity();
    for (const CurveSegment& s : out.segments)
      min_grad = std::fmin(min_grad, std::hypot(eval(grad[0], s.x1, s.y1), eval(grad[1], s.x1, s.y1)));
    out.min_gradient = min_grad;
    out.gradient_floor_ok = min_grad >= 1e-3 * sobolev_linf_bound(f);
  }
  return out;
}

struct LineRestriction {
  std::vector<double> s;      // arclength parameters, centered at the probe
  std::vector<double> value;  // u along the line
};

// Exact trigonometric evaluation of u along the segment through p with
// direction (cos theta, sin theta), |s| <= halflen.
inline LineRestriction line_restriction(const SpectralField& f, double px, double py, double theta,
                                        double halflen, int samples) {
  if (samples < 2) throw ConfigError("line_restriction: need at least 2 samples");
  const TrigSum1D restricted = restrict_to_line(f, px, py, theta);
  LineRestriction out;
  const double ds = 2.0 * halflen / (samples - 1);
  out.value = restricted.sample(-halflen, ds, samples);
  out.s.resize(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) out.s[static_cast<std::size_t>(i)] = -halflen + ds * i;
  return out;
}

struct ProbePoint {
  double x = 0.0, y = 0.0;
};

// The 2d probe points p_j in B_{r/10d}(p + r e_j), j = +-1..+-d.
struct ProbePointSet {
  std::vector<ProbePoint> points;
  ProbePoint center;
  double radius = 0.0;
  int dim = 2;
};

inline ProbePointSet make_probe_set(ProbePoint center, double r, int dim,
                                    const std::vector<ProbePoint>& offsets = {}) {
  if (dim != 1 && dim != 2) throw DimensionError("make_probe_set: dim must be 1 or 2");
  if (!(r > 0.0)) throw ConfigError("make_probe_set: radius must be positive");
  ProbePointSet set;
  set.center = center;
  set.radius = r;
  set.dim = dim;
  const double wiggle_cap = r / (10.0 * dim);
  int axis_dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (int k = 0; k < 2 * dim; ++k) {
    ProbePoint p{center.x + r * axis_dirs[k][0], center.y + r * axis_dirs[k][1]};
    if (!offsets.empty()) {
      const ProbePoint& o = offsets[static_cast<std::size_t>(k) % offsets.size()];
      if (std::hypot(o.x, o.y) > wiggle_cap) throw ConfigError("make_probe_set: offset outside B_{r/10d}");
      p.x += o.x;
      p.y += o.y;
    }
    set.points.push_back(p);
  }
  return set;
}

// Maximum number of crossings of the polyline with any of `angles` equispaced
// lines through any probe point, each line clipped to the chord inside
// B_{2r}(center). A sampled lower bound for the true per-line maximum.
inline int max_line_intersections(const NodalCurve2D& curve, const ProbePointSet& probes, int angles) {
  if (angles < 64) throw ConfigError("max_line_intersections: need at least 64 angles");
  if (curve.segments.empty()) return 0;
  const double ball = 2.0 * probes.radius;
  int best = 0;
  for (const ProbePoint& q : probes.points) {
    for (int m = 0; m < angles; ++m) {
      const double theta = (two_pi / 2.0) * m / angles;  // unoriented lines: [0, pi)
      const double tx = std::cos(theta), ty = std::sin(theta);
      const double nx = -ty, ny = tx;
      // Chord of B_{2r}(center) along this line: |q + s tau - c|^2 <= (2r)^2.
      const double qx = q.x - probes.center.x, qy = q.y - probes.center.y;
      const double b = qx * tx + qy * ty;
      const double c = qx * qx + qy * qy - ball * ball;
      const double disc = b * b - c;
      if (disc <= 0.0) continue;
      const double s_lo = -b - std::sqrt(disc), s_hi = -b + std::sqrt(disc);

      int hits = 0;
      for (const CurveSegment& seg : curve.segments) {
        const double da = (seg.x1 - q.x) * nx + (seg.y1 - q.y) * ny;
        const double db = (seg.x2 - q.x) * nx + (seg.y2 - q.y) * ny;
        if (!((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0))) continue;
        const double t = da / (da - db);
        const double ix = seg.x1 + t * (seg.x2 - seg.x1) - q.x;
        const double iy = seg.y1 + t * (seg.y2 - seg.y1) - q.y;
        const double s = ix * tx + iy * ty;
        if (s >= s_lo && s <= s_hi) ++hits;
      }
      best = std::max(best, hits);
    }
  }
  return best;
}

// C * n * r^{d-1}: the measure bound for a set with at most n crossings per
// probe line inside a ball of radius r.
inline double crossing_length_bound(int n, double r, int dim, double c) {
  if (n < 0 || !(r > 0.0) || !(c > 0.0) || dim < 1) throw ConfigError("crossing_length_bound: bad inputs");
  return c * n * std::pow(r, dim - 1);
}

struct LocalL2Ratio {
  double value = 0.0;    // at resolution N
  double refined = 0.0;  // at 2N (Richardson pair)
};

namespace detail {

inline double wrapped_delta(double x, double p) {
  double d = std::fabs(x - p);
  d = std::fmod(d, two_pi);
  return std::fmin(d, two_pi - d);
}

inline double ball_mass(const SpectralField& f, double px, double py, double r, int n) {
  const GridField g = to_grid(f, n);
  const double h = two_pi / n;
  double sum = 0.0;
  if (f.dim() == 1) {
    // Exact interval clipping: weight each cell by its overlap with the ball.
    for (int k = 0; k < n; ++k) {
      const double d = wrapped_delta(h * k, px);
      const double overlap = std::fmin(r, d + 0.5 * h) - std::fmax(-r, d - 0.5 * h);
      if (overlap <= 0.0) continue;
      const double v = g.values[static_cast<std::size_t>(k)];
      sum += v * v * std::fmin(overlap, h);
    }
  } else {
    // Midpoint rule masked to the ball; O(h) boundary error, hence the pair.
    const double r2 = r * r;
    for (int k2 = 0; k2 < n; ++k2) {
      const double dy = wrapped_delta(h * k2, py);
      if (dy > r) continue;
      for (int k1 = 0; k1 < n; ++k1) {
        const double dx = wrapped_delta(h * k1, px);
        if (dx * dx + dy * dy > r2) continue;
        const double v = g.at(k1, k2);
        sum += v * v * h * h;
      }
    }
  }
  return sum;
}

}  // namespace detail

// ||u||^2_{L2(T^d)} / ||u||^2_{L2(B_r(p))} with the ball integral by midpoint
// quadrature at N and 2N.
inline LocalL2Ratio local_l2_ratio(const SpectralField& f, double px, double py, double r, int n) {
  if (!(r > 0.0 && r <= 1.0)) throw ConfigError("local_l2_ratio: r must lie in (0, 1]");
  const double global = l2_norm(f);
  LocalL2Ratio out;
  const double m1 = detail::ball_mass(f, px, py, r, n);
  const double m2 = detail::ball_mass(f, px, py, r, 2 * n);
  if (m1 < 1e-300 || m2 < 1e-300)
    throw VanishingError("local_l2_ratio: ball integral effectively vanishes");
  out.value = global * global / m1;
  out.refined = global * global / m2;
  return out;
}

}  // namespace nodalab
