#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nodalab/spectral.hpp"
#include "oracles.hpp"

using namespace nodalab;

namespace {

SpectralField make_sin(int k, int cutoff = 0) {
  SpectralField f(1, cutoff > 0 ? cutoff : k);
  f.set_pair(k, cplx{0.0, -0.5});  // sin(kx) = (e^{ikx} - e^{-ikx}) / (2i)
  return f;
}

SpectralField make_cos(int k, int cutoff = 0) {
  SpectralField f(1, cutoff > 0 ? cutoff : k);
  f.set_pair(k, cplx{0.5, 0.0});
  return f;
}

}  // namespace

TEST_CASE("to_grid synthesizes a single cosine mode") {
  SpectralField f(1, 1);
  f.set_pair(1, cplx{0.5, 0.0});
  const GridField g = to_grid(f, 8);
  for (int k = 0; k < 8; ++k)
    CHECK(g.at(k) == doctest::Approx(std::cos(two_pi * k / 8)).epsilon(1e-13));
}

TEST_CASE("to_grid of the zero field is zero") {
  SpectralField f(1, 3);
  const GridField g = to_grid(f, 16);
  for (double v : g.values) CHECK(v == 0.0);
}

TEST_CASE("to_grid matches direct evaluation for sin(3x)") {
  const SpectralField f = make_sin(3);
  const GridField g = to_grid(f, 16);
  for (int k = 0; k < 16; ++k) {
    const double x = two_pi * k / 16;
    CHECK(std::fabs(g.at(k) - std::sin(3 * x)) < 1e-12);
  }
}

TEST_CASE("to_grid rejects too-small resolutions") {
  const SpectralField f = make_sin(3);
  CHECK_THROWS_AS(to_grid(f, 7), ResolutionError);
}

TEST_CASE("from_grid recovers cos(2x)") {
  GridField g;
  g.dim = 1;
  g.resolution = 16;
  g.values.resize(16);
  for (int k = 0; k < 16; ++k) g.values[k] = std::cos(2.0 * two_pi * k / 16);
  const SpectralField f = from_grid(g, 4);
  for (int j = -4; j <= 4; ++j) {
    if (std::abs(j) == 2)
      CHECK(std::abs(f.at(j) - cplx{0.5, 0.0}) < 1e-13);
    else
      CHECK(std::abs(f.at(j)) < 1e-13);
  }
}

TEST_CASE("from_grid of a constant grid is the mean mode") {
  GridField g;
  g.dim = 1;
  g.resolution = 8;
  g.values.assign(8, 2.75);
  const SpectralField f = from_grid(g, 2);
  CHECK(std::abs(f.at(0) - cplx{2.75, 0.0}) < 1e-14);
  for (int j = 1; j <= 2; ++j) {
    CHECK(std::abs(f.at(j)) < 1e-14);
    CHECK(std::abs(f.at(-j)) < 1e-14);
  }
}

TEST_CASE("round-trip to_grid/from_grid is the identity on band-limited data") {
  for (int dim : {1, 2}) {
    const int J = dim == 1 ? 12 : 6;
    const SpectralField f = oracle::random_field(dim, J, 42 + dim);
    const SpectralField back = from_grid(to_grid(f, 2 * J + 2), J);
    double err = 0.0;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i)
      err = std::fmax(err, std::abs(f.coeffs()[i] - back.coeffs()[i]));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("l2_norm closed forms") {
  SpectralField one(1, 1);
  one.set(0, cplx{1.0, 0.0});
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-14));

  CHECK(l2_norm(make_sin(3)) == doctest::Approx(std::sqrt(two_pi / 2)).epsilon(1e-14));

  // sin(3x) viewed on the 2-torus: integral of sin^2 over both axes is 2 pi^2.
  SpectralField f2(2, 3);
  f2.set_pair(3, 0, cplx{0.0, -0.5});
  CHECK(l2_norm(f2) == doctest::Approx(std::sqrt(2.0 * std::pow(two_pi / 2, 2))).epsilon(1e-14));
}

TEST_CASE("l2_norm agrees with grid quadrature") {
  for (int dim : {1, 2}) {
    const int J = dim == 1 ? 10 : 5;
    const SpectralField f = oracle::random_field(dim, J, 7 * dim + 1);
    const int n = 4 * J + 2;
    const GridField g = to_grid(f, n);
    double sum = 0.0;
    for (double v : g.values) sum += v * v;
    const double quad = std::sqrt(sum * std::pow(two_pi / n, dim));
    CHECK(l2_norm(f) == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("apply_A_power multiplies by |j|^{2s}") {
  const SpectralField f = make_sin(3);
  const SpectralField lap = apply_A_power(f, 1.0);
  CHECK(std::abs(lap.at(3) - 9.0 * f.at(3)) < 1e-14);

  SpectralField f2(2, 4);
  f2.set_pair(3, 4, cplx{0.25, 0.1});
  const SpectralField half = apply_A_power(f2, 0.5);
  CHECK(std::abs(half.at(3, 4) - 5.0 * f2.at(3, 4)) < 1e-13);

  // s = 0 is the identity, including the mean mode.
  SpectralField c(1, 2);
  c.set(0, cplx{1.5, 0.0});
  CHECK(apply_A_power(c, 0.0).at(0) == cplx{1.5, 0.0});
}

TEST_CASE("Dirichlet identity via direct summation") {
  const SpectralField f = oracle::random_field(1, 16, 11);
  const SpectralField rt = apply_A_power(f, 0.5);
  double direct = 0.0;
  for (int j = -16; j <= 16; ++j) direct += static_cast<double>(j) * j * std::norm(f.at(j));
  direct *= two_pi;
  CHECK(l2_norm(rt) * l2_norm(rt) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("Gevrey multiplier scalar factors") {
  const SpectralField f = make_cos(2);
  const SpectralField g = apply_gevrey_multiplier(f, 0.5, 1.0);
  CHECK(std::abs(g.at(2) / f.at(2) - std::exp(1.0)) < 1e-13);

  const SpectralField id = apply_gevrey_multiplier(f, 0.0, 1.0);
  CHECK(id.at(2) == f.at(2));

  SpectralField f2(2, 4);
  f2.set_pair(3, 4, cplx{1.0, 0.0});
  const SpectralField g2 = apply_gevrey_multiplier(f2, 0.1, 0.5);
  CHECK(std::abs(g2.at(3, 4) / f2.at(3, 4) - std::exp(0.1 * std::sqrt(5.0))) < 1e-13);
}

TEST_CASE("Gevrey multiplier overflow guard names the mode") {
  const SpectralField f = oracle::random_field(1, 32, 3);
  CHECK_THROWS_AS(apply_gevrey_multiplier(f, 30.0, 1.0), OverflowError);
  try {
    apply_gevrey_multiplier(f, 30.0, 1.0);
  } catch (const OverflowError& e) {
    CHECK(std::string(e.what()).find("mode") != std::string::npos);
  }
}

TEST_CASE("Gevrey exponents add: tau1 + tau2 composition") {
  const SpectralField f = oracle::random_field(1, 20, 5);
  const double t1 = 0.07, t2 = 0.11, beta = 0.6;
  const SpectralField once = apply_gevrey_multiplier(f, t1 + t2, beta);
  const SpectralField twice = apply_gevrey_multiplier(apply_gevrey_multiplier(f, t1, beta), t2, beta);
  for (int j = -20; j <= 20; ++j) {
    const double e_once = gevrey_exponent(t1 + t2, beta, j);
    const double e_sum = gevrey_exponent(t1, beta, j) + gevrey_exponent(t2, beta, j);
    CHECK(std::fabs(e_once - e_sum) <= 1e-12 * std::fmax(1.0, std::fabs(e_once)));
    CHECK(std::abs(once.at(j) - twice.at(j)) <= 1e-12 * std::abs(once.at(j)) + 1e-300);
  }
}

TEST_CASE("diagonal operators commute with the Gevrey multiplier") {
  const SpectralField f = oracle::random_field(2, 5, 9);
  const double tau = 0.2, beta = 0.8;
  const auto grad_then = apply_gevrey_multiplier(gradient(f)[1], tau, beta);
  const auto then_grad = gradient(apply_gevrey_multiplier(f, tau, beta))[1];
  const auto pow_then = apply_gevrey_multiplier(apply_A_power(f, 1.0), tau, beta);
  const auto then_pow = apply_A_power(apply_gevrey_multiplier(f, tau, beta), 1.0);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    CHECK(std::abs(grad_then.coeffs()[i] - then_grad.coeffs()[i]) <=
          1e-12 * std::abs(grad_then.coeffs()[i]) + 1e-300);
    CHECK(std::abs(pow_then.coeffs()[i] - then_pow.coeffs()[i]) <=
          1e-12 * std::abs(pow_then.coeffs()[i]) + 1e-300);
  }
}

TEST_CASE("gradient closed forms") {
  const SpectralField s3 = make_sin(3);
  const auto ds3 = gradient(s3);
  REQUIRE(ds3.size() == 1);
  // d/dx sin(3x) = 3 cos(3x)
  CHECK(std::abs(ds3[0].at(3) - cplx{1.5, 0.0}) < 1e-14);

  SpectralField c(1, 1);
  c.set(0, cplx{4.0, 0.0});
  CHECK(gradient(c)[0].is_zero());

  // d/dy cos(x + 2y) = -2 sin(x + 2y)
  SpectralField f2(2, 2);
  f2.set_pair(1, 2, cplx{0.5, 0.0});
  const auto dy = gradient(f2)[1];
  const int n = 12;
  const GridField g = to_grid(dy, n);
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      const double x = two_pi * k1 / n, y = two_pi * k2 / n;
      CHECK(std::fabs(g.at(k1, k2) + 2.0 * std::sin(x + 2 * y)) < 1e-12);
    }
}

TEST_CASE("pointwise_product closed forms") {
  const SpectralField s = make_sin(1, 2);
  const SpectralField p = pointwise_product(s, s);
  // sin^2 = 1/2 - cos(2x)/2
  CHECK(std::abs(p.at(0) - cplx{0.5, 0.0}) < 1e-13);
  CHECK(std::abs(p.at(2) - cplx{-0.25, 0.0}) < 1e-13);
  CHECK(std::abs(p.at(1)) < 1e-13);

  SpectralField one(1, 2);
  one.set(0, cplx{1.0, 0.0});
  const SpectralField f = oracle::random_field(1, 2, 21);
  const SpectralField q = pointwise_product(f, one);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i)
    CHECK(std::abs(q.coeffs()[i] - f.coeffs()[i]) < 1e-13);
}

TEST_CASE("dealiased product equals brute-force convolution") {
  for (int dim : {1, 2}) {
    for (unsigned seed = 0; seed < (dim == 1 ? 8u : 4u); ++seed) {
      const int J = dim == 1 ? 8 : 6;
      const SpectralField f = oracle::random_field(dim, J, 100 + seed);
      const SpectralField g = oracle::random_field(dim, J, 200 + seed);
      const SpectralField fast = pointwise_product(f, g);
      const SpectralField slow = oracle::convolve_truncated(f, g);
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < fast.coeffs().size(); ++i) {
        err = std::fmax(err, std::abs(fast.coeffs()[i] - slow.coeffs()[i]));
        scale = std::fmax(scale, std::abs(slow.coeffs()[i]));
      }
      CHECK(err < 1e-12 * std::fmax(1.0, scale));
    }
  }
}

TEST_CASE("dealiased product handles mixed bands exactly") {
  const SpectralField f = oracle::random_field(1, 4, 501);
  const SpectralField g = oracle::random_field(1, 11, 502);
  const SpectralField fast = pointwise_product(f, g);
  const SpectralField slow = oracle::convolve_truncated(f, g);
  CHECK(fast.cutoff() == 11);
  double err = 0.0;
  for (std::size_t i = 0; i < fast.coeffs().size(); ++i)
    err = std::fmax(err, std::abs(fast.coeffs()[i] - slow.coeffs()[i]));
  CHECK(err < 1e-12 * std::fmax(1.0, slow.max_coeff_abs()));
}

TEST_CASE("pointwise_product rejects mixed dimensions") {
  const SpectralField a = oracle::random_field(1, 3, 1);
  const SpectralField b = oracle::random_field(2, 3, 2);
  CHECK_THROWS_AS(pointwise_product(a, b), DimensionError);
}

TEST_CASE("sobolev_linf_bound dominates dense grid maxima") {
  SpectralField two_cos(1, 1);
  two_cos.set_pair(1, cplx{1.0, 0.0});
  CHECK(sobolev_linf_bound(two_cos) == doctest::Approx(2.0));
  CHECK(sobolev_linf_bound(make_sin(3)) == doctest::Approx(1.0));

  for (unsigned seed = 0; seed < 10; ++seed) {
    const SpectralField f = oracle::random_field(1, 12, 300 + seed);
    CHECK(sobolev_linf_bound(f) >= oracle::max_abs_on_grid(f, 8 * 12));
  }
  const SpectralField f2 = oracle::random_field(2, 5, 77);
  CHECK(sobolev_linf_bound(f2) >= oracle::max_abs_on_grid(f2, 8 * 5));
}

TEST_CASE("Parseval against quadrature on random fields") {
  for (unsigned seed = 0; seed < 6; ++seed) {
    const SpectralField f = oracle::random_field(1, 24, 400 + seed);
    double sum = 0.0;
    for (const cplx& c : f.coeffs()) sum += std::norm(c);
    const double direct = two_pi * sum;
    const double n2 = l2_norm(f) * l2_norm(f);
    CHECK(std::fabs(n2 - direct) <= 1e-10 * n2);
  }
}

TEST_CASE("point evaluation matches grid synthesis") {
  const SpectralField f = oracle::random_field(1, 9, 31);
  const GridField g = to_grid(f, 64);
  for (int k = 0; k < 64; k += 7)
    CHECK(std::fabs(eval(f, two_pi * k / 64) - g.at(k)) < 1e-11);

  const SpectralField f2 = oracle::random_field(2, 4, 32);
  const GridField g2 = to_grid(f2, 32);
  for (int k = 0; k < 32; k += 5)
    CHECK(std::fabs(eval(f2, two_pi * k / 32, two_pi * ((k * 3) % 32) / 32) -
                    g2.at(k, (k * 3) % 32)) < 1e-11);
}
