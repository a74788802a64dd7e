#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nodalab/certify.hpp"
#include "oracles.hpp"

using namespace nodalab;

namespace {

SpectralField sin_mode(int k) {
  SpectralField f(1, k);
  f.set_pair(k, cplx{0.0, -0.5});
  return f;
}

int dense_count_on_segment(const TrigSum1D& f, const Segment& seg, int samples = 8192) {
  const double ds = seg.length() / samples;
  const std::vector<double> v = f.sample(seg.lo(), ds, samples + 1);
  int count = 0;
  double prev = 0.0;
  for (double x : v) {
    if ((prev < 0.0 && x > 0.0) || (prev > 0.0 && x < 0.0)) ++count;
    if (x != 0.0) prev = x;
  }
  return count;
}

}  // namespace

TEST_CASE("global derivative bounds are exact for single modes") {
  const Segment seg{0.0, 0.5};
  CHECK(derivative_sup(sin_mode(1), 4, seg) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(derivative_sup(sin_mode(3), 2, seg) == doctest::Approx(9.0).epsilon(1e-12));

  SpectralField f(1, 2);
  f.set_pair(1, cplx{0.0, -0.5});
  f.set_pair(2, cplx{0.0, -0.25});
  CHECK(derivative_sup(f, 3, seg) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("derivative order guard") {
  const Segment seg{0.0, 0.5};
  CHECK_THROWS_AS(derivative_sup(sin_mode(1), 401, seg), OverflowError);
}

TEST_CASE("certificate for sin(x) on [-1/4, 1/4]") {
  const Segment seg{0.0, 0.25};
  const auto cert = certify_zero_bound(sin_mode(1), seg, 50, DerivBound::Global);
  REQUIRE(cert.has_value());
  CHECK(cert->nstar == 2);  // n = 1 fails: 0.5 * 1 >= sin(1/4)
  CHECK(cert->sup_u == doctest::Approx(std::sin(0.25)).epsilon(1e-6));
  CHECK(cert->log_margin > 0.0);
  CHECK(dense_count_on_segment(as_trig_sum(sin_mode(1)), seg) < cert->nstar);
}

TEST_CASE("constant functions certify at n* = 1") {
  SpectralField one(1, 1);
  one.set(0, cplx{1.0, 0.0});
  for (double half : {0.1, 1.0, 3.0}) {
    const auto cert = certify_zero_bound(one, Segment{1.0, half}, 10);
    REQUIRE(cert.has_value());
    CHECK(cert->nstar == 1);
  }
}

TEST_CASE("sin(8x) over a full period certifies below 20") {
  const SpectralField f = sin_mode(8);
  const TrigSum1D sum = as_trig_sum(f);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  for (int trial = 0; trial < 100; ++trial) {
    const Segment seg{pos(rng), two_pi / 16.0};
    const auto cert = certify_zero_bound(f, seg, 40);
    REQUIRE(cert.has_value());
    CHECK(cert->nstar <= 20);
    CHECK(dense_count_on_segment(sum, seg) < cert->nstar);
  }
}

TEST_CASE("zero function is inconclusive") {
  SpectralField z(1, 2);
  CHECK_FALSE(certify_zero_bound(z, Segment{0.0, 0.5}, 20).has_value());
}

TEST_CASE("soundness scan: dense zero count always below n*") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  std::uniform_real_distribution<double> len(0.05, 1.0);
  std::uniform_int_distribution<int> cutoff(1, 32);
  for (int trial = 0; trial < 200; ++trial) {
    const int J = cutoff(rng);
    const SpectralField f = oracle::random_field(1, J, 7000 + static_cast<unsigned>(trial));
    const Segment seg{pos(rng), 0.5 * len(rng)};
    const auto cert = certify_zero_bound(f, seg, 200);
    REQUIRE(cert.has_value());
    const int true_count = dense_count_on_segment(as_trig_sum(f), seg);
    CHECK(true_count < cert->nstar);
  }
}

TEST_CASE("certificates on lines: closed-form cases") {
  // cos(x) along the horizontal axis reduces to the 1D problem.
  SpectralField cosx(2, 1);
  cosx.set_pair(1, 0, cplx{0.5, 0.0});
  const auto horiz = certify_on_line(cosx, 0.1, 0.0, 0.0, 0.5, 50);
  REQUIRE(horiz.has_value());
  CHECK(dense_count_on_segment(restrict_to_line(cosx, 0.1, 0.0, 0.0), Segment{0.0, 1.0}) < horiz->nstar);

  // Vertical line at x = pi/4: constant cos(pi/4), so n* = 1.
  const auto vert = certify_on_line(cosx, two_pi / 8.0, 0.3, two_pi / 4.0, 0.5, 50);
  REQUIRE(vert.has_value());
  CHECK(vert->nstar == 1);
}

TEST_CASE("certificates on 50 random lines dominate dense scans") {
  const SpectralField f = oracle::random_field(2, 6, 321);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  std::uniform_real_distribution<double> ang(0.0, two_pi / 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double px = pos(rng), py = pos(rng), theta = ang(rng), r = 0.4;
    const auto cert = certify_on_line(f, px, py, theta, r, 200);
    REQUIRE(cert.has_value());
    const int scan = dense_count_on_segment(restrict_to_line(f, px, py, theta), Segment{0.0, 2.0 * r});
    CHECK(scan < cert->nstar);
  }
}

TEST_CASE("enlarging the segment never decreases n*") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  std::uniform_real_distribution<double> len(0.1, 0.6);
  for (int trial = 0; trial < 60; ++trial) {
    const int J = 2 + trial % 12;
    const SpectralField f = oracle::random_field(1, J, 8100 + static_cast<unsigned>(trial));
    const double c = pos(rng), h = 0.5 * len(rng);
    const auto small = certify_zero_bound(f, Segment{c, h}, 200);
    const auto big = certify_zero_bound(f, Segment{c, 1.5 * h}, 200);
    REQUIRE(small.has_value());
    REQUIRE(big.has_value());
    CHECK(small->nstar <= big->nstar);
  }
}

TEST_CASE("scaling consistency for sin(kx)") {
  for (int k : {1, 2, 4, 8, 16, 32}) {
    const SpectralField f = sin_mode(k);
    for (double total_len : {0.25, 0.5, 1.0}) {
      const auto cert = certify_zero_bound(f, Segment{0.0, 0.5 * total_len}, 400);
      REQUIRE(cert.has_value());
      CHECK(cert->nstar <= 4.0 * (k * total_len + 10.0));
    }
  }
}

TEST_CASE("soundness with extreme coefficient dynamic range") {
  std::mt19937_64 rng(271);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int J = 4 + static_cast<int>(u(rng) * 28);
    SpectralField f(1, J);
    f.set(0, cplx{1e-8 * (2.0 * u(rng) - 1.0), 0.0});
    for (int j = 1; j <= J; ++j) {
      const double scale = std::pow(10.0, -8.0 + 16.0 * u(rng));
      f.set_pair(j, std::polar(scale, two_pi * u(rng)));
    }
    const Segment seg{two_pi * u(rng), 0.25 + 0.2 * u(rng)};
    const auto cert = certify_zero_bound(f, seg, 400);
    REQUIRE(cert.has_value());
    CHECK(dense_count_on_segment(as_trig_sum(f), seg, 16384) < cert->nstar);
  }
}

TEST_CASE("zero-dense segments: many-period windows stay sound") {
  // Segments packed with zeros; the window shrinks with the mode number so
  // the certifying order stays under the factorial guard (n* grows like
  // e * len * k).
  for (int k : {16, 32}) {
    const SpectralField f = sin_mode(k);
    const Segment seg{0.1, two_pi / 2.0 / (k / 16.0)};
    const auto cert = certify_zero_bound(f, seg, 400);
    REQUIRE(cert.has_value());
    const int count = dense_count_on_segment(as_trig_sum(f), seg, 1 << 16);
    CHECK(count >= 15);  // zero-dense indeed
    CHECK(count < cert->nstar);
  }
}

TEST_CASE("stored logs reproduce the decision bit") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, two_pi);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralField f = oracle::random_field(1, 10, 8800 + static_cast<unsigned>(trial));
    const Segment seg{pos(rng), 0.3};
    const auto cert = certify_zero_bound(f, seg, 200);
    REQUIRE(cert.has_value());
    const double log_rhs = cert->nstar * std::log(seg.length()) - std::lgamma(cert->nstar + 1.0) +
                           cert->log_deriv_bound + std::log1p(1e-6);
    CHECK(std::log(cert->sup_u) - log_rhs == doctest::Approx(cert->log_margin).epsilon(1e-12));
    CHECK(cert->log_margin > 0.0);
  }
}
