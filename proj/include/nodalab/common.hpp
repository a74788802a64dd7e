// Shared basics: error types, constants, small numeric helpers.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace nodalab {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Hard cap on exponents fed to std::exp; doubles overflow near 709.
inline constexpr double exp_arg_cap = 700.0;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid resolution too small for the requested band.
struct ResolutionError : Error {
  using Error::Error;
};

// A multiplier exponent left the representable range.
struct OverflowError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Solver produced NaN/Inf or lost positivity of the L2 norm.
struct DivergedError : Error {
  using Error::Error;
};

// Invalid run configuration.
struct ConfigError : Error {
  using Error::Error;
};

// A quantity vanished beyond usable floating-point range.
struct VanishingError : Error {
  using Error::Error;
};

// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace nodalab
