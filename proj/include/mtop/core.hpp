#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mtop {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. Every failure raised by the library derives from Error so
// callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: violated preconditions, desk-scale caps, genericity.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An internal identity did not hold (CBR division remainder, Jacobi-Trudi
// mismatch, failed simultaneous diagonalization, ...).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Evaluation at a pole (tau zero in a denominator, z on a string point,
// colliding RS particles).
class PoleError : public Error {
 public:
  using Error::Error;
};

// Coincident roots or a singular linear system.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// residual = |a - b| / (|a| + |b| + 1e-300)
inline double rel_residual(double diff_norm, double a_norm, double b_norm) {
  return diff_norm / (a_norm + b_norm + 1e-300);
}

inline double rel_residual(cplx a, cplx b) {
  return rel_residual(std::abs(a - b), std::abs(a), std::abs(b));
}

inline double rel_residual(const Mat& a, const Mat& b) {
  return rel_residual((a - b).norm(), a.norm(), b.norm());
}

inline cplx cpow(cplx base, cplx exponent) {
  return std::exp(exponent * std::log(base));
}

inline cplx coth(cplx z) { return std::cosh(z) / std::sinh(z); }

// Seeded generator shared by all randomized checks.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  cplx cnormal() { return {normal(), normal()}; }
  // Uniform in the rectangle [-re, re] x [-im, im].
  cplx box(double re, double im) { return {uniform(-re, re), uniform(-im, im)}; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Named thresholds with defaults. Unknown names are rejected so that a typo
// in a config or on the command line never silently keeps a default.
class Tolerances {
 public:
  Tolerances()
      : values_{{"pointwise", 1e-12},     {"ybe", 1e-12},
                {"commute", 1e-10},       {"sector", 1e-12},
                {"cbr_division", 1e-10},  {"cbr_duality", 1e-9},
                {"fusion", 1e-10},        {"hirota_quantum", 1e-9},
                {"top_coeffs", 1e-10},    {"diagonal", 1e-8},
                {"hirota_classical", 1e-10}, {"baker", 1e-9},
                {"backlund", 1e-10},      {"rs_forms", 1e-12},
                {"lax", 1e-7},            {"drift", 1e-8},
                {"bridge_first", 1e-10},  {"bridge_second", 1e-6},
                {"symfun", 1e-12}} {}

  double operator[](const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw ConfigError("unknown tolerance '" + name + "'");
    return it->second;
  }

  void set(const std::string& name, double value) {
    if (!values_.count(name)) throw ConfigError("unknown tolerance '" + name + "'");
    if (!(value > 0.0)) throw ConfigError("tolerance '" + name + "' must be positive");
    values_[name] = value;
  }

  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

}  // namespace mtop
