#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vvmf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Int128 = __int128;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr Complex kI{0.0, 1.0};

// Base of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation exactly at a pole (Gamma, polygamma).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Result not representable in double precision.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Quadrature or series failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what + " (achieved error " + std::to_string(achieved) + ")"), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

// Malformed input file; line is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Failure to read or write a file.
class IoError : public Error {
 public:
  using Error::Error;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Exact rational number with positive denominator, used for offsets.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  friend bool operator==(const Rational&, const Rational&) = default;

  // Best rational approximation with den <= max_den, accepted if within tol.
  static Rational approximate(double x, std::int64_t max_den, double tol);
};

std::string to_string(Int128 v);
// Throws ParseError(line) when the text is not an integer.
Int128 parse_int128(const std::string& text, int line);

}  // namespace vvmf
