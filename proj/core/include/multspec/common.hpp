#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/float128.hpp>

namespace multspec {

/// 113-bit significand binary floating point, used for precision retries.
using Quad = boost::multiprecision::float128;

template <class R>
using Complex = std::complex<R>;

using Cplx = Complex<double>;

enum class Precision { Double, Extended };

std::string_view to_string(Precision p) noexcept;
std::optional<Precision> parse_precision(std::string_view text) noexcept;

enum class ErrorKind {
  NotDivisible,
  Degenerate,
  DegreeCap,
  IndeterminatePoint,
  CycleBroken,
  NoConvergence,
  OrbitMatchFailed,
  NotPeriodic,
  Superattracting,
  ShapeMismatch,
  SingularCurve,
  ParseError,
  ShapeError,
  Overflow,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Failures that may disappear when the computation is repeated at
/// extended precision.
constexpr bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotDivisible:
    case ErrorKind::CycleBroken:
    case ErrorKind::NoConvergence:
    case ErrorKind::OrbitMatchFailed:
    case ErrorKind::Overflow:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int period = 0);

  ErrorKind kind() const noexcept { return kind_; }
  /// Offending period for `Superattracting`, zero otherwise.
  int period() const noexcept { return period_; }
  /// Message without the kind prefix carried by what().
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  int period_;
  std::string detail_;
};

template <class R>
constexpr R unit_roundoff() {
  return std::numeric_limits<R>::epsilon() / 2;
}

template <class To, class From>
Complex<To> complex_cast(const Complex<From>& z) {
  return Complex<To>(static_cast<To>(z.real()), static_cast<To>(z.imag()));
}

template <class R>
bool is_finite(const Complex<R>& z) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(z.real()) && isfinite(z.imag());
}

/// Max-norm of a complex number, cheaper than abs() and adequate for
/// scaling decisions.
template <class R>
R max_abs(const Complex<R>& z) {
  using std::abs;
  using boost::multiprecision::abs;
  R a = abs(z.real());
  R b = abs(z.imag());
  return a < b ? b : a;
}

/// z^n by repeated squaring (std::pow on complex goes through log/exp).
template <class R>
Complex<R> ipow(Complex<R> z, int n) {
  Complex<R> acc(1);
  bool invert = n < 0;
  unsigned k = static_cast<unsigned>(invert ? -n : n);
  while (k) {
    if (k & 1u) acc *= z;
    z *= z;
    k >>= 1;
  }
  return invert ? Complex<R>(1) / acc : acc;
}

/// Counter-based seed split: independent stream seed for item `index`.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace multspec
