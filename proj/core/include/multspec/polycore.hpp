#pragma once

// Dense complex univariate polynomials and homogeneous bivariate forms.
// Coefficients are stored in ascending order of the power of the first
// variable throughout.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "multspec/common.hpp"

namespace multspec {

template <class R>
class Poly {
 public:
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  Poly() = default;
  /// Trailing (highest-power) exact zeros are trimmed.
  explicit Poly(std::vector<Complex<R>> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == Complex<R>(0)) coeffs_.pop_back();
  }

  int degree() const noexcept {
    return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
  }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const Complex<R>> coeffs() const noexcept { return coeffs_; }
  const Complex<R>& operator[](std::size_t i) const { return coeffs_[i]; }
  const Complex<R>& leading() const { return coeffs_.back(); }

  /// Plain Horner evaluation.
  Complex<R> operator()(const Complex<R>& z) const {
    Complex<R> acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Poly derivative() const {
    if (coeffs_.size() <= 1) return Poly();
    std::vector<Complex<R>> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * R(static_cast<double>(i));
    return Poly(std::move(d));
  }

 private:
  std::vector<Complex<R>> coeffs_;
};

/// Homogeneous form in (X, Y) of total degree D; entry i is the coefficient
/// of X^i Y^(D-i).
template <class R>
class HomForm {
 public:
  HomForm() : coeffs_(1, Complex<R>(0)) {}
  explicit HomForm(std::vector<Complex<R>> coeffs);

  /// c * X^x_power * Y^(degree - x_power)
  static HomForm monomial(int degree, int x_power, Complex<R> c = Complex<R>(1));

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex<R>> coeffs() const noexcept { return coeffs_; }
  const Complex<R>& operator[](std::size_t i) const { return coeffs_[i]; }
  bool is_zero() const noexcept;
  R norm_inf() const noexcept;

  /// Evaluates F(x, y), scaling through the larger coordinate.
  Complex<R> operator()(const Complex<R>& x, const Complex<R>& y) const;

  HomForm partial_x() const;
  HomForm partial_y() const;

  /// F(z, 1). The degree deficit D - deg F(z,1) is the multiplicity of the
  /// root at infinity.
  Poly<R> dehomogenize() const { return Poly<R>(coeffs_); }

  /// Scaled copy with max coefficient magnitude 1 (zero form unchanged).
  HomForm normalized() const;
  HomForm scaled(const Complex<R>& s) const;

  friend HomForm operator+(const HomForm& a, const HomForm& b) { return a.combine(b, R(1)); }
  friend HomForm operator-(const HomForm& a, const HomForm& b) { return a.combine(b, R(-1)); }

 private:
  HomForm combine(const HomForm& other, R sign) const;
  std::vector<Complex<R>> coeffs_;
};

template <class To, class From>
HomForm<To> convert(const HomForm<From>& f) {
  std::vector<Complex<To>> c;
  c.reserve(f.coeffs().size());
  for (const auto& v : f.coeffs()) c.push_back(complex_cast<To>(v));
  return HomForm<To>(std::move(c));
}

/// Product of two nonzero forms (coefficient convolution).
template <class R>
HomForm<R> form_multiply(const HomForm<R>& a, const HomForm<R>& b);

/// Quotient q of num by den with ||num - q*den||_inf <= tol * ||num||_inf.
/// Solved as a banded least-squares problem so roots of den on both sides
/// of the unit circle are handled. Throws NotDivisible on residual failure.
template <class R>
HomForm<R> form_exact_divide(const HomForm<R>& num, const HomForm<R>& den, double tol);

/// Residual ||num - q*den||_inf / ||num||_inf.
template <class R>
R division_residual(const HomForm<R>& num, const HomForm<R>& den, const HomForm<R>& q);

/// Sylvester resultant of p and q with respect to their actual degrees.
template <class R>
Complex<R> resultant(const Poly<R>& p, const Poly<R>& q);

/// Homogeneous resultant: Sylvester determinant over the formal degrees, so
/// a common root at infinity gives zero.
template <class R>
Complex<R> form_resultant(const HomForm<R>& a, const HomForm<R>& b);

/// Compensated Horner scheme (error-free transformations), about twice the
/// working precision before the final rounding.
Cplx eval_compensated(const Poly<double>& p, const Cplx& z);

}  // namespace multspec
