#pragma once

// Rational maps of the Riemann sphere in homogeneous coordinates.

#include <span>
#include <utility>
#include <vector>

#include "multspec/polycore.hpp"

namespace multspec {

/// Maps with |Res(P, Q)| below this (after normalization) are rejected.
inline constexpr double kDegeneracyThreshold = 1e-12;
/// Default tolerance for projective point equality.
inline constexpr double kProjectiveTol = 1e-9;
/// Largest iterate degree d^n any routine will build.
inline constexpr long kDegreeCap = 4096;

/// Point of P^1 with max(|x|, |y|) == 1.
template <class R>
struct ProjPoint {
  Complex<R> x{1};
  Complex<R> y{0};

  static ProjPoint normalized(const Complex<R>& x, const Complex<R>& y);
  static ProjPoint affine(const Complex<R>& z) { return normalized(z, Complex<R>(1)); }
  static ProjPoint infinity() { return ProjPoint{Complex<R>(1), Complex<R>(0)}; }

  bool is_infinity() const { return y == Complex<R>(0); }
  /// x / y; only meaningful away from infinity.
  Complex<R> to_affine() const { return x / y; }
};

template <class To, class From>
ProjPoint<To> convert(const ProjPoint<From>& p) {
  return ProjPoint<To>::normalized(complex_cast<To>(p.x), complex_cast<To>(p.y));
}

/// |x_p y_q - x_q y_p| on normalized representatives.
template <class R>
R projective_distance(const ProjPoint<R>& p, const ProjPoint<R>& q);

/// Affine chart of a point: Z uses z = x/y (|y| >= |x|), W uses w = y/x.
enum class Chart { Z, W };

template <class R>
Chart chart_of(const ProjPoint<R>& p);

template <class R>
Complex<R> chart_coordinate(const ProjPoint<R>& p, Chart chart);

/// Element of PGL2(C) acting by (x, y) -> (a x + b y, c x + d y).
template <class R>
class Moebius {
 public:
  /// Normalizes the max entry to 1; throws Degenerate when |det| is tiny.
  Moebius(Complex<R> a, Complex<R> b, Complex<R> c, Complex<R> d);

  static Moebius identity() { return Moebius(Complex<R>(1), Complex<R>(0), Complex<R>(0), Complex<R>(1)); }

  const Complex<R>& a() const { return a_; }
  const Complex<R>& b() const { return b_; }
  const Complex<R>& c() const { return c_; }
  const Complex<R>& d() const { return d_; }

  Moebius inverse() const { return Moebius(d_, -b_, -c_, a_); }
  ProjPoint<R> operator()(const ProjPoint<R>& p) const {
    return ProjPoint<R>::normalized(a_ * p.x + b_ * p.y, c_ * p.x + d_ * p.y);
  }

 private:
  Complex<R> a_, b_, c_, d_;
};

template <class To, class From>
Moebius<To> convert(const Moebius<From>& m) {
  return Moebius<To>(complex_cast<To>(m.a()), complex_cast<To>(m.b()), complex_cast<To>(m.c()),
                     complex_cast<To>(m.d()));
}

/// f = P / Q, both of degree d >= 2 without common root on P^1.
template <class R>
class RationalMap {
 public:
  const HomForm<R>& numerator() const { return p_; }
  const HomForm<R>& denominator() const { return q_; }
  int degree() const { return p_.degree(); }
  /// Homogeneous resultant of the normalized forms.
  const Complex<R>& resultant() const { return res_; }

  /// Raw image (P(x, y), Q(x, y)) without normalization.
  std::pair<Complex<R>, Complex<R>> image(const Complex<R>& x, const Complex<R>& y) const {
    return {p_(x, y), q_(x, y)};
  }

  /// Derivative of f at p read in the given source and target charts.
  Complex<R> chart_derivative(const ProjPoint<R>& p, Chart source, Chart target) const;

 private:
  template <class S>
  friend RationalMap<S> make_map(HomForm<S> p, HomForm<S> q);

  RationalMap(HomForm<R> p, HomForm<R> q, Complex<R> res);

  HomForm<R> p_, q_;
  HomForm<R> px_, py_, qx_, qy_;
  Complex<R> res_;
};

/// Validates and normalizes (max coefficient over P, Q equal to 1).
/// Throws InvalidArgument on bad degrees, Degenerate on vanishing resultant.
template <class R>
RationalMap<R> make_map(HomForm<R> p, HomForm<R> q);

template <class To, class From>
RationalMap<To> convert(const RationalMap<From>& f) {
  return make_map(convert<To>(f.numerator()), convert<To>(f.denominator()));
}

/// Forms (F_n, G_n) of f^n, renormalized after every composition step.
/// Throws DegreeCap when d^n exceeds kDegreeCap.
template <class R>
std::pair<HomForm<R>, HomForm<R>> iterate_forms(const RationalMap<R>& f, int n);

/// All iterates (F_k, G_k) for k = 1..n; entry k-1 holds f^k.
template <class R>
std::vector<std::pair<HomForm<R>, HomForm<R>>> iterate_forms_all(const RationalMap<R>& f, int n);

/// sum_i c_i A^i B^(D-i) for F = sum_i c_i X^i Y^(D-i), computed for two
/// forms sharing the substitution.
template <class R>
std::pair<HomForm<R>, HomForm<R>> substitute(const HomForm<R>& f, const HomForm<R>& g, const HomForm<R>& a,
                                             const HomForm<R>& b);

/// phi o f o phi^-1. Retries at extended precision before reporting
/// Degenerate.
template <class R>
RationalMap<R> conjugate_map(const RationalMap<R>& f, const Moebius<R>& phi);

/// Throws IndeterminatePoint if both image coordinates vanish.
template <class R>
ProjPoint<R> apply_map(const RationalMap<R>& f, const ProjPoint<R>& p);

/// df^m along a cycle of length m, chained chart by chart. Throws
/// CycleBroken if f does not permute the points cyclically within tol.
template <class R>
Complex<R> multiplier_along_cycle(const RationalMap<R>& f, std::span<const ProjPoint<R>> cycle,
                                  double tol = kProjectiveTol);

/// One Newton step on f^m(z) = z in the chart of p. Returns the updated
/// point, the multiplier df^m at the input point, and the displacement
/// |f^m(z) - z| in that chart.
template <class R>
struct PeriodicNewtonStep {
  ProjPoint<R> point;
  Complex<R> multiplier;
  R displacement;
};

template <class R>
PeriodicNewtonStep<R> periodic_newton_step(const RationalMap<R>& f, const ProjPoint<R>& p, int m);

}  // namespace multspec
