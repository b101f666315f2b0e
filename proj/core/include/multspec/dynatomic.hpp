#pragma once

// Period-n forms and their Moebius-inversion quotients (dynatomic forms).

#include <cstdint>
#include <vector>

#include "multspec/ratmap.hpp"

namespace multspec {

/// Relative residual accepted when dividing period forms.
inline constexpr double kDivisionTol = 1e-9;

/// Moebius function; n >= 1.
int moebius_mu(int n);

/// Positive divisors of n in increasing order.
std::vector<int> divisors(int n);

/// Number of points of formal exact period n for a degree-d map,
/// sum over k | n of mu(n/k) (d^k + 1).
std::int64_t nu_count(int d, int n);

/// Y F_n - X G_n; its roots are the solutions of f^n(x) = x.
template <class R>
struct PeriodForm {
  HomForm<R> form;
  int n = 0;
};

template <class R>
struct DynatomicForm {
  HomForm<R> form;
  int n = 0;
  std::int64_t nominal_degree = 0;
  /// Tier that produced the coefficients (a double request may have been
  /// completed at extended precision).
  Precision precision = Precision::Double;
};

template <class R>
PeriodForm<R> period_form(const RationalMap<R>& f, int n);

/// Product of period_form(f, k)^mu(n/k) over k | n: positive factors are
/// multiplied, then divided once by the product of the negative ones.
/// For R = double a NotDivisible failure is retried at 113 bits before it
/// propagates.
template <class R>
DynatomicForm<R> dynatomic_form(const RationalMap<R>& f, int n, double division_tol = kDivisionTol);

}  // namespace multspec
