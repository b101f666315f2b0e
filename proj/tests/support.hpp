#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "multspec/ratmap.hpp"

namespace multspec::testing {

inline Cplx unit_disc(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Cplx z(u(rng), u(rng));
    if (std::norm(z) <= 1.0) return z;
  }
}

/// Coefficients of prod (z - r_i), ascending, expanded at precision R.
template <class R = double>
std::vector<Complex<R>> from_roots(const std::vector<Cplx>& roots) {
  std::vector<Complex<R>> c{Complex<R>(1)};
  for (const Cplx& r : roots) {
    std::vector<Complex<R>> next(c.size() + 1, Complex<R>(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= complex_cast<R>(r) * c[i];
    }
    c = std::move(next);
  }
  return c;
}

/// max_i |a_i - lc * b_i| / max |a_i| where b is the monic polynomial on
/// the given roots, expanded at 113 bits so only the roots' error shows.
inline double reconstruction_error(const std::vector<Cplx>& a, const std::vector<Cplx>& roots) {
  const auto b = from_roots<Quad>(roots);
  if (b.size() != a.size()) return 1e300;
  const Complex<Quad> lc = complex_cast<Quad>(a.back());
  double norm = 0, worst = 0;
  for (const Cplx& c : a) norm = std::max(norm, std::abs(c));
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, static_cast<double>(abs(complex_cast<Quad>(a[i]) - lc * b[i])));
  return worst / norm;
}

/// sum a_k z^k with every power formed separately at 113 bits.
inline Complex<Quad> power_sum(const std::vector<Cplx>& a, const Complex<Quad>& z) {
  Complex<Quad> acc(0);
  for (std::size_t k = 0; k < a.size(); ++k) acc += complex_cast<Quad>(a[k]) * ipow(z, static_cast<int>(k));
  return acc;
}

inline std::vector<Cplx> coeff_vector(std::span<const Cplx> c) { return {c.begin(), c.end()}; }

/// f(z) = P(z, 1) / Q(z, 1) at 113 bits, straight from the coefficients.
inline Complex<Quad> rational_value(const RationalMap<double>& f, const Complex<Quad>& z) {
  return power_sum(coeff_vector(f.numerator().coeffs()), z) / power_sum(coeff_vector(f.denominator().coeffs()), z);
}

/// z^2 + c as a degree-2 map.
inline RationalMap<double> quadratic(Cplx c) {
  return make_map(HomForm<double>({c, Cplx(0), Cplx(1)}), HomForm<double>({Cplx(1), Cplx(0), Cplx(0)}));
}

inline RationalMap<double> random_test_map(int d, std::mt19937_64& rng) {
  for (;;) {
    std::vector<Cplx> p(static_cast<std::size_t>(d) + 1), q(p.size());
    for (auto& c : p) c = unit_disc(rng);
    for (auto& c : q) c = unit_disc(rng);
    try {
      auto f = make_map(HomForm<double>(p), HomForm<double>(q));
      if (std::abs(f.resultant()) >= 1e-6) return f;
    } catch (const Error&) {
    }
  }
}

inline double rel_diff(const Cplx& a, const Cplx& b) { return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace multspec::testing
