#include "multspec/ratmap.hpp"

#include <cmath>
#include <string>

namespace multspec {

template <class R>
ProjPoint<R> ProjPoint<R>::normalized(const Complex<R>& x, const Complex<R>& y) {
  using std::abs;
  const R ax = abs(x);
  const R ay = abs(y);
  const R m = ax > ay ? ax : ay;
  if (m == R(0)) throw Error(ErrorKind::IndeterminatePoint, "point (0, 0) is not in P^1");
  const R inv = R(1) / m;
  return ProjPoint{x * inv, y * inv};
}

template <class R>
R projective_distance(const ProjPoint<R>& p, const ProjPoint<R>& q) {
  using std::abs;
  return abs(p.x * q.y - q.x * p.y);
}

template <class R>
Chart chart_of(const ProjPoint<R>& p) {
  using std::abs;
  return abs(p.y) >= abs(p.x) ? Chart::Z : Chart::W;
}

template <class R>
Complex<R> chart_coordinate(const ProjPoint<R>& p, Chart chart) {
  return chart == Chart::Z ? p.x / p.y : p.y / p.x;
}

template <class R>
Moebius<R>::Moebius(Complex<R> a, Complex<R> b, Complex<R> c, Complex<R> d) {
  using std::abs;
  R m(0);
  for (const auto* v : {&a, &b, &c, &d}) {
    const R av = abs(*v);
    if (av > m) m = av;
  }
  if (m == R(0)) throw Error(ErrorKind::Degenerate, "zero Moebius matrix");
  const R inv = R(1) / m;
  a_ = a * inv;
  b_ = b * inv;
  c_ = c * inv;
  d_ = d * inv;
  if (abs(a_ * d_ - b_ * c_) < R(kDegeneracyThreshold))
    throw Error(ErrorKind::Degenerate, "Moebius determinant vanishes");
}

template <class R>
RationalMap<R>::RationalMap(HomForm<R> p, HomForm<R> q, Complex<R> res)
    : p_(std::move(p)),
      q_(std::move(q)),
      px_(p_.partial_x()),
      py_(p_.partial_y()),
      qx_(q_.partial_x()),
      qy_(q_.partial_y()),
      res_(res) {}

template <class R>
RationalMap<R> make_map(HomForm<R> p, HomForm<R> q) {
  if (p.degree() != q.degree())
    throw Error(ErrorKind::InvalidArgument, "numerator and denominator degrees differ");
  if (p.degree() < 2) throw Error(ErrorKind::InvalidArgument, "map degree must be at least 2");
  const R scale = std::max(p.norm_inf(), q.norm_inf());
  if (scale == R(0)) throw Error(ErrorKind::Degenerate, "zero map");
  const Complex<R> inv(R(1) / scale);
  p = p.scaled(inv);
  q = q.scaled(inv);
  const Complex<R> res = form_resultant(p, q);
  using std::abs;
  if (!(abs(res) >= R(kDegeneracyThreshold))) {
    throw Error(ErrorKind::Degenerate,
                "resultant magnitude " + std::to_string(static_cast<double>(abs(res))) + " below threshold");
  }
  return RationalMap<R>(std::move(p), std::move(q), res);
}

template <class R>
Complex<R> RationalMap<R>::chart_derivative(const ProjPoint<R>& p, Chart source, Chart target) const {
  // Representative (t, 1) or (1, t) of the source chart; differentiate
  // along t.
  Complex<R> x, y;
  const HomForm<R>* dp;
  const HomForm<R>* dq;
  if (source == Chart::Z) {
    x = chart_coordinate(p, Chart::Z);
    y = Complex<R>(1);
    dp = &px_;
    dq = &qx_;
  } else {
    x = Complex<R>(1);
    y = chart_coordinate(p, Chart::W);
    dp = &py_;
    dq = &qy_;
  }
  Complex<R> num = p_(x, y), den = q_(x, y);
  Complex<R> dnum = (*dp)(x, y), dden = (*dq)(x, y);
  if (target == Chart::W) {
    std::swap(num, den);
    std::swap(dnum, dden);
  }
  if (den == Complex<R>(0)) throw Error(ErrorKind::CycleBroken, "target chart does not contain the image");
  return (dnum * den - num * dden) / (den * den);
}

template <class R>
std::pair<HomForm<R>, HomForm<R>> substitute(const HomForm<R>& f, const HomForm<R>& g, const HomForm<R>& a,
                                             const HomForm<R>& b) {
  const int d = f.degree();
  if (g.degree() != d) throw Error(ErrorKind::InvalidArgument, "substitute needs equal degrees");
  std::vector<HomForm<R>> apow{HomForm<R>::monomial(0, 0)};
  std::vector<HomForm<R>> bpow{HomForm<R>::monomial(0, 0)};
  for (int i = 1; i <= d; ++i) {
    apow.push_back(form_multiply(apow.back(), a));
    bpow.push_back(form_multiply(bpow.back(), b));
  }
  const int out_deg = d * a.degree();
  std::vector<Complex<R>> fo(static_cast<std::size_t>(out_deg) + 1, Complex<R>(0));
  std::vector<Complex<R>> go(fo.size(), Complex<R>(0));
  for (int i = 0; i <= d; ++i) {
    const Complex<R> cf = f[static_cast<std::size_t>(i)];
    const Complex<R> cg = g[static_cast<std::size_t>(i)];
    if (cf == Complex<R>(0) && cg == Complex<R>(0)) continue;
    const HomForm<R> mono = form_multiply(apow[static_cast<std::size_t>(i)], bpow[static_cast<std::size_t>(d - i)]);
    for (std::size_t k = 0; k < fo.size(); ++k) {
      fo[k] += cf * mono[k];
      go[k] += cg * mono[k];
    }
  }
  return {HomForm<R>(std::move(fo)), HomForm<R>(std::move(go))};
}

namespace {

long checked_power(int d, int n) {
  long v = 1;
  for (int i = 0; i < n; ++i) {
    v *= d;
    if (v > kDegreeCap) return kDegreeCap + 1;
  }
  return v;
}

template <class R>
std::pair<HomForm<R>, HomForm<R>> renormalize(std::pair<HomForm<R>, HomForm<R>> fg) {
  const R scale = std::max(fg.first.norm_inf(), fg.second.norm_inf());
  if (scale == R(0)) throw Error(ErrorKind::Overflow, "iterate collapsed to zero");
  const Complex<R> inv(R(1) / scale);
  return {fg.first.scaled(inv), fg.second.scaled(inv)};
}

}  // namespace

template <class R>
std::vector<std::pair<HomForm<R>, HomForm<R>>> iterate_forms_all(const RationalMap<R>& f, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "iterate index must be positive");
  if (checked_power(f.degree(), n) > kDegreeCap)
    throw Error(ErrorKind::DegreeCap, "d^n = " + std::to_string(f.degree()) + "^" + std::to_string(n) +
                                          " exceeds " + std::to_string(kDegreeCap));
  std::vector<std::pair<HomForm<R>, HomForm<R>>> out;
  out.reserve(static_cast<std::size_t>(n));
  out.emplace_back(f.numerator(), f.denominator());
  for (int k = 1; k < n; ++k) {
    const auto& prev = out.back();
    out.push_back(renormalize(substitute(f.numerator(), f.denominator(), prev.first, prev.second)));
  }
  return out;
}

template <class R>
std::pair<HomForm<R>, HomForm<R>> iterate_forms(const RationalMap<R>& f, int n) {
  auto all = iterate_forms_all(f, n);
  return std::move(all.back());
}

namespace {

template <class R>
RationalMap<R> conjugate_once(const RationalMap<R>& f, const Moebius<R>& phi) {
  const Moebius<R> inv = phi.inverse();
  // phi^-1 as linear forms: X' = a X + b Y, Y' = c X + d Y
  const HomForm<R> lx({inv.b(), inv.a()});
  const HomForm<R> ly({inv.d(), inv.c()});
  auto [fp, fq] = substitute(f.numerator(), f.denominator(), lx, ly);
  HomForm<R> p = fp.scaled(phi.a()) + fq.scaled(phi.b());
  HomForm<R> q = fp.scaled(phi.c()) + fq.scaled(phi.d());
  return make_map(std::move(p), std::move(q));
}

}  // namespace

template <class R>
RationalMap<R> conjugate_map(const RationalMap<R>& f, const Moebius<R>& phi) {
  try {
    return conjugate_once(f, phi);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Degenerate) throw;
    if constexpr (std::is_same_v<R, Quad>) {
      throw;
    } else {
      // Cancellation in the substitution is the only way a genuine map can
      // land here; repeat with 113-bit arithmetic.
      const auto g = conjugate_once(convert<Quad>(f), convert<Quad>(phi));
      return convert<R>(g);
    }
  }
}

template <class R>
ProjPoint<R> apply_map(const RationalMap<R>& f, const ProjPoint<R>& p) {
  const auto [x, y] = f.image(p.x, p.y);
  using std::abs;
  if (abs(x) < R(1e-14) && abs(y) < R(1e-14))
    throw Error(ErrorKind::IndeterminatePoint, "both image coordinates vanish");
  return ProjPoint<R>::normalized(x, y);
}

template <class R>
Complex<R> multiplier_along_cycle(const RationalMap<R>& f, std::span<const ProjPoint<R>> cycle, double tol) {
  if (cycle.empty()) throw Error(ErrorKind::InvalidArgument, "empty cycle");
  const std::size_t m = cycle.size();
  Complex<R> mult(1);
  for (std::size_t i = 0; i < m; ++i) {
    const ProjPoint<R>& cur = cycle[i];
    const ProjPoint<R>& next = cycle[(i + 1) % m];
    const ProjPoint<R> img = apply_map(f, cur);
    if (projective_distance(img, next) > R(tol)) {
      throw Error(ErrorKind::CycleBroken,
                  "point " + std::to_string(i) + " does not map onto its successor (distance " +
                      std::to_string(static_cast<double>(projective_distance(img, next))) + ")");
    }
    mult *= f.chart_derivative(cur, chart_of(cur), chart_of(next));
  }
  return mult;
}

template <class R>
PeriodicNewtonStep<R> periodic_newton_step(const RationalMap<R>& f, const ProjPoint<R>& p, int m) {
  const Chart home = chart_of(p);
  ProjPoint<R> cur = p;
  Complex<R> deriv(1);
  for (int k = 0; k < m; ++k) {
    const ProjPoint<R> next = apply_map(f, cur);
    const Chart target = (k == m - 1) ? home : chart_of(next);
    deriv *= f.chart_derivative(cur, chart_of(cur), target);
    cur = next;
  }
  using std::abs;
  const Complex<R> z = chart_coordinate(p, home);
  // Image read in the home chart; a point far outside the chart simply
  // produces a large displacement.
  const Complex<R> num = home == Chart::Z ? cur.x : cur.y;
  const Complex<R> den = home == Chart::Z ? cur.y : cur.x;
  PeriodicNewtonStep<R> out{p, deriv, R(0)};
  if (den == Complex<R>(0)) {
    out.displacement = std::numeric_limits<R>::infinity();
    return out;
  }
  const Complex<R> g = num / den - z;
  out.displacement = abs(g);
  const Complex<R> dg = deriv - Complex<R>(1);
  if (dg == Complex<R>(0)) return out;
  const Complex<R> z_new = z - g / dg;
  out.point = home == Chart::Z ? ProjPoint<R>::normalized(z_new, Complex<R>(1))
                               : ProjPoint<R>::normalized(Complex<R>(1), z_new);
  return out;
}

#define MULTSPEC_INSTANTIATE(R)                                                                          \
  template struct ProjPoint<R>;                                                                          \
  template R projective_distance(const ProjPoint<R>&, const ProjPoint<R>&);                              \
  template Chart chart_of(const ProjPoint<R>&);                                                          \
  template Complex<R> chart_coordinate(const ProjPoint<R>&, Chart);                                      \
  template class Moebius<R>;                                                                             \
  template class RationalMap<R>;                                                                         \
  template RationalMap<R> make_map(HomForm<R>, HomForm<R>);                                              \
  template std::pair<HomForm<R>, HomForm<R>> iterate_forms(const RationalMap<R>&, int);                  \
  template std::vector<std::pair<HomForm<R>, HomForm<R>>> iterate_forms_all(const RationalMap<R>&, int); \
  template std::pair<HomForm<R>, HomForm<R>> substitute(const HomForm<R>&, const HomForm<R>&,            \
                                                        const HomForm<R>&, const HomForm<R>&);           \
  template RationalMap<R> conjugate_map(const RationalMap<R>&, const Moebius<R>&);                       \
  template ProjPoint<R> apply_map(const RationalMap<R>&, const ProjPoint<R>&);                           \
  template Complex<R> multiplier_along_cycle(const RationalMap<R>&, std::span<const ProjPoint<R>>, double); \
  template PeriodicNewtonStep<R> periodic_newton_step(const RationalMap<R>&, const ProjPoint<R>&, int);

MULTSPEC_INSTANTIATE(double)
MULTSPEC_INSTANTIATE(Quad)

#undef MULTSPEC_INSTANTIATE

}  // namespace multspec
