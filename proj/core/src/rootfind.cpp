#include "multspec/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <type_traits>

namespace multspec {

namespace {

// Slack on the input rounding level for accepting a merged cluster.
constexpr double kMultipleRootSlack = 64.0;

template <class R>
double log_abs(const Complex<R>& c) {
  using std::abs;
  using std::log;
  return static_cast<double>(log(abs(c)));
}

// Upper convex hull of (i, log|a_i|) gives the radii of the initial
// circles; each hull edge contributes as many points as its width.
template <class R>
std::vector<Complex<R>> initial_points(std::span<const Complex<R>> a, const RootOptions& opts) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<int> idx;
  std::vector<double> lg(a.size(), -std::numeric_limits<double>::infinity());
  for (int i = 0; i <= n; ++i) {
    if (a[static_cast<std::size_t>(i)] == Complex<R>(0)) continue;
    lg[static_cast<std::size_t>(i)] = log_abs(a[static_cast<std::size_t>(i)]);
    idx.push_back(i);
  }
  std::vector<int> hull;
  for (int i : idx) {
    while (hull.size() >= 2) {
      const int i0 = hull[hull.size() - 2];
      const int i1 = hull.back();
      const double cross = (i1 - i0) * (lg[static_cast<std::size_t>(i)] - lg[static_cast<std::size_t>(i0)]) -
                           (i - i0) * (lg[static_cast<std::size_t>(i1)] - lg[static_cast<std::size_t>(i0)]);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  constexpr double kGoldenAngle = 2.399963229728653;
  std::vector<Complex<R>> z;
  z.reserve(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int i0 = hull[e];
    const int i1 = hull[e + 1];
    const int count = i1 - i0;
    const double radius =
        std::exp((lg[static_cast<std::size_t>(i0)] - lg[static_cast<std::size_t>(i1)]) / count);
    for (int j = 0; j < count; ++j) {
      const double r = radius * (1.0 + opts.perturbation * jitter(rng));
      const double theta = 2.0 * std::numbers::pi * j / count + kGoldenAngle * (e + 1) + 0.4 +
                           opts.perturbation * jitter(rng);
      z.emplace_back(R(r * std::cos(theta)), R(r * std::sin(theta)));
    }
  }
  return z;
}

template <class R>
struct Evaluation {
  Complex<R> newton;  // p / p'
  R value_abs;        // |p| (or |rev p| outside the unit disc)
  R bound;            // sum |a_k| |z|^k in the same scaling
  bool derivative_zero;
  R bound_over_derivative;  // sum |a_k| |z|^k / |p'(z)|, scaling-free
};

// Horner for p and p' inside the unit disc; outside, the reversed
// polynomial in 1/z keeps the evaluation stable.
template <class R>
Evaluation<R> evaluate(std::span<const Complex<R>> a, const Complex<R>& z) {
  using std::abs;
  const int n = static_cast<int>(a.size()) - 1;
  Complex<R> p(0), dp(0);
  R bound(0);
  if (abs(z) <= R(1)) {
    const R az = abs(z);
    for (int k = n; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[static_cast<std::size_t>(k)];
      bound = bound * az + abs(a[static_cast<std::size_t>(k)]);
    }
    if (dp == Complex<R>(0)) return {Complex<R>(0), abs(p), bound, true, R(0)};
    return {p / dp, abs(p), bound, false, bound / abs(dp)};
  }
  const Complex<R> y = Complex<R>(1) / z;
  const R ay = abs(y);
  for (int k = 0; k <= n; ++k) {
    dp = dp * y + p;
    p = p * y + a[static_cast<std::size_t>(k)];
    bound = bound * ay + abs(a[static_cast<std::size_t>(k)]);
  }
  const Complex<R> den = R(static_cast<double>(n)) * p - y * dp;
  if (den == Complex<R>(0)) return {Complex<R>(0), abs(p), bound, true, R(0)};
  return {z * p / den, abs(p), bound, false, abs(z) * bound / abs(den)};
}

template <class R>
Complex<R> compensated_newton(std::span<const Complex<R>> a, const Complex<R>& z) {
  if constexpr (std::is_same_v<R, double>) {
    using std::abs;
    if (abs(z) <= 1.0) {
      const Poly<double> p(std::vector<Cplx>(a.begin(), a.end()));
      const Cplx dpz = p.derivative()(z);
      if (dpz == Cplx(0)) return Cplx(0);
      return eval_compensated(p, z) / dpz;
    }
  }
  return evaluate(a, z).newton;
}

// A cluster of multiplicity m is a simple root of p^(m-1); Newton there
// recovers the center far better than the mean of the iterates, whose
// errors are of order u^(1/m). Steps leaving the cluster are discarded.
template <class R>
Complex<R> refine_center(std::span<const Complex<R>> a, const Complex<R>& start, int m, R limit) {
  using std::abs;
  std::vector<Complex<R>> d(a.begin(), a.end());
  for (int k = 1; k < m && d.size() > 1; ++k) {
    for (std::size_t i = 1; i < d.size(); ++i) d[i - 1] = d[i] * R(static_cast<double>(i));
    d.pop_back();
  }
  if (d.size() < 2) return start;
  Complex<R> w = start;
  for (int it = 0; it < 8; ++it) {
    const Evaluation<R> ev = evaluate<R>(d, w);
    if (ev.derivative_zero || !is_finite(ev.newton)) break;
    w -= ev.newton;
    if (!(abs(w - start) <= limit)) return start;
    if (abs(ev.newton) <= R(4) * unit_roundoff<R>() * (R(1) + abs(w))) break;
  }
  return w;
}

// max over k < m of |p^(k)(c)/k!| / sum_j |a_j| C(j,k) |c|^(j-k): the
// relative coefficient perturbation that makes c an m-fold root.
template <class R>
R multiple_root_excess(std::span<const Complex<R>> a, const Complex<R>& c, int m) {
  using std::abs;
  std::vector<Complex<R>> t(a.begin(), a.end());
  std::vector<R> b(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) b[j] = abs(a[j]);
  const R ac = abs(c);
  const int n = static_cast<int>(a.size()) - 1;
  R worst(0);
  for (int k = 0; k < m && k <= n; ++k) {
    Complex<R> acc(0);
    R bacc(0);
    for (int j = n; j >= k; --j) {
      acc = acc * c + t[static_cast<std::size_t>(j)];
      t[static_cast<std::size_t>(j)] = acc;
      bacc = bacc * ac + b[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(j)] = bacc;
    }
    if (bacc > R(0)) worst = std::max(worst, R(abs(acc) / bacc));
  }
  return worst;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

template <class R>
std::vector<AffineCluster<R>> solve_at(const Poly<R>& poly, const RootOptions& opts, int max_iterations,
                                      double input_roundoff) {
  using std::abs;
  const auto all = poly.coeffs();
  std::size_t zeros = 0;
  while (zeros < all.size() && all[zeros] == Complex<R>(0)) ++zeros;
  const std::span<const Complex<R>> a = all.subspan(zeros);
  const int n = static_cast<int>(a.size()) - 1;
  const R u = unit_roundoff<R>();

  std::vector<Complex<R>> z;
  std::vector<R> radius;
  if (n == 1) {
    z.push_back(-a[0] / a[1]);
  } else if (n > 1) {
    z = initial_points(a, opts);
    std::vector<char> done(z.size(), 0);
    const R stop = R(4.0 * (n + 1)) * u;
    bool converged = false;
    for (int iter = 0; iter < max_iterations && !converged; ++iter) {
      converged = true;
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (done[i]) continue;
        const Evaluation<R> ev = evaluate(a, z[i]);
        if (ev.value_abs <= stop * ev.bound) {
          done[i] = 1;
          continue;
        }
        converged = false;
        if (ev.derivative_zero) {
          z[i] += Complex<R>(R(1e-3) * (R(1) + abs(z[i])), R(1e-3));
          continue;
        }
        Complex<R> sum(0);
        for (std::size_t j = 0; j < z.size(); ++j)
          if (j != i) sum += Complex<R>(1) / (z[i] - z[j]);
        const Complex<R> corr = ev.newton / (Complex<R>(1) - ev.newton * sum);
        if (is_finite(corr)) z[i] -= corr;
      }
    }
    if (!converged) {
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (done[i]) continue;
        const Evaluation<R> ev = evaluate(a, z[i]);
        if (!(ev.value_abs <= stop * ev.bound)) {
          throw Error(ErrorKind::NoConvergence,
                      "root iteration did not converge in " + std::to_string(max_iterations) + " sweeps");
        }
      }
    }
    // Isolated roots get one Newton step with the more accurate evaluation.
    for (std::size_t i = 0; i < z.size(); ++i) {
      R nearest = std::numeric_limits<R>::infinity();
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != i) nearest = std::min(nearest, R(abs(z[i] - z[j])));
      const Complex<R> step = compensated_newton(a, z[i]);
      if (is_finite(step) && abs(step) < R(0.01) * nearest) z[i] -= step;
    }
  }

  // Inclusion radii: n |p / p'| (Newton), floored at the rounding level
  // and at the pseudozero radius u_in sum |a_k| |z|^k / |p'(z)| of the
  // input coefficients. The latter keeps a multiple root of a double
  // polynomial together when it is solved at 113 bits.
  for (const auto& zi : z) {
    const Evaluation<R> ev = evaluate(a, zi);
    R r = ev.derivative_zero ? std::numeric_limits<R>::infinity() : R(static_cast<double>(n)) * abs(ev.newton);
    R floor_r = R(4) * u * (R(1) + abs(zi));
    if (!ev.derivative_zero && R(input_roundoff) > R(2) * u) {
      const R pseudo = R(input_roundoff) * ev.bound_over_derivative;
      if (pseudo > floor_r) floor_r = pseudo;
    }
    radius.push_back(r > floor_r ? r : floor_r);
  }
  for (std::size_t k = 0; k < zeros; ++k) {
    z.push_back(Complex<R>(0));
    radius.push_back(R(0));
  }

  // Single-linkage groups of `members` at the given merge factor.
  auto group = [&](const std::vector<std::size_t>& members, R factor) {
    DisjointSets sets(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const std::size_t p = members[i], q = members[j];
        if (abs(z[p] - z[q]) <= factor * std::max(radius[p], radius[q])) sets.unite(i, j);
      }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(members.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::size_t root = sets.find(i);
      if (slot[root] == std::numeric_limits<std::size_t>::max()) {
        slot[root] = groups.size();
        groups.emplace_back();
      }
      groups[slot[root]].push_back(members[i]);
    }
    return groups;
  };

  // With the input pseudozero floor in play, a merged cluster must also be
  // a pseudo-multiple root of the input; otherwise distinct nearby roots
  // would be fused. Failing groups are regrouped at half the factor when
  // the pieces stay apart.
  const bool check_multiple = R(input_roundoff) > R(2) * u;
  std::vector<std::size_t> everyone(z.size());
  std::iota(everyone.begin(), everyone.end(), 0);
  std::vector<std::pair<std::vector<std::size_t>, R>> work;
  for (auto& g : group(everyone, R(opts.merge_factor))) work.emplace_back(std::move(g), R(opts.merge_factor));
  // Same criterion as the overlap check on the final clusters.
  auto separated = [&](const std::vector<std::vector<std::size_t>>& parts) {
    std::vector<Complex<R>> c;
    std::vector<R> r;
    for (const auto& g : parts) {
      Complex<R> mean(0);
      for (std::size_t i : g) mean += z[i];
      mean /= R(static_cast<double>(g.size()));
      R reach(0);
      for (std::size_t i : g) reach = std::max(reach, R(abs(z[i] - mean) + radius[i]));
      c.push_back(mean);
      r.push_back(reach);
    }
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        const R sep = abs(c[i] - c[j]);
        if (!(r[i] * 3 < sep && r[j] * 3 < sep)) return false;
      }
    return true;
  };
  std::vector<AffineCluster<R>> clusters;
  while (!work.empty()) {
    auto [members, factor] = std::move(work.back());
    work.pop_back();
    const int m = static_cast<int>(members.size());
    Complex<R> center(0);
    for (std::size_t i : members) center += z[i];
    center /= R(static_cast<double>(m));
    auto reach = [&](const Complex<R>& c) {
      R r(0);
      for (std::size_t i : members) r = std::max(r, R(abs(z[i] - c) + radius[i]));
      return r;
    };
    if (m >= 2) {
      center = refine_center(all, center, m, reach(center));
      if (check_multiple && factor > R(1) &&
          multiple_root_excess(all, center, m) > R(kMultipleRootSlack) * R(input_roundoff)) {
        auto parts = group(members, factor / 2);
        if (separated(parts)) {
          for (auto& g : parts) work.emplace_back(std::move(g), factor / 2);
          continue;
        }
      }
    }
    clusters.push_back(AffineCluster<R>{center, m, reach(center), R(0)});
  }
  for (auto& c : clusters) {
    const Evaluation<R> ev = evaluate(all, c.center);
    c.residual = ev.bound > R(0) ? ev.value_abs / ev.bound : ev.value_abs;
  }

  if constexpr (std::is_same_v<R, double>) {
    for (const auto& c : clusters)
      if (!(c.radius <= R(opts.max_cluster_radius) * (R(1) + abs(c.center))))
        throw Error(ErrorKind::NoConvergence, "root cluster radius too wide at this precision");
  }

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      const R sep = abs(clusters[i].center - clusters[j].center);
      if (!(clusters[i].radius * 3 < sep && clusters[j].radius * 3 < sep))
        throw Error(ErrorKind::NoConvergence, "root clusters overlap; conditioning too poor at this precision");
    }
  }

  std::sort(clusters.begin(), clusters.end(), [](const AffineCluster<R>& x, const AffineCluster<R>& y) {
    if (x.center.real() != y.center.real()) return x.center.real() < y.center.real();
    return x.center.imag() < y.center.imag();
  });
  return clusters;
}

}  // namespace

template <class R>
std::vector<AffineCluster<R>> roots_univariate(const Poly<R>& p, const RootOptions& opts) {
  if (p.degree() < 1) throw Error(ErrorKind::InvalidArgument, "root finding needs degree >= 1");
  if constexpr (std::is_same_v<R, double>) {
    try {
      return solve_at(p, opts, opts.max_iterations, unit_roundoff<double>());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence || !opts.allow_extended) throw;
      std::vector<Complex<Quad>> wide;
      for (const auto& c : p.coeffs()) wide.push_back(complex_cast<Quad>(c));
      const auto qc =
          solve_at(Poly<Quad>(std::move(wide)), opts, opts.max_iterations_extended, unit_roundoff<double>());
      std::vector<AffineCluster<double>> out;
      for (const auto& c : qc)
        out.push_back({complex_cast<double>(c.center), c.multiplicity, static_cast<double>(c.radius),
                       static_cast<double>(c.residual)});
      return out;
    }
  } else {
    return solve_at(p, opts, opts.max_iterations_extended, static_cast<double>(unit_roundoff<Quad>()));
  }
}

template <class R>
std::vector<RootCluster<R>> projective_roots(const HomForm<R>& form, const RootOptions& opts) {
  if (form.is_zero() || form.degree() < 1)
    throw Error(ErrorKind::InvalidArgument, "projective roots need a nonzero form of degree >= 1");
  using std::abs;
  const auto c = form.coeffs();
  // Top coefficients below the rounding level of the form count as zero.
  const R negligible = unit_roundoff<R>() * form.norm_inf();
  int top = form.degree();
  while (top >= 0 && abs(c[static_cast<std::size_t>(top)]) <= negligible) --top;
  const int deficit = form.degree() - top;

  std::vector<RootCluster<R>> out;
  if (top >= 1) {
    const Poly<R> affine(std::vector<Complex<R>>(c.begin(), c.begin() + top + 1));
    for (const auto& ac : roots_univariate(affine, opts)) {
      const R az = abs(ac.center);
      const R r = az > R(1) ? ac.radius / (az * az) : ac.radius;
      out.push_back(RootCluster<R>{ProjPoint<R>::affine(ac.center), ac.multiplicity, r, ac.residual});
    }
  }
  if (deficit > 0) out.push_back(RootCluster<R>{ProjPoint<R>::infinity(), deficit, R(0), R(0)});
  return out;
}

template std::vector<AffineCluster<double>> roots_univariate(const Poly<double>&, const RootOptions&);
template std::vector<AffineCluster<Quad>> roots_univariate(const Poly<Quad>&, const RootOptions&);
template std::vector<RootCluster<double>> projective_roots(const HomForm<double>&, const RootOptions&);
template std::vector<RootCluster<Quad>> projective_roots(const HomForm<Quad>&, const RootOptions&);

}  // namespace multspec
