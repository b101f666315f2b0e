#include "multspec/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>

namespace multspec {

namespace {

constexpr int kPolishSteps = 8;
// Cycles whose multiplier is this close to 1 are left unpolished: f^m(z) - z
// has a multiple root there.
constexpr double kParabolicGuard = 1e-3;
// Farthest a simple root may move when it is polished before a second
// matching attempt.
constexpr double kPrematchReach = 1e-6;
constexpr int kImplicitSweeps = 500;
// Where the pointwise fallback puts t = infinity, tried in order.
constexpr Cplx kImplicitChartPoints[] = {Cplx(0.37, 0.61), Cplx(-0.83, 0.29), Cplx(0.12, -1.7)};

template <class R>
struct Cluster {
  ProjPoint<R> center;
  int multiplicity;
  R radius;
};

template <class R>
struct RawCycle {
  std::vector<ProjPoint<R>> points;
  Complex<R> multiplier;
  int multiplicity;
};

template <class R>
R lipschitz_at(const RationalMap<R>& f, const ProjPoint<R>& p, const ProjPoint<R>& image) {
  using std::abs;
  const R k = abs(f.chart_derivative(p, chart_of(p), chart_of(image)));
  return is_finite(Complex<R>(k)) ? k : R(1);
}

// Successor index of every cluster under f, or OrbitMatchFailed.
template <class R>
std::vector<std::size_t> match_images(const RationalMap<R>& f, const std::vector<Cluster<R>>& clusters,
                                      const std::vector<ProjPoint<R>>& images, double floor_tol) {
  const std::size_t count = clusters.size();
  std::vector<std::size_t> next(count);
  std::vector<char> hit(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t best = count;
    R best_dist = std::numeric_limits<R>::infinity();
    for (std::size_t j = 0; j < count; ++j) {
      const R dist = projective_distance(images[i], clusters[j].center);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    const R lip = lipschitz_at(f, clusters[i].center, images[i]);
    const R tol = std::max(R(floor_tol), R(10) * (lip * clusters[i].radius + clusters[best].radius));
    if (best == count || !(best_dist <= tol) || hit[best] ||
        clusters[best].multiplicity != clusters[i].multiplicity) {
      throw Error(ErrorKind::OrbitMatchFailed,
                  "image of root " + std::to_string(i) + " matches no unused root (distance " +
                      std::to_string(static_cast<double>(best_dist)) + ")");
    }
    hit[best] = 1;
    next[i] = best;
  }
  return next;
}

template <class R>
RawCycle<R> polish_cycle(const RationalMap<R>& f, std::vector<ProjPoint<R>> points, int multiplicity,
                         double match_tol) {
  using std::abs;
  const int m = static_cast<int>(points.size());
  Complex<R> lambda = multiplier_along_cycle<R>(f, points, match_tol);
  if (abs(lambda - Complex<R>(1)) > R(kParabolicGuard)) {
    ProjPoint<R> p = points.front();
    R last = std::numeric_limits<R>::infinity();
    for (int step = 0; step < kPolishSteps; ++step) {
      const auto ns = periodic_newton_step(f, p, m);
      if (!(ns.displacement < last)) break;
      last = ns.displacement;
      if (ns.displacement == R(0)) break;
      p = ns.point;
    }
    std::vector<ProjPoint<R>> orbit{p};
    for (int k = 1; k < m; ++k) orbit.push_back(apply_map(f, orbit.back()));
    bool consistent = true;
    for (int k = 0; k < m && consistent; ++k)
      consistent = projective_distance(orbit[static_cast<std::size_t>(k)], points[static_cast<std::size_t>(k)]) <=
                   R(match_tol) + R(100) * last;
    if (consistent) {
      const R closure = projective_distance(apply_map(f, orbit.back()), orbit.front());
      const R tol = std::max(R(match_tol), R(10) * closure);
      lambda = multiplier_along_cycle<R>(f, orbit, static_cast<double>(tol));
      points = std::move(orbit);
    }
  }
  return RawCycle<R>{std::move(points), lambda, multiplicity};
}

template <class R>
std::vector<Cluster<R>> form_clusters(const RationalMap<R>& f, int n, const SpectraOptions& opts, Precision& used) {
  const auto dyn = dynatomic_form(f, n, opts.division_tol);
  if (dyn.precision == Precision::Extended) used = Precision::Extended;
  RootOptions ropts = opts.roots;
  ropts.allow_extended = false;
  std::vector<Cluster<R>> clusters;
  for (const auto& rc : projective_roots(dyn.form, ropts)) clusters.push_back({rc.center, rc.multiplicity, rc.radius});
  return clusters;
}

// The dynatomic form as a function of t on the chart t -> M (t, 1), where M
// is unitary and sends t = infinity to a chosen point. Values come from the
// homogeneous iteration of f rather than from expanded coefficients, whose
// roots can be hopelessly ill-conditioned at large n even though the
// periodic points themselves are not.
template <class R>
class ImplicitDynatomic {
 public:
  ImplicitDynatomic(const RationalMap<R>& f, int n, const Complex<R>& a)
      : f_(f), px_(f.numerator().partial_x()), py_(f.numerator().partial_y()), qx_(f.denominator().partial_x()),
        qy_(f.denominator().partial_y()), n_(n) {
    using std::sqrt;
    const R s = R(1) / sqrt(R(1) + std::norm(a));
    m_ = {s, -std::conj(a) * s, a * s, s};
    for (int k : divisors(n))
      if (const int mu = moebius_mu(n / k); mu != 0) terms_.emplace_back(k, mu);
  }

  ProjPoint<R> point(const Complex<R>& t) const { return ProjPoint<R>::normalized(m_[0] * t + m_[1], m_[2] * t + m_[3]); }

  /// Newton correction p / p' at t; zero on an exact root.
  Complex<R> newton(const Complex<R>& t) const {
    using std::abs;
    const Complex<R> x0 = m_[0] * t + m_[1], y0 = m_[2] * t + m_[3];
    Complex<R> x = x0, y = y0, dx = m_[0], dy = m_[2];
    Complex<R> log_derivative(0);
    std::size_t next = 0;
    for (int j = 1; j <= n_; ++j) {
      const Complex<R> a = f_.numerator()(x, y), b = f_.denominator()(x, y);
      const Complex<R> da = px_(x, y) * dx + py_(x, y) * dy;
      const Complex<R> db = qx_(x, y) * dx + qy_(x, y) * dy;
      const R scale = std::max(abs(a), abs(b));
      if (scale == R(0)) throw Error(ErrorKind::IndeterminatePoint, "iterate vanished");
      x = a / scale, y = b / scale, dx = da / scale, dy = db / scale;
      if (next < terms_.size() && terms_[next].first == j) {
        const Complex<R> p = x * y0 - y * x0;
        if (p == Complex<R>(0)) return Complex<R>(0);
        const Complex<R> dp = dx * y0 + x * m_[2] - dy * x0 - y * m_[0];
        log_derivative += R(static_cast<double>(terms_[next].second)) * dp / p;
        ++next;
      }
    }
    return Complex<R>(1) / log_derivative;
  }

 private:
  const RationalMap<R>& f_;
  HomForm<R> px_, py_, qx_, qy_;
  int n_;
  std::array<Complex<R>, 4> m_;
  std::vector<std::pair<int, int>> terms_;
};

template <class R>
std::vector<Cluster<R>> implicit_clusters(const RationalMap<R>& f, int n, const SpectraOptions& opts,
                                          const Complex<R>& a) {
  using std::abs;
  using std::pow;
  const ImplicitDynatomic<R> g(f, n, a);
  const int count = static_cast<int>(nu_count(f.degree(), n));
  const R u = unit_roundoff<R>();
  const R done_tol = pow(u, R(0.75));
  const R accept_tol = pow(u, R(0.25));

  std::vector<Complex<R>> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double theta = 2.0 * std::numbers::pi * (i + 0.25) / count + 0.3;
    t[static_cast<std::size_t>(i)] = Complex<R>(R(std::cos(theta)), R(std::sin(theta)));
  }
  std::vector<char> done(t.size(), 0);
  std::vector<Complex<R>> w(t.size());
  for (int sweep = 0; sweep < kImplicitSweeps; ++sweep) {
    bool all_done = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (done[i]) continue;
      w[i] = g.newton(t[i]);
      if (abs(w[i]) <= done_tol * (R(1) + abs(t[i]))) {
        done[i] = 1;
        continue;
      }
      all_done = false;
      Complex<R> sum(0);
      for (std::size_t j = 0; j < t.size(); ++j)
        if (j != i) sum += Complex<R>(1) / (t[i] - t[j]);
      const Complex<R> corr = w[i] / (Complex<R>(1) - w[i] * sum);
      if (is_finite(corr)) t[i] -= corr;
    }
    if (all_done) break;
  }

  std::vector<R> radius(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Complex<R> wi = g.newton(t[i]);
    if (!is_finite(wi) || !(abs(wi) <= accept_tol * (R(1) + abs(t[i]))))
      throw Error(ErrorKind::NoConvergence, "implicit periodic point iteration did not converge");
    radius[i] = std::max(R(static_cast<double>(count)) * abs(wi), R(4) * u * (R(1) + abs(t[i])));
  }

  std::vector<std::size_t> parent(t.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const R factor = R(opts.roots.merge_factor);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (abs(t[i] - t[j]) <= factor * std::max(radius[i], radius[j])) parent[find(j)] = find(i);

  std::vector<Cluster<R>> clusters;
  for (std::size_t root = 0; root < t.size(); ++root) {
    if (find(root) != root) continue;
    Complex<R> center(0);
    int m = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (find(i) == root) center += t[i], ++m;
    center /= R(static_cast<double>(m));
    R reach(0);
    for (std::size_t i = 0; i < t.size(); ++i)
      if (find(i) == root) reach = std::max(reach, R(abs(t[i] - center) + radius[i]));
    // Chart distances shrink by 1 + |t|^2 on the sphere.
    const R ac = abs(center);
    clusters.push_back({g.point(center), m, ac > R(1) ? reach / (ac * ac) : reach});
  }
  return clusters;
}

template <class R>
std::vector<RawCycle<R>> cycles_from(const RationalMap<R>& f, int n, std::vector<Cluster<R>> clusters,
                                     const SpectraOptions& opts) {
  std::vector<ProjPoint<R>> images;
  images.reserve(clusters.size());
  for (const auto& c : clusters) images.push_back(apply_map(f, c.center));
  std::vector<std::size_t> next;
  try {
    next = match_images(f, clusters, images, opts.projective_tol);
  } catch (const Error&) {
    // Roots in a tight group can be off by far more than their radii when
    // the form's coefficients carry division error. Newton on f^n(z) = z
    // recovers the periodic points themselves.
    for (auto& c : clusters) {
      if (c.multiplicity != 1) continue;
      ProjPoint<R> p = c.center;
      R last = std::numeric_limits<R>::infinity();
      for (int step = 0; step < kPolishSteps; ++step) {
        const auto ns = periodic_newton_step(f, p, n);
        if (!(ns.displacement < last)) break;
        last = ns.displacement;
        p = ns.point;
        if (last == R(0)) break;
      }
      const R moved = projective_distance(p, c.center);
      if (moved <= R(kPrematchReach)) {
        c.center = p;
        c.radius = std::max(c.radius, last);
      }
    }
    for (std::size_t i = 0; i < clusters.size(); ++i) images[i] = apply_map(f, clusters[i].center);
    next = match_images(f, clusters, images, opts.projective_tol);
  }

  std::vector<RawCycle<R>> out;
  std::vector<char> seen(clusters.size(), 0);
  for (std::size_t start = 0; start < clusters.size(); ++start) {
    if (seen[start]) continue;
    std::vector<ProjPoint<R>> points;
    R worst_radius(0);
    std::size_t i = start;
    do {
      seen[i] = 1;
      points.push_back(clusters[i].center);
      worst_radius = std::max(worst_radius, clusters[i].radius);
      i = next[i];
    } while (i != start && points.size() <= clusters.size());
    if (i != start || n % static_cast<int>(points.size()) != 0)
      throw Error(ErrorKind::OrbitMatchFailed, "orbit length does not divide the period");
    R lip(1);
    for (std::size_t k = 0; k < points.size(); ++k)
      lip = std::max(lip, lipschitz_at(f, points[k], apply_map(f, points[k])));
    const double match_tol =
        std::max(opts.projective_tol, static_cast<double>(R(20) * lip * worst_radius));
    out.push_back(polish_cycle(f, std::move(points), clusters[start].multiplicity, match_tol));
  }
  return out;
}

template <class R>
CycleSet to_cycle_set(const std::vector<RawCycle<R>>& raw, int n, Precision used, const SpectraOptions& opts) {
  CycleSet set{n, {}, used};
  for (const auto& rc : raw) {
    CycleRecord rec;
    for (const auto& p : rc.points) rec.points.push_back(convert<double>(p));
    rec.multiplier = complex_cast<double>(rc.multiplier);
    rec.multiplicity = rc.multiplicity;
    rec.formal_periods = formal_periods_of(static_cast<int>(rc.points.size()), rec.multiplier,
                                           opts.root_of_unity_tol, opts.max_root_order);
    set.cycles.push_back(std::move(rec));
  }
  return set;
}

// Multipliers df^n of every formal period-n point, computed at the
// precision the cycles were found with.
template <class R>
std::vector<Cplx> layer_values(const std::vector<RawCycle<R>>& raw, int n) {
  std::vector<Cplx> values;
  for (const auto& rc : raw) {
    const int m = static_cast<int>(rc.points.size());
    const Cplx lambda_n = complex_cast<double>(ipow(rc.multiplier, n / m));
    for (int k = 0; k < m * rc.multiplicity; ++k) values.push_back(lambda_n);
  }
  return values;
}

struct Assembled {
  CycleSet cycles;
  std::vector<Cplx> values;
};

template <class R>
Assembled assemble_with(const RationalMap<R>& f, int n, const SpectraOptions& opts, Precision used) {
  auto raw = cycles_from(f, n, form_clusters(f, n, opts, used), opts);
  return Assembled{to_cycle_set(raw, n, used, opts), layer_values(raw, n)};
}

Assembled assemble(const RationalMap<double>& f, int n, const SpectraOptions& opts) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "period must be >= 1");
  if (opts.precision == Precision::Double) {
    try {
      return assemble_with(f, n, opts, Precision::Double);
    } catch (const Error& e) {
      if (!is_numerical(e.kind())) throw;
    }
  }
  const auto fq = convert<Quad>(f);
  try {
    return assemble_with(fq, n, opts, Precision::Extended);
  } catch (const Error& e) {
    if (!is_numerical(e.kind())) throw;
  }
  // Last resort: roots of the dynatomic form found pointwise. Each chart
  // puts t = infinity somewhere else, in case it hits a periodic point.
  std::optional<Error> last;
  for (const Cplx& a : kImplicitChartPoints) {
    try {
      auto raw = cycles_from(fq, n, implicit_clusters(fq, n, opts, complex_cast<Quad>(a)), opts);
      return Assembled{to_cycle_set(raw, n, Precision::Extended, opts), layer_values(raw, n)};
    } catch (const Error& e) {
      if (!is_numerical(e.kind())) throw;
      last = e;
    }
  }
  throw *last;
}

SpectrumLayer layer_from(Assembled&& a, const RationalMap<double>& f, int n) {
  SpectrumLayer layer{n, std::move(a.values), a.cycles.precision};
  if (static_cast<std::int64_t>(layer.multipliers.size()) != nu_count(f.degree(), n))
    throw Error(ErrorKind::OrbitMatchFailed, "layer size differs from the nominal count");
  return layer;
}

}  // namespace

CycleSet assemble_cycles(const RationalMap<double>& f, int n, const SpectraOptions& opts) {
  return assemble(f, n, opts).cycles;
}

std::vector<int> formal_periods_of(int m, const Cplx& multiplier, double tol, int max_root_order) {
  std::vector<int> out{m};
  Cplx power = multiplier;
  for (int r = 1; r <= max_root_order; ++r) {
    if (std::abs(power - Cplx(1)) <= tol) {
      if (r >= 2) out.push_back(m * r);
      break;
    }
    power *= multiplier;
  }
  return out;
}

std::vector<int> formal_exact_periods(const RationalMap<double>& f, const ProjPoint<double>& x, int max_period,
                                      const SpectraOptions& opts) {
  if (max_period < 1) throw Error(ErrorKind::InvalidArgument, "max_period must be >= 1");
  std::vector<ProjPoint<double>> orbit{x};
  for (int k = 1; k <= max_period; ++k) {
    const ProjPoint<double> img = apply_map(f, orbit.back());
    if (projective_distance(img, x) <= opts.projective_tol) {
      const Cplx lambda = multiplier_along_cycle<double>(f, orbit, opts.projective_tol);
      return formal_periods_of(k, lambda, opts.root_of_unity_tol, opts.max_root_order);
    }
    orbit.push_back(img);
  }
  throw Error(ErrorKind::NotPeriodic, "point does not return within " + std::to_string(max_period) + " steps");
}

SpectrumLayer spectrum_layer(const RationalMap<double>& f, int n, const SpectraOptions& opts) {
  return layer_from(assemble(f, n, opts), f, n);
}

SigmaVector sigma_coords(const std::vector<Cplx>& values) {
  // coeff[k] holds the coefficient of T^(count - k) so far.
  std::vector<Cplx> coeff(values.size() + 1, Cplx(0));
  coeff[0] = Cplx(1);
  std::size_t count = 0;
  for (const Cplx& v : values) {
    ++count;
    for (std::size_t k = count; k >= 1; --k) coeff[k] += v * coeff[k - 1];
  }
  return SigmaVector{std::vector<Cplx>(coeff.begin() + 1, coeff.end())};
}

SigmaVector sigma_coords(const SpectrumLayer& layer) { return sigma_coords(layer.multipliers); }

std::vector<SigmaVector> rho_vector(const RationalMap<double>& f, int n, int m, const SpectraOptions& opts) {
  if (n < 1 || n > m) throw Error(ErrorKind::InvalidArgument, "window needs 1 <= n <= m");
  std::vector<SigmaVector> out;
  for (int j = n; j <= m; ++j) out.push_back(sigma_coords(spectrum_layer(f, j, opts)));
  return out;
}

bool superattracting_in_range(const RationalMap<double>& f, int n, int m, const SpectraOptions& opts) {
  if (n < 1 || n > m) throw Error(ErrorKind::InvalidArgument, "window needs 1 <= n <= m");
  for (int j = n; j <= m; ++j) {
    const SpectrumLayer layer = spectrum_layer(f, j, opts);
    for (const Cplx& v : layer.multipliers)
      if (std::abs(v) <= opts.superattracting_tol) return true;
  }
  return false;
}

SigmaVector delta_layer(const SpectrumLayer& layer, double superattracting_tol) {
  std::vector<Cplx> reciprocals;
  reciprocals.reserve(layer.multipliers.size());
  for (const Cplx& v : layer.multipliers) {
    if (std::abs(v) <= superattracting_tol)
      throw Error(ErrorKind::Superattracting, "superattracting at period " + std::to_string(layer.n), layer.n);
    reciprocals.push_back(Cplx(1) / v);
  }
  return sigma_coords(reciprocals);
}

SigmaVector delta_layer(const RationalMap<double>& f, int n, const SpectraOptions& opts) {
  return delta_layer(spectrum_layer(f, n, opts), opts.superattracting_tol);
}

TauVector tau_vector(const RationalMap<double>& f, int n, int m, const SpectraOptions& opts) {
  if (n < 1 || n > m) throw Error(ErrorKind::InvalidArgument, "window needs 1 <= n <= m");
  TauVector tau{n, m, {}, Precision::Double};
  for (int j = n; j <= m; ++j) {
    const SpectrumLayer layer = spectrum_layer(f, j, opts);
    if (layer.precision == Precision::Extended) tau.precision = Precision::Extended;
    tau.blocks.push_back(delta_layer(layer, opts.superattracting_tol));
  }
  return tau;
}

double spectra_distance(const SigmaVector& a, const SigmaVector& b) {
  if (a.values.size() != b.values.size()) throw Error(ErrorKind::ShapeMismatch, "sigma vectors differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = std::abs(a.values[i] - b.values[i]) / (1.0 + std::abs(a.values[i]) + std::abs(b.values[i]));
    if (std::isnan(d)) return d;
    worst = std::max(worst, d);
  }
  return worst;
}

double spectra_distance(const std::vector<SigmaVector>& a, const std::vector<SigmaVector>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "block counts differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = spectra_distance(a[i], b[i]);
    if (std::isnan(d)) return d;
    worst = std::max(worst, d);
  }
  return worst;
}

double spectra_distance(const TauVector& a, const TauVector& b) {
  if (a.n != b.n || a.m != b.m) throw Error(ErrorKind::ShapeMismatch, "tau windows differ");
  return spectra_distance(a.blocks, b.blocks);
}

}  // namespace multspec
