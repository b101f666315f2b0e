#include <gtest/gtest.h>

#include <numbers>

#include "multspec/spectra.hpp"
#include "support.hpp"

namespace multspec {
namespace {

using testing::quadratic;
using testing::random_test_map;
using testing::rel_diff;
using testing::unit_disc;

using P = ProjPoint<double>;

ErrorKind kind_of(auto&& fn, int* period = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (period) *period = e.period();
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

// sigma_k by enumerating all k-subsets.
std::vector<Cplx> sigma_by_subsets(const std::vector<Cplx>& v) {
  const std::size_t n = v.size();
  std::vector<Cplx> out(n, Cplx(0));
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Cplx prod(1);
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) prod *= v[i];
    out[static_cast<std::size_t>(std::popcount(mask)) - 1] += prod;
  }
  return out;
}

/// Multisets equal up to tol after greedy nearest pairing.
bool same_multiset(std::vector<Cplx> a, std::vector<Cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const Cplx& x : a) {
    auto best = b.end();
    double best_d = tol;
    for (auto it = b.begin(); it != b.end(); ++it)
      if (std::abs(*it - x) <= best_d) best_d = std::abs(*it - x), best = it;
    if (best == b.end()) return false;
    b.erase(best);
  }
  return true;
}

void expect_sigma(const SigmaVector& s, std::initializer_list<Cplx> want, double tol = 1e-12) {
  ASSERT_EQ(s.values.size(), want.size());
  std::size_t i = 0;
  for (const Cplx& w : want) EXPECT_LT(rel_diff(s.values[i++], w), tol) << "sigma_" << i;
}

// z -> lambda z + z^2 with lambda = e^(2 pi i / 3).
RationalMap<double> rotation_map() {
  const Cplx lambda = std::polar(1.0, 2 * std::numbers::pi / 3);
  return make_map(HomForm<double>({Cplx(0), lambda, Cplx(1)}), HomForm<double>::monomial(2, 0));
}

TEST(AssembleCycles, SquaringMapFixedPoints) {
  const auto set = assemble_cycles(quadratic(Cplx(0)), 1);
  ASSERT_EQ(set.cycles.size(), 3u);
  std::vector<Cplx> mults;
  for (const auto& c : set.cycles) {
    EXPECT_EQ(c.minimal_period(), 1);
    mults.push_back(c.multiplier);
  }
  EXPECT_TRUE(same_multiset(mults, {Cplx(0), Cplx(0), Cplx(2)}, 1e-12));
}

TEST(AssembleCycles, BasilicaTwoCycle) {
  const auto set = assemble_cycles(quadratic(Cplx(-1)), 2);
  ASSERT_EQ(set.cycles.size(), 1u);
  const auto& c = set.cycles[0];
  EXPECT_EQ(c.minimal_period(), 2);
  EXPECT_LT(std::abs(c.multiplier), 1e-12);
  // Orbit order: f(points[0]) == points[1].
  EXPECT_LT(projective_distance(apply_map(quadratic(Cplx(-1)), c.points[0]), c.points[1]), 1e-12);
}

TEST(AssembleCycles, ParabolicWitness) {
  const auto set = assemble_cycles(quadratic(Cplx(-0.75)), 2);
  ASSERT_EQ(set.cycles.size(), 1u);
  const auto& c = set.cycles[0];
  EXPECT_EQ(c.minimal_period(), 1);
  EXPECT_EQ(c.multiplicity, 2);
  EXPECT_EQ(c.formal_periods, (std::vector<int>{1, 2}));
  EXPECT_LT(projective_distance(c.points[0], P::affine(Cplx(-0.5))), 1e-10);
}

TEST(AssembleCycles, PropertyOrbitsArePermuted) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_test_map(2 + trial % 2, rng);
    for (int n = 1; n <= 3; ++n) {
      const auto set = assemble_cycles(f, n);
      std::int64_t weighted = 0;
      for (const auto& c : set.cycles) {
        weighted += static_cast<std::int64_t>(c.minimal_period()) * c.multiplicity;
        EXPECT_EQ(n % c.minimal_period(), 0);
        EXPECT_EQ(c.formal_periods.front(), c.minimal_period());
        for (int i = 0; i < c.minimal_period(); ++i) {
          const auto next = c.points[static_cast<std::size_t>((i + 1) % c.minimal_period())];
          EXPECT_LT(projective_distance(apply_map(f, c.points[static_cast<std::size_t>(i)]), next), 1e-8);
        }
      }
      EXPECT_EQ(weighted, nu_count(f.degree(), n));
    }
  }
}

TEST(FormalExactPeriods, Examples) {
  EXPECT_EQ(formal_exact_periods(quadratic(Cplx(0)), P::affine(Cplx(1)), 4), std::vector<int>{1});
  EXPECT_EQ(formal_exact_periods(quadratic(Cplx(-0.75)), P::affine(Cplx(-0.5)), 4), (std::vector<int>{1, 2}));
  EXPECT_EQ(formal_exact_periods(rotation_map(), P::affine(Cplx(0)), 4), (std::vector<int>{1, 3}));
  EXPECT_EQ(formal_exact_periods(quadratic(Cplx(-1)), P::affine(Cplx(-1)), 4), std::vector<int>{2});
  EXPECT_EQ(kind_of([] { formal_exact_periods(quadratic(Cplx(0)), P::affine(Cplx(0.5)), 6); }), ErrorKind::NotPeriodic);
}

TEST(SpectrumLayer, RotationMapThreeLayerCarriesTheParabolicPoint) {
  // The fixed point with lambda^3 = 1 contributes three multipliers equal
  // to lambda^3 = 1 to s_3, whether the solver resolves it as the fixed
  // point of multiplicity three or as the 3-cycle split off by rounding
  // lambda to double.
  const auto layer = spectrum_layer(rotation_map(), 3);
  ASSERT_EQ(layer.multipliers.size(), static_cast<std::size_t>(nu_count(2, 3)));
  int ones = 0;
  for (const Cplx& l : layer.multipliers) ones += std::abs(l - 1.0) < 1e-6;
  EXPECT_EQ(ones, 3);
}

TEST(FormalPeriodsOf, PropertyPrimitiveRootsOfUnity) {
  for (int r = 2; r <= 30; ++r)
    for (int p = 1; p < r; ++p) {
      const Cplx lambda = std::polar(1.0, 2 * std::numbers::pi * p / r);
      const std::vector<int> got = formal_periods_of(3, lambda, 1e-8);
      // Primitive iff gcd(p, r) == 1; otherwise the order is r / gcd.
      const int order = r / std::gcd(p, r);
      EXPECT_EQ(got, (std::vector<int>{3, 3 * order})) << p << "/" << r;
    }
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const Cplx lambda = unit_disc(rng) * 0.99;
    EXPECT_EQ(formal_periods_of(2, lambda, 1e-8), std::vector<int>{2});
  }
  EXPECT_EQ(formal_periods_of(1, Cplx(1), 1e-8), std::vector<int>{1});
}

TEST(SpectrumLayer, Examples) {
  EXPECT_TRUE(same_multiset(spectrum_layer(quadratic(Cplx(0)), 1).multipliers, {Cplx(0), Cplx(0), Cplx(2)}, 1e-12));
  const Cplx c(0.2, -0.3);
  EXPECT_TRUE(same_multiset(spectrum_layer(quadratic(c), 2).multipliers, {4.0 + 4.0 * c, 4.0 + 4.0 * c}, 1e-10));
  EXPECT_TRUE(same_multiset(spectrum_layer(quadratic(Cplx(-0.75)), 2).multipliers, {Cplx(1), Cplx(1)}, 1e-8));
}

TEST(SpectrumLayer, PropertySizeIsNu) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + trial % 3;
    const auto f = random_test_map(d, rng);
    for (int n = 1; n <= (d == 4 ? 2 : 3); ++n)
      EXPECT_EQ(spectrum_layer(f, n).multipliers.size(), static_cast<std::size_t>(nu_count(d, n)));
  }
}

TEST(SpectrumLayer, PropertyHolomorphicIndex) {
  // sum over fixed points of 1 / (1 - lambda) is 1 for any rational map
  // whose fixed points are simple.
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_test_map(2 + trial % 2, rng);
    const auto layer = spectrum_layer(f, 1);
    Cplx sum(0);
    for (const Cplx& l : layer.multipliers) sum += 1.0 / (1.0 - l);
    EXPECT_LT(std::abs(sum - 1.0), 1e-8) << "trial " << trial;
  }
}

TEST(SigmaCoords, Examples) {
  expect_sigma(sigma_coords({Cplx(0), Cplx(0), Cplx(2)}), {Cplx(2), Cplx(0), Cplx(0)});
  const Cplx c(0.3, 0.1), m = 4.0 + 4.0 * c;
  expect_sigma(sigma_coords({m, m}), {2.0 * m, m * m});
  expect_sigma(sigma_coords({Cplx(1), Cplx(1)}), {Cplx(2), Cplx(1)});
}

TEST(SigmaCoords, PropertySubsetOracleAndPermutationInvariance) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Cplx> v(1 + trial % 10);
    for (auto& x : v) x = 3.0 * unit_disc(rng);
    const auto want = sigma_by_subsets(v);
    const auto got = sigma_coords(v);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LT(rel_diff(got.values[i], want[i]), 1e-13);
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_LT(spectra_distance(sigma_coords(v), got), 1e-14);
  }
}

TEST(RhoVector, Examples) {
  const auto r = rho_vector(quadratic(Cplx(0)), 1, 1);
  ASSERT_EQ(r.size(), 1u);
  expect_sigma(r[0], {Cplx(2), Cplx(0), Cplx(0)});
  // z^2 - 1: fixed multipliers mu1 + mu2 = 2, mu1 mu2 = 4c, plus 0 at infinity.
  const auto b = rho_vector(quadratic(Cplx(-1)), 1, 2);
  ASSERT_EQ(b.size(), 2u);
  expect_sigma(b[0], {Cplx(2), Cplx(-4), Cplx(0)});
  expect_sigma(b[1], {Cplx(0), Cplx(0)});
}

TEST(RhoVector, PropertyQuadraticClosedForms) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Cplx c = unit_disc(rng);
    const auto r = rho_vector(quadratic(c), 1, 2);
    expect_sigma(r[0], {Cplx(2), 4.0 * c, Cplx(0)}, 1e-9);
    const Cplx m = 4.0 + 4.0 * c;
    expect_sigma(r[1], {2.0 * m, m * m}, 1e-9);
  }
}

TEST(RhoVector, PropertyConjugationInvariance) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_test_map(2 + trial % 2, rng);
    const Moebius<double> phi(Cplx(1), unit_disc(rng), unit_disc(rng) * 0.5, Cplx(1));
    const auto g = conjugate_map(f, phi);
    EXPECT_LT(spectra_distance(rho_vector(f, 1, 3), rho_vector(g, 1, 3)), 1e-8) << "trial " << trial;
  }
}

TEST(Superattracting, InRangeExamples) {
  EXPECT_TRUE(superattracting_in_range(quadratic(Cplx(0)), 1, 1));
  // Polynomials are superattracting at infinity, so the window starts at 2.
  EXPECT_FALSE(superattracting_in_range(quadratic(Cplx(-0.75)), 2, 2));
  EXPECT_TRUE(superattracting_in_range(quadratic(Cplx(-0.75)), 1, 2));
  EXPECT_TRUE(superattracting_in_range(quadratic(Cplx(-1)), 2, 2));
}

TEST(DeltaLayer, Examples) {
  int period = 0;
  EXPECT_EQ(kind_of([] { delta_layer(quadratic(Cplx(0)), 1); }, &period), ErrorKind::Superattracting);
  EXPECT_EQ(period, 1);
  expect_sigma(delta_layer(SpectrumLayer{1, {Cplx(2), Cplx(2)}, Precision::Double}), {Cplx(1), Cplx(0.25)});
  expect_sigma(delta_layer(SpectrumLayer{1, {Cplx(2), Cplx(3)}, Precision::Double}), {Cplx(5.0 / 6), Cplx(1.0 / 6)});
}

TEST(DeltaLayer, PropertyReciprocalIdentity) {
  // sigma_i(1/lambda) * sigma_N(lambda) = sigma_(N-i)(lambda), sigma_0 = 1.
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Cplx> v(1 + trial % 12);
    for (auto& x : v) x = unit_disc(rng) * 4.0 + std::polar(0.1, 1.0 * trial);
    const SpectrumLayer layer{1, v, Precision::Double};
    const auto lam = sigma_coords(layer).values;
    const auto alpha = delta_layer(layer).values;
    const std::size_t n = v.size();
    for (std::size_t i = 1; i <= n; ++i) {
      const Cplx rhs = i == n ? Cplx(1) : lam[n - i - 1];
      EXPECT_LT(rel_diff(alpha[i - 1] * lam[n - 1], rhs), 1e-8);
    }
  }
}

TEST(TauVector, ParabolicPolynomialIsSuperattractingAtOne) {
  int period = 0;
  EXPECT_EQ(kind_of([] { tau_vector(quadratic(Cplx(-0.75)), 1, 2); }, &period), ErrorKind::Superattracting);
  EXPECT_EQ(period, 1);
  period = 0;
  EXPECT_EQ(kind_of([] { tau_vector(quadratic(Cplx(-1)), 2, 2); }, &period), ErrorKind::Superattracting);
  EXPECT_EQ(period, 2);
}

TEST(TauVector, PropertyShapesAndInvariance) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 8; ++trial) {
    const auto f = random_test_map(2, rng);
    const auto t = tau_vector(f, 1, 3);
    ASSERT_EQ(t.blocks.size(), 3u);
    for (int j = 1; j <= 3; ++j)
      EXPECT_EQ(t.blocks[static_cast<std::size_t>(j - 1)].values.size(), static_cast<std::size_t>(nu_count(2, j)));
    const Moebius<double> phi(Cplx(0.5), Cplx(1), Cplx(1), unit_disc(rng));
    EXPECT_LT(spectra_distance(t, tau_vector(conjugate_map(f, phi), 1, 3)), 1e-8);
  }
}

TEST(SpectraDistance, Examples) {
  const TauVector a{1, 1, {SigmaVector{{Cplx(1), Cplx(0)}}}, Precision::Double};
  const TauVector b{1, 1, {SigmaVector{{Cplx(0), Cplx(0)}}}, Precision::Double};
  EXPECT_EQ(spectra_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(spectra_distance(a, b), 0.5);
  const TauVector c{1, 2, {SigmaVector{{Cplx(0), Cplx(0)}}}, Precision::Double};
  EXPECT_EQ(kind_of([&] { spectra_distance(a, c); }), ErrorKind::ShapeMismatch);
  const SigmaVector nan{{Cplx(std::nan(""), 0)}};
  EXPECT_TRUE(std::isnan(spectra_distance(nan, SigmaVector{{Cplx(0)}})));
}

}  // namespace
}  // namespace multspec
