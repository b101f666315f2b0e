#include <gtest/gtest.h>

#include <algorithm>

#include "multspec/ratmap.hpp"
#include "support.hpp"

namespace multspec {
namespace {

using testing::quadratic;
using testing::random_test_map;
using testing::rational_value;
using testing::unit_disc;

using P = ProjPoint<double>;

RationalMap<double> z_squared() { return quadratic(Cplx(0)); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

bool same_point(const P& a, const P& b, double tol = 1e-12) { return projective_distance(a, b) <= tol; }

TEST(MakeMap, Examples) {
  const auto f = z_squared();
  EXPECT_EQ(f.degree(), 2);
  EXPECT_GT(std::abs(f.resultant()), 0.5);
  EXPECT_EQ(kind_of([] {
              make_map(HomForm<double>::monomial(2, 2), HomForm<double>::monomial(2, 1));
            }),
            ErrorKind::Degenerate);
  // z^2 + 1: Res(X^2 + Y^2, Y^2) = 1.
  const auto g = quadratic(Cplx(1));
  EXPECT_LT(std::abs(g.resultant() - form_resultant(g.numerator(), g.denominator())), 1e-14);
  EXPECT_LT(std::abs(std::abs(g.resultant()) - 1.0), 1e-14);
}

TEST(MakeMap, NormalizesToUnitMaxCoefficient) {
  const auto f = make_map(HomForm<double>({Cplx(4), Cplx(0), Cplx(8)}), HomForm<double>({Cplx(2), Cplx(0), Cplx(0)}));
  double m = 0;
  for (const auto& c : f.numerator().coeffs()) m = std::max(m, std::abs(c));
  for (const auto& c : f.denominator().coeffs()) m = std::max(m, std::abs(c));
  EXPECT_DOUBLE_EQ(m, 1.0);
  EXPECT_EQ(kind_of([] { make_map(HomForm<double>::monomial(1, 1), HomForm<double>::monomial(1, 0)); }),
            ErrorKind::InvalidArgument);
}

TEST(Moebius, RejectsSingular) {
  EXPECT_EQ(kind_of([] { Moebius<double>(Cplx(1), Cplx(2), Cplx(2), Cplx(4)); }), ErrorKind::Degenerate);
}

TEST(IterateForms, Examples) {
  const auto [f3, g3] = iterate_forms(z_squared(), 3);
  ASSERT_EQ(f3.degree(), 8);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(f3[static_cast<std::size_t>(i)], Cplx(0));
    EXPECT_EQ(g3[static_cast<std::size_t>(i + 1)], Cplx(0));
  }
  EXPECT_NE(f3[8], Cplx(0));
  EXPECT_NE(g3[0], Cplx(0));

  std::mt19937_64 rng(1);
  const auto f = random_test_map(3, rng);
  const auto [p1, q1] = iterate_forms(f, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(p1[i], f.numerator()[i]);
    EXPECT_EQ(q1[i], f.denominator()[i]);
  }
}

TEST(IterateForms, ComposedValueMatchesDirectExpansion) {
  const auto f = quadratic(Cplx(-1));
  const auto [p, q] = iterate_forms(f, 2);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Cplx z = 2.0 * unit_disc(rng);
    const Cplx want = (z * z - 1.0) * (z * z - 1.0) - 1.0;
    const Cplx got = p(z, Cplx(1)) / q(z, Cplx(1));
    EXPECT_LT(std::abs(got - want), 1e-10 * (1 + std::abs(want)));
  }
}

TEST(IterateForms, PropertyAgreesWithRepeatedApply) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const int n = d == 2 ? 5 : 3;
    const auto f = random_test_map(d, rng);
    const auto all = iterate_forms_all(f, n);
    ASSERT_EQ(all.size(), static_cast<std::size_t>(n));
    for (int s = 0; s < 5; ++s) {
      for (int k = 1; k <= n; ++k) {
        const auto& [fk, gk] = all[static_cast<std::size_t>(k - 1)];
        ASSERT_EQ(fk.degree(), static_cast<int>(ipow(Cplx(d), k).real()));
        const P z = P::affine(unit_disc(rng));
        const P direct = P::normalized(fk(z.x, z.y), gk(z.x, z.y));
        P stepped = z;
        for (int j = 0; j < k; ++j) stepped = apply_map(f, stepped);
        // Iterates expand distances; allow for the local growth factor.
        EXPECT_LT(projective_distance(direct, stepped), 1e-6) << "d=" << d << " k=" << k;
      }
    }
  }
}

TEST(IterateForms, DegreeCap) {
  EXPECT_EQ(kind_of([] { iterate_forms(z_squared(), 13); }), ErrorKind::DegreeCap);
  EXPECT_NO_THROW(iterate_forms(z_squared(), 12));
}

TEST(ConjugateMap, Examples) {
  const auto f = quadratic(Cplx(0.25, -0.5));
  const auto g = conjugate_map(f, Moebius<double>::identity());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(g.numerator()[i] - f.numerator()[i]), 1e-15);
    EXPECT_LT(std::abs(g.denominator()[i] - f.denominator()[i]), 1e-15);
  }
  const Moebius<double> inv(Cplx(0), Cplx(1), Cplx(1), Cplx(0));
  const auto h = conjugate_map(z_squared(), inv);
  const P z = P::affine(Cplx(0.3, 0.7));
  EXPECT_TRUE(same_point(apply_map(h, z), P::affine(Cplx(0.3, 0.7) * Cplx(0.3, 0.7))));
}

TEST(ConjugateMap, PropertyCommutesWithMoebius) {
  // phi(f(z)) == g(phi(z)) for g = phi f phi^-1, checked against a 113-bit
  // evaluation of both rational functions.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_test_map(2 + trial % 2, rng);
    Cplx a, b, c, dd;
    do {
      a = unit_disc(rng), b = unit_disc(rng), c = unit_disc(rng), dd = unit_disc(rng);
    } while (std::abs(a * dd - b * c) < 0.25);
    const Moebius<double> phi(a, b, c, dd);
    const auto g = conjugate_map(f, phi);
    for (int k = 0; k < 5; ++k) {
      const Cplx z = unit_disc(rng);
      const Complex<Quad> zq = complex_cast<Quad>(z);
      const Complex<Quad> fz = rational_value(f, zq);
      const auto mob = [&](const Complex<Quad>& w) {
        return (complex_cast<Quad>(phi.a()) * w + complex_cast<Quad>(phi.b())) /
               (complex_cast<Quad>(phi.c()) * w + complex_cast<Quad>(phi.d()));
      };
      const P lhs = P::affine(complex_cast<double>(mob(fz)));
      const P rhs = P::affine(complex_cast<double>(rational_value(g, mob(zq))));
      EXPECT_LT(projective_distance(lhs, rhs), 1e-8) << "trial " << trial;
    }
  }
}

TEST(ApplyMap, Examples) {
  const auto f = z_squared();
  EXPECT_TRUE(same_point(apply_map(f, P::affine(Cplx(1))), P::affine(Cplx(1))));
  EXPECT_TRUE(same_point(apply_map(f, P::infinity()), P::infinity()));
  const auto g = quadratic(Cplx(-1));
  const P a = apply_map(g, P::affine(Cplx(0)));
  EXPECT_TRUE(same_point(a, P::affine(Cplx(-1))));
  EXPECT_TRUE(same_point(apply_map(g, a), P::affine(Cplx(0))));
}

TEST(MultiplierAlongCycle, Examples) {
  const auto f = z_squared();
  const std::vector<P> one{P::affine(Cplx(1))};
  EXPECT_LT(std::abs(multiplier_along_cycle<double>(f, one) - Cplx(2)), 1e-14);
  const std::vector<P> inf{P::infinity()};
  EXPECT_LT(std::abs(multiplier_along_cycle<double>(f, inf)), 1e-14);
  const std::vector<P> two{P::affine(Cplx(0)), P::affine(Cplx(-1))};
  EXPECT_LT(std::abs(multiplier_along_cycle<double>(quadratic(Cplx(-1)), two)), 1e-14);
  const std::vector<P> broken{P::affine(Cplx(0)), P::affine(Cplx(1))};
  EXPECT_EQ(kind_of([&] { multiplier_along_cycle<double>(quadratic(Cplx(-1)), broken); }), ErrorKind::CycleBroken);
}

TEST(MultiplierAlongCycle, PropertyChartIndependentForFixedPoints) {
  // A fixed point's multiplier is a conjugacy invariant; compare the value at
  // z and at phi(z) under random Moebius phi.
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Cplx c = unit_disc(rng);
    const auto f = quadratic(c);
    const Cplx z = 0.5 + std::sqrt(0.25 - c);  // fixed point of z^2 + c
    const Cplx lambda = 2.0 * z;
    const Moebius<double> phi(Cplx(1), Cplx(0.3), Cplx(0.5, 0.2), Cplx(1));
    const auto g = conjugate_map(f, phi);
    const std::vector<P> pt{phi(P::affine(z))};
    EXPECT_LT(std::abs(multiplier_along_cycle<double>(g, pt, 1e-8) - lambda), 1e-9) << "trial " << trial;
  }
}

}  // namespace
}  // namespace multspec
