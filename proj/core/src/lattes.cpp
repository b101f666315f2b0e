#include "multspec/lattes.hpp"

#include <random>

namespace multspec {

namespace {

constexpr double kMinJSeparation = 1e-3;

void require_smooth(const WeierstrassParams& p) {
  if (!(std::abs(discriminant(p)) > kSingularThreshold))
    throw Error(ErrorKind::SingularCurve, "discriminant below threshold");
}

Cplx unit_disc(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Cplx z(u(rng), u(rng));
    if (std::norm(z) <= 1.0) return z;
  }
}

}  // namespace

Cplx discriminant(const WeierstrassParams& p) { return p.g2 * p.g2 * p.g2 - 27.0 * p.g3 * p.g3; }

Cplx j_invariant(const WeierstrassParams& p) {
  require_smooth(p);
  return 1728.0 * p.g2 * p.g2 * p.g2 / discriminant(p);
}

RationalMap<double> lattes_mult2(const WeierstrassParams& p) {
  require_smooth(p);
  HomForm<double> num({p.g2 * p.g2 / 16.0, 2.0 * p.g3, p.g2 / 2.0, Cplx(0), Cplx(1)});
  HomForm<double> den({-p.g3, -p.g2, Cplx(0), Cplx(4), Cplx(0)});
  return make_map(std::move(num), std::move(den));
}

std::vector<WeierstrassParams> family_sample(int k, std::uint64_t seed, double min_discriminant) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "family_sample needs k >= 2");
  const double floor = std::max(min_discriminant, kSingularThreshold);
  std::mt19937_64 rng(seed);
  std::vector<WeierstrassParams> out;
  std::vector<Cplx> js;
  while (static_cast<int>(out.size()) < k) {
    WeierstrassParams p{unit_disc(rng), unit_disc(rng)};
    if (!(std::abs(discriminant(p)) >= floor)) continue;
    const Cplx j = j_invariant(p);
    bool distinct = true;
    for (const Cplx& other : js) distinct = distinct && std::abs(j - other) > kMinJSeparation;
    if (!distinct) continue;
    out.push_back(p);
    js.push_back(j);
  }
  return out;
}

}  // namespace multspec
