#pragma once

// Degree-4 flexible Lattes maps: the x-coordinate of doubling on the curve
// y^2 = 4x^3 - g2 x - g3.

#include <cstdint>
#include <vector>

#include "multspec/ratmap.hpp"

namespace multspec {

/// Curves with |discriminant| at or below this are singular.
inline constexpr double kSingularThreshold = 1e-6;

struct WeierstrassParams {
  Cplx g2{0};
  Cplx g3{0};
};

/// g2^3 - 27 g3^2.
Cplx discriminant(const WeierstrassParams& p);

/// 1728 g2^3 / discriminant; throws SingularCurve.
Cplx j_invariant(const WeierstrassParams& p);

/// (x^4 + (g2/2) x^2 + 2 g3 x + g2^2/16) / (4x^3 - g2 x - g3); throws
/// SingularCurve.
RationalMap<double> lattes_mult2(const WeierstrassParams& p);

/// k >= 2 curves with pairwise |j_a - j_b| > 1e-3 and |discriminant| >=
/// min_discriminant, drawn deterministically from seed with g2, g3 in the
/// unit disc.
std::vector<WeierstrassParams> family_sample(int k, std::uint64_t seed, double min_discriminant = 0.5);

}  // namespace multspec
