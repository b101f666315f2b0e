#pragma once

// Simultaneous (Aberth-Ehrlich) root finding with cluster detection.

#include <cstdint>
#include <vector>

#include "multspec/ratmap.hpp"

namespace multspec {

struct RootOptions {
  /// Roots closer than merge_factor * (inclusion radius) are one cluster.
  double merge_factor = 10.0;
  /// A double-precision cluster wider than this (relative to 1 + |center|)
  /// sends the polynomial to the 113-bit solver.
  double max_cluster_radius = 1e-6;
  /// When false a double request reports NoConvergence instead of retrying.
  bool allow_extended = true;
  int max_iterations = 200;
  int max_iterations_extended = 500;
  /// Relative jitter applied to the initial circle points.
  double perturbation = 1e-3;
  std::uint64_t seed = 0x6d756c7473706563ULL;
};

template <class R>
struct AffineCluster {
  Complex<R> center;
  int multiplicity = 1;
  /// Inclusion radius in the affine coordinate.
  R radius = R(0);
  /// |p(center)| relative to sum |a_k| |center|^k.
  R residual = R(0);
};

template <class R>
struct RootCluster {
  ProjPoint<R> center;
  int multiplicity = 1;
  /// Inclusion radius in the chart of the center (z if |z| <= 1, 1/z
  /// otherwise), comparable with projective_distance.
  R radius = R(0);
  R residual = R(0);
};

/// Roots of p (degree >= 1) as clusters whose multiplicities sum to the
/// degree. A double request that fails to converge in max_iterations is
/// repeated at 113 bits before NoConvergence is thrown. Output order is
/// deterministic (sorted by real, then imaginary part).
template <class R>
std::vector<AffineCluster<R>> roots_univariate(const Poly<R>& p, const RootOptions& opts = {});

/// Roots of a nonzero form on P^1: affine clusters of F(z, 1) plus the
/// point at infinity with multiplicity equal to the degree deficit.
template <class R>
std::vector<RootCluster<R>> projective_roots(const HomForm<R>& form, const RootOptions& opts = {});

}  // namespace multspec
