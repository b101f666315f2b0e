#pragma once

// Periodic cycles, multiplier spectra and their symmetric-function
// coordinates, including the reciprocal spectra defined off the
// superattracting locus.

#include <vector>

#include "multspec/dynatomic.hpp"
#include "multspec/rootfind.hpp"

namespace multspec {

struct SpectraOptions {
  /// Floor for matching f(root) against another root.
  double projective_tol = kProjectiveTol;
  /// |lambda| at or below this counts as superattracting.
  double superattracting_tol = 1e-9;
  /// Cutoff on |lambda^r - 1| for formal periods m r.
  double root_of_unity_tol = 1e-8;
  /// Largest r tried when testing lambda for a primitive r-th root of unity.
  int max_root_order = 64;
  double division_tol = kDivisionTol;
  /// Double runs retry at Extended on numerical failure; Extended runs
  /// start there.
  Precision precision = Precision::Double;
  RootOptions roots{};
};

struct CycleRecord {
  /// One point per step of the minimal cycle, in orbit order.
  std::vector<ProjPoint<double>> points;
  /// df^m along the cycle, m = points.size().
  Cplx multiplier{0};
  /// Multiplicity of each point as a root of the dynatomic form.
  int multiplicity = 1;
  /// m, plus m r when the multiplier is a primitive r-th root of unity.
  std::vector<int> formal_periods;

  int minimal_period() const { return static_cast<int>(points.size()); }
};

struct CycleSet {
  int n = 0;
  std::vector<CycleRecord> cycles;
  Precision precision = Precision::Double;
};

struct SpectrumLayer {
  int n = 0;
  /// df^n at every point of formal period n, with multiplicity; size nu_d(n).
  std::vector<Cplx> multipliers;
  Precision precision = Precision::Double;
};

struct SigmaVector {
  /// values[i - 1] = sigma_i for i = 1..N.
  std::vector<Cplx> values;
};

struct TauVector {
  int n = 0;
  int m = 0;
  /// Reciprocal sigma coordinates for periods n..m.
  std::vector<SigmaVector> blocks;
  Precision precision = Precision::Double;
};

/// Roots of the period-n dynatomic form grouped into f-orbits. Throws
/// OrbitMatchFailed when the roots are not permuted by f even after the
/// extended-precision retry.
CycleSet assemble_cycles(const RationalMap<double>& f, int n, const SpectraOptions& opts = {});

/// Formal exact periods of a periodic point: its minimal period k
/// (searched up to max_period) and k r when df^k(x) is a primitive r-th
/// root of unity. Throws NotPeriodic when x does not return in time.
std::vector<int> formal_exact_periods(const RationalMap<double>& f, const ProjPoint<double>& x, int max_period,
                                      const SpectraOptions& opts = {});

/// Formal periods implied by a minimal period m and its multiplier.
std::vector<int> formal_periods_of(int m, const Cplx& multiplier, double tol, int max_root_order = 64);

SpectrumLayer spectrum_layer(const RationalMap<double>& f, int n, const SpectraOptions& opts = {});

/// Elementary symmetric functions of a multiset via the expansion of
/// prod (T + lambda_i).
SigmaVector sigma_coords(const std::vector<Cplx>& values);
SigmaVector sigma_coords(const SpectrumLayer& layer);

/// Sigma coordinates of the layers n..m.
std::vector<SigmaVector> rho_vector(const RationalMap<double>& f, int n, int m, const SpectraOptions& opts = {});

bool superattracting_in_range(const RationalMap<double>& f, int n, int m, const SpectraOptions& opts = {});

/// Sigma coordinates of the reciprocal multipliers of a layer. Throws
/// Superattracting (carrying the layer's period) if some |lambda| is at or
/// below tol.
SigmaVector delta_layer(const SpectrumLayer& layer, double superattracting_tol = 1e-9);
SigmaVector delta_layer(const RationalMap<double>& f, int n, const SpectraOptions& opts = {});

/// delta blocks for periods n..m; Superattracting names the first
/// offending period.
TauVector tau_vector(const RationalMap<double>& f, int n, int m, const SpectraOptions& opts = {});

/// max |a_i - b_i| / (1 + |a_i| + |b_i|); ShapeMismatch on differing
/// windows or block lengths.
double spectra_distance(const TauVector& a, const TauVector& b);
double spectra_distance(const std::vector<SigmaVector>& a, const std::vector<SigmaVector>& b);
double spectra_distance(const SigmaVector& a, const SigmaVector& b);

}  // namespace multspec
