#pragma once

// Random sampling campaigns over moduli of rational maps: invariance
// trials, pairwise collision probes and isospectrality checks.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multspec/spectra.hpp"

namespace multspec {

/// Random maps are redrawn while |Res| is below this.
inline constexpr double kSampleResultantFloor = 1e-6;

struct SampleConfig {
  int degree = 2;
  int n = 1;
  int m = 3;
  int trials = 50;
  std::uint64_t seed = 1;
  double projective_tol = kProjectiveTol;
  double superattracting_tol = 1e-9;
  double root_of_unity_tol = 1e-8;
  double division_tol = kDivisionTol;
  double merge_factor = 10.0;
  /// Inter-class pairs below this are candidate collisions.
  double distance_threshold = 1e-10;
  double duplicate_threshold = 1e-12;
  double conjugate_threshold = 1e-8;
  Precision precision = Precision::Double;
  /// Sampled maps re-inserted verbatim / as a random conjugate.
  int plant_duplicates = 0;
  int plant_conjugates = 0;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidArgument unless 1 <= n <= m, d^m <= 4096, trials >= 1.
  void validate() const;
  SpectraOptions spectra_options() const;
};

/// Coefficients uniform in the complex unit disc, redrawn while
/// |Res| < kSampleResultantFloor. Deterministic in seed.
RationalMap<double> random_map(int d, std::uint64_t seed);

/// Entries uniform in the unit disc with normalized |det| >= 1/4.
Moebius<double> random_moebius(std::uint64_t seed);

/// phi f phi^-1 for a random phi, redrawn (from the same seed stream)
/// until the conjugate passes the random_map resultant floor.
std::pair<Moebius<double>, RationalMap<double>> random_conjugate(const RationalMap<double>& f, std::uint64_t seed);

struct InvarianceResult {
  /// Distance between the sigma coordinates of s_n..s_m.
  double rho_distance = 0.0;
  /// Distance between the tau vectors; absent when f is superattracting in
  /// the window.
  std::optional<double> tau_distance;
  std::optional<int> superattracting_period;
};

InvarianceResult invariance_trial(const RationalMap<double>& f, const Moebius<double>& phi, const SampleConfig& cfg);

enum class EntryOrigin { Sampled, Duplicate, Conjugate };
std::string_view to_string(EntryOrigin origin) noexcept;

struct ProbeEntry {
  int trial = 0;
  std::uint64_t seed = 0;
  EntryOrigin origin = EntryOrigin::Sampled;
  /// Error kind for skipped entries.
  std::optional<ErrorKind> failure;
  std::optional<int> failure_period;
  Precision precision = Precision::Double;
  RationalMap<double> map;
  TauVector tau;
};

struct ProbePair {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
  /// Distance recomputed at extended precision (candidate collisions only).
  std::optional<double> extended_distance;
};

struct ProbeReport {
  SampleConfig config;
  std::vector<ProbeEntry> entries;
  std::vector<ProbePair> duplicate_pairs;
  std::vector<ProbePair> conjugate_pairs;
  /// Inter-class pairs below distance_threshold, re-examined at 113 bits.
  std::vector<ProbePair> candidates;
  double min_inter_class = 0.0;
  double max_intra_class = 0.0;
  std::map<std::string, int> failures;
  int skipped = 0;

  bool duplicates_detected() const;
  bool conjugates_flagged() const;
  /// max intra-class distance < min inter-class distance.
  bool separated() const;
};

ProbeReport collision_probe(const SampleConfig& cfg);

/// Largest pairwise sigma-coordinate distance of s_n for n = 1..n_max.
std::vector<double> isospectral_distances(const std::vector<RationalMap<double>>& maps, int n_max,
                                          const SpectraOptions& opts = {});

/// True iff every pairwise distance is within tol for all n <= n_max.
bool isospectral_check(const std::vector<RationalMap<double>>& maps, int n_max, double tol,
                       const SpectraOptions& opts = {});

}  // namespace multspec
