#include "multspec/probekit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

namespace multspec {

namespace {

constexpr double kMinMoebiusDet = 0.25;

Cplx unit_disc(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Cplx z(u(rng), u(rng));
    if (std::norm(z) <= 1.0) return z;
  }
}

std::optional<RationalMap<double>> admissible(HomForm<double> p, HomForm<double> q) {
  try {
    auto f = make_map(std::move(p), std::move(q));
    if (std::abs(f.resultant()) >= kSampleResultantFloor) return f;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Degenerate && e.kind() != ErrorKind::InvalidArgument) throw;
  }
  return std::nullopt;
}

// Runs fn(i) for i in [0, count) on a pool of workers.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct TauOutcome {
  std::optional<TauVector> tau;
  std::optional<ErrorKind> failure;
  std::optional<int> period;
};

TauOutcome try_tau(const RationalMap<double>& f, const SampleConfig& cfg, const SpectraOptions& opts) {
  try {
    return {tau_vector(f, cfg.n, cfg.m, opts), std::nullopt, std::nullopt};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    return {std::nullopt, e.kind(),
            e.kind() == ErrorKind::Superattracting ? std::optional<int>(e.period()) : std::nullopt};
  }
}

ProbeEntry make_entry(int trial, std::uint64_t seed, EntryOrigin origin, RationalMap<double> map,
                      const SampleConfig& cfg, const SpectraOptions& opts) {
  TauOutcome out = try_tau(map, cfg, opts);
  ProbeEntry e{trial, seed, origin, out.failure, out.period, Precision::Double, std::move(map), TauVector{}};
  if (out.tau) {
    e.precision = out.tau->precision;
    e.tau = std::move(*out.tau);
  }
  return e;
}

}  // namespace

void SampleConfig::validate() const {
  if (degree < 2) throw Error(ErrorKind::InvalidArgument, "degree must be >= 2");
  if (n < 1 || n > m) throw Error(ErrorKind::InvalidArgument, "window needs 1 <= n <= m");
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trial count must be >= 1");
  if (plant_duplicates < 0 || plant_conjugates < 0 || plant_duplicates + plant_conjugates > trials)
    throw Error(ErrorKind::InvalidArgument, "planted entries must fit within the trials");
  long power = 1;
  for (int i = 0; i < m; ++i) {
    power *= degree;
    if (power > kDegreeCap) throw Error(ErrorKind::DegreeCap, "d^m exceeds the degree cap");
  }
}

SpectraOptions SampleConfig::spectra_options() const {
  SpectraOptions opts;
  opts.projective_tol = projective_tol;
  opts.superattracting_tol = superattracting_tol;
  opts.root_of_unity_tol = root_of_unity_tol;
  opts.division_tol = division_tol;
  opts.roots.merge_factor = merge_factor;
  opts.precision = precision;
  return opts;
}

RationalMap<double> random_map(int d, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "random_map needs d >= 2");
  std::mt19937_64 rng(seed);
  for (;;) {
    std::vector<Cplx> p(static_cast<std::size_t>(d) + 1), q(p.size());
    for (auto& c : p) c = unit_disc(rng);
    for (auto& c : q) c = unit_disc(rng);
    if (auto f = admissible(HomForm<double>(std::move(p)), HomForm<double>(std::move(q)))) return *f;
  }
}

namespace {

Moebius<double> draw_moebius(std::mt19937_64& rng) {
  for (;;) {
    const Cplx a = unit_disc(rng), b = unit_disc(rng), c = unit_disc(rng), d = unit_disc(rng);
    try {
      Moebius<double> phi(a, b, c, d);
      if (std::abs(phi.a() * phi.d() - phi.b() * phi.c()) >= kMinMoebiusDet) return phi;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate) throw;
    }
  }
}

}  // namespace

Moebius<double> random_moebius(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return draw_moebius(rng);
}

std::pair<Moebius<double>, RationalMap<double>> random_conjugate(const RationalMap<double>& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    const Moebius<double> phi = draw_moebius(rng);
    try {
      RationalMap<double> g = conjugate_map(f, phi);
      if (std::abs(g.resultant()) >= kSampleResultantFloor) return {phi, std::move(g)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Degenerate) throw;
    }
  }
}

InvarianceResult invariance_trial(const RationalMap<double>& f, const Moebius<double>& phi, const SampleConfig& cfg) {
  const SpectraOptions opts = cfg.spectra_options();
  const RationalMap<double> g = conjugate_map(f, phi);
  InvarianceResult out;
  std::vector<SpectrumLayer> lf, lg;
  std::vector<SigmaVector> rf, rg;
  for (int j = cfg.n; j <= cfg.m; ++j) {
    lf.push_back(spectrum_layer(f, j, opts));
    lg.push_back(spectrum_layer(g, j, opts));
    rf.push_back(sigma_coords(lf.back()));
    rg.push_back(sigma_coords(lg.back()));
  }
  out.rho_distance = spectra_distance(rf, rg);
  try {
    TauVector tf{cfg.n, cfg.m, {}, Precision::Double}, tg = tf;
    for (std::size_t i = 0; i < lf.size(); ++i) {
      tf.blocks.push_back(delta_layer(lf[i], opts.superattracting_tol));
      tg.blocks.push_back(delta_layer(lg[i], opts.superattracting_tol));
    }
    out.tau_distance = spectra_distance(tf, tg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Superattracting) throw;
    out.superattracting_period = e.period();
  }
  return out;
}

std::string_view to_string(EntryOrigin origin) noexcept {
  switch (origin) {
    case EntryOrigin::Sampled: return "sampled";
    case EntryOrigin::Duplicate: return "duplicate";
    case EntryOrigin::Conjugate: return "conjugate";
  }
  return "unknown";
}

bool ProbeReport::duplicates_detected() const {
  return std::all_of(duplicate_pairs.begin(), duplicate_pairs.end(),
                     [&](const ProbePair& p) { return p.distance < config.duplicate_threshold; });
}

bool ProbeReport::conjugates_flagged() const {
  return std::all_of(conjugate_pairs.begin(), conjugate_pairs.end(),
                     [&](const ProbePair& p) { return p.distance < config.conjugate_threshold; });
}

bool ProbeReport::separated() const { return max_intra_class < min_inter_class; }

ProbeReport collision_probe(const SampleConfig& cfg) {
  cfg.validate();
  const SpectraOptions opts = cfg.spectra_options();
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t planted = static_cast<std::size_t>(cfg.plant_duplicates + cfg.plant_conjugates);

  std::vector<std::optional<ProbeEntry>> slots(trials + planted);
  parallel_for(trials, cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = split_seed(cfg.seed, i);
    slots[i] = make_entry(static_cast<int>(i), seed, EntryOrigin::Sampled, random_map(cfg.degree, seed), cfg, opts);
  });

  // Plants copy the first successfully sampled trials, in index order.
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < trials && sources.size() < planted; ++i)
    if (!slots[i]->failure) sources.push_back(i);
  parallel_for(sources.size(), cfg.threads, [&](std::size_t k) {
    const ProbeEntry& src = *slots[sources[k]];
    if (k < static_cast<std::size_t>(cfg.plant_duplicates)) {
      slots[trials + k] = make_entry(src.trial, src.seed, EntryOrigin::Duplicate, src.map, cfg, opts);
    } else {
      const std::uint64_t seed = split_seed(cfg.seed, trials + k);
      slots[trials + k] =
          make_entry(src.trial, seed, EntryOrigin::Conjugate, random_conjugate(src.map, seed).second, cfg, opts);
    }
  });

  ProbeReport report{cfg, {}, {}, {}, {}, std::numeric_limits<double>::infinity(), 0.0, {}, 0};
  for (auto& slot : slots)
    if (slot) report.entries.push_back(std::move(*slot));

  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const ProbeEntry& e = report.entries[i];
    if (e.failure) {
      ++report.failures[std::string(to_string(*e.failure))];
      ++report.skipped;
    } else {
      ok.push_back(i);
    }
  }

  for (std::size_t x = 0; x < ok.size(); ++x) {
    for (std::size_t y = x + 1; y < ok.size(); ++y) {
      const ProbeEntry& a = report.entries[ok[x]];
      const ProbeEntry& b = report.entries[ok[y]];
      ProbePair pair{ok[x], ok[y], spectra_distance(a.tau, b.tau), std::nullopt};
      if (a.trial == b.trial) {
        report.max_intra_class = std::max(report.max_intra_class, pair.distance);
        const EntryOrigin planted_origin = a.origin == EntryOrigin::Sampled ? b.origin : a.origin;
        (planted_origin == EntryOrigin::Duplicate ? report.duplicate_pairs : report.conjugate_pairs).push_back(pair);
        continue;
      }
      report.min_inter_class = std::min(report.min_inter_class, pair.distance);
      if (pair.distance < cfg.distance_threshold) report.candidates.push_back(pair);
    }
  }

  SpectraOptions wide = opts;
  wide.precision = Precision::Extended;
  for (ProbePair& pair : report.candidates) {
    const TauVector ta = tau_vector(report.entries[pair.a].map, cfg.n, cfg.m, wide);
    const TauVector tb = tau_vector(report.entries[pair.b].map, cfg.n, cfg.m, wide);
    pair.extended_distance = spectra_distance(ta, tb);
  }
  return report;
}

std::vector<double> isospectral_distances(const std::vector<RationalMap<double>>& maps, int n_max,
                                          const SpectraOptions& opts) {
  if (maps.empty()) throw Error(ErrorKind::InvalidArgument, "isospectral check needs at least one map");
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  for (const auto& f : maps)
    if (f.degree() != maps.front().degree()) throw Error(ErrorKind::ShapeMismatch, "maps differ in degree");
  std::vector<double> worst(static_cast<std::size_t>(n_max), 0.0);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<SigmaVector> sigmas;
    for (const auto& f : maps) sigmas.push_back(sigma_coords(spectrum_layer(f, n, opts)));
    double& w = worst[static_cast<std::size_t>(n - 1)];
    for (std::size_t a = 0; a < sigmas.size(); ++a)
      for (std::size_t b = a + 1; b < sigmas.size(); ++b) {
        const double d = spectra_distance(sigmas[a], sigmas[b]);
        w = std::isnan(d) ? d : std::max(w, d);
      }
  }
  return worst;
}

bool isospectral_check(const std::vector<RationalMap<double>>& maps, int n_max, double tol,
                       const SpectraOptions& opts) {
  for (double d : isospectral_distances(maps, n_max, opts))
    if (!(d <= tol)) return false;
  return true;
}

}  // namespace multspec
