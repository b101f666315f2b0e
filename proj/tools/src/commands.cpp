#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "multspec/cli.hpp"
#include "multspec/lattes.hpp"
#include "multspec/probekit.hpp"
#include "multspec/spectra.hpp"

#ifndef MULTSPEC_VERSION
#define MULTSPEC_VERSION "unknown"
#endif

namespace multspec::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json pair_of(const Cplx& c) { return json::array({c.real(), c.imag()}); }

json pairs_of(const std::vector<Cplx>& values) {
  json out = json::array();
  for (const Cplx& c : values) out.push_back(pair_of(c));
  return out;
}

json point_of(const ProjPoint<double>& p) { return json::array({pair_of(p.x), pair_of(p.y)}); }

Cplx parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw UsageError("expected RE,IM but got '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw UsageError("expected RE,IM but got '" + text + "'");
  }
  if (in >> comma) throw UsageError("trailing characters in '" + text + "'");
  return {re, im};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Common {
  std::string out;
  std::string precision;
  double projective_tol = kProjectiveTol;
  double superattracting_tol = 1e-9;
  double root_of_unity_tol = 1e-8;
  double division_tol = kDivisionTol;
  double merge_factor = RootOptions{}.merge_factor;

  Precision resolved = Precision::Double;

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "Write the report to FILE instead of standard output");
    cmd->add_option("--precision", precision, "double or extended (default: MULTSPEC_PRECISION, else double)");
    cmd->add_option("--projective-tol", projective_tol, "Projective point matching floor");
    cmd->add_option("--superattracting-tol", superattracting_tol, "Multiplier magnitude counted as zero");
    cmd->add_option("--root-of-unity-tol", root_of_unity_tol, "Cutoff on |lambda^r - 1| for formal periods");
    cmd->add_option("--division-tol", division_tol, "Relative residual accepted in exact division");
    cmd->add_option("--merge-factor", merge_factor, "Root clusters merge within this multiple of their radii");
  }

  void resolve() {
    std::string text = precision;
    if (text.empty()) {
      const char* env = std::getenv("MULTSPEC_PRECISION");
      text = env != nullptr && *env != '\0' ? env : "double";
    }
    const auto p = parse_precision(text);
    if (!p) throw UsageError("unknown precision '" + text + "' (expected double or extended)");
    resolved = *p;
  }

  SpectraOptions options() const {
    SpectraOptions o;
    o.projective_tol = projective_tol;
    o.superattracting_tol = superattracting_tol;
    o.root_of_unity_tol = root_of_unity_tol;
    o.division_tol = division_tol;
    o.precision = resolved;
    o.roots.merge_factor = merge_factor;
    return o;
  }

  json echo() const {
    return json{{"precision", std::string(to_string(resolved))},
                {"tolerances",
                 {{"projective", projective_tol},
                  {"superattracting", superattracting_tol},
                  {"root_of_unity", root_of_unity_tol},
                  {"division", division_tol},
                  {"cluster_merge_factor", merge_factor}}}};
  }
};

RationalMap<double> load_map(const std::string& path) { return parse_map_document(read_file(path)); }

json cycles_of(const CycleSet& set) {
  json out = json::array();
  for (const CycleRecord& c : set.cycles) {
    json points = json::array();
    for (const auto& p : c.points) points.push_back(point_of(p));
    out.push_back({{"minimal_period", c.minimal_period()},
                   {"multiplicity", c.multiplicity},
                   {"multiplier", pair_of(c.multiplier)},
                   {"formal_periods", c.formal_periods},
                   {"points", points}});
  }
  return out;
}

std::vector<Cplx> sorted(std::vector<Cplx> v) {
  std::sort(v.begin(), v.end(), [](const Cplx& a, const Cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

json window_echo(int from, int to) { return json{{"from", from}, {"to", to}}; }

}  // namespace

int exit_status(ErrorKind kind) noexcept { return is_numerical(kind) ? kExitNumerical : kExitDomain; }

CommandResult run_command(const std::vector<std::string>& args, std::ostream& diagnostics) {
  CLI::App app{"Multiplier spectra of rational maps on the Riemann sphere", "multspec"};
  app.require_subcommand(1);
  Common common;

  // spectrum
  std::string map_path;
  int period = 1;
  bool with_sigma = false;
  auto* spectrum = app.add_subcommand("spectrum", "Multiplier spectrum s_n of a map");
  spectrum->add_option("--map", map_path, "Map document")->required();
  spectrum->add_option("--n", period, "Period n")->required();
  spectrum->add_flag("--sigma", with_sigma, "Also print sigma coordinates");
  common.attach(spectrum);

  // tau
  int from = 1, to = 1;
  auto* tau = app.add_subcommand("tau", "Reciprocal spectrum vector tau_{n,m}");
  tau->add_option("--map", map_path, "Map document")->required();
  tau->add_option("--from", from, "First period")->required();
  tau->add_option("--to", to, "Last period")->required();
  common.attach(tau);

  // compare
  std::string map_a, map_b;
  double threshold = 1e-8;
  auto* compare = app.add_subcommand("compare", "Distance between the tau vectors of two maps");
  compare->add_option("--map-a", map_a, "First map document")->required();
  compare->add_option("--map-b", map_b, "Second map document")->required();
  compare->add_option("--from", from, "First period")->required();
  compare->add_option("--to", to, "Last period")->required();
  compare->add_option("--threshold", threshold, "Distance below which the maps are reported equivalent");
  common.attach(compare);

  // lattes
  std::string g2_text, g3_text;
  int family = 0;
  std::uint64_t seed = 1;
  int nmax = 2;
  double iso_tol = 1e-6;
  auto* lattes = app.add_subcommand("lattes", "Flexible Lattes family and isospectrality check");
  lattes->add_option("--g2", g2_text, "Curve parameter g2 as RE,IM");
  lattes->add_option("--g3", g3_text, "Curve parameter g3 as RE,IM");
  lattes->add_option("--family", family, "Number of sampled family members");
  lattes->add_option("--seed", seed, "Sampling seed");
  lattes->add_option("--nmax", nmax, "Largest period compared");
  lattes->add_option("--tol", iso_tol, "Isospectrality tolerance");
  common.attach(lattes);

  // probe
  SampleConfig cfg;
  auto* probe = app.add_subcommand("probe", "Collision probe over random maps");
  probe->add_option("--degree", cfg.degree, "Map degree")->required();
  probe->add_option("--from", cfg.n, "First period")->required();
  probe->add_option("--to", cfg.m, "Last period")->required();
  probe->add_option("--trials", cfg.trials, "Number of random maps")->required();
  probe->add_option("--seed", cfg.seed, "Campaign seed")->required();
  probe->add_option("--threshold", cfg.distance_threshold, "Candidate collision threshold");
  probe->add_option("--plant-duplicates", cfg.plant_duplicates, "Re-insert this many sampled maps verbatim");
  probe->add_option("--plant-conjugates", cfg.plant_conjugates, "Re-insert this many sampled maps conjugated");
  probe->add_option("--threads", cfg.threads, "Worker threads (0: hardware concurrency)");
  common.attach(probe);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    diagnostics << app.help();
    return {kExitOk, {}, false};
  } catch (const CLI::ParseError& e) {
    diagnostics << "multspec: " << e.what() << "\n";
    return {kExitUsage, {}, false};
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  json report;
  report["command"] = name;
  report["tool_version"] = MULTSPEC_VERSION;
  json& arguments = report["arguments"] = json::object();
  json& results = report["results"] = json::object();
  int status = kExitOk;

  try {
    common.resolve();
    report["config"] = common.echo();
    const SpectraOptions opts = common.options();

    if (chosen == spectrum) {
      arguments = {{"map", map_path}, {"n", period}, {"sigma", with_sigma}};
      const RationalMap<double> f = load_map(map_path);
      const CycleSet cycles = assemble_cycles(f, period, opts);
      const SpectrumLayer layer = spectrum_layer(f, period, opts);
      results["n"] = period;
      results["size"] = layer.multipliers.size();
      results["precision"] = std::string(to_string(layer.precision));
      results["multipliers"] = pairs_of(sorted(layer.multipliers));
      results["cycles"] = cycles_of(cycles);
      if (with_sigma) results["sigma"] = pairs_of(sigma_coords(layer).values);
    } else if (chosen == tau) {
      arguments = {{"map", map_path}, {"from", from}, {"to", to}};
      report["config"]["window"] = window_echo(from, to);
      const TauVector t = tau_vector(load_map(map_path), from, to, opts);
      json blocks = json::array();
      for (std::size_t i = 0; i < t.blocks.size(); ++i)
        blocks.push_back({{"n", from + static_cast<int>(i)}, {"sigma", pairs_of(t.blocks[i].values)}});
      results["blocks"] = blocks;
      results["precision"] = std::string(to_string(t.precision));
    } else if (chosen == compare) {
      arguments = {{"map_a", map_a}, {"map_b", map_b}, {"from", from}, {"to", to}, {"threshold", threshold}};
      report["config"]["window"] = window_echo(from, to);
      const TauVector ta = tau_vector(load_map(map_a), from, to, opts);
      const TauVector tb = tau_vector(load_map(map_b), from, to, opts);
      const double d = spectra_distance(ta, tb);
      results["distance"] = d;
      results["precision"] =
          std::string(to_string(ta.precision == Precision::Extended || tb.precision == Precision::Extended
                                    ? Precision::Extended
                                    : Precision::Double));
      results["verdict"] = d < threshold ? "indistinguishable: tau vectors agree below threshold"
                                         : "distinct: tau vectors differ";
    } else if (chosen == lattes) {
      arguments = {{"family", family}, {"seed", seed}, {"nmax", nmax}, {"tol", iso_tol}};
      if (!g2_text.empty()) arguments["g2"] = g2_text;
      if (!g3_text.empty()) arguments["g3"] = g3_text;
      if (g2_text.empty() != g3_text.empty()) throw UsageError("--g2 and --g3 must be given together");
      if (g2_text.empty() && family < 1) throw UsageError("lattes needs --g2/--g3 or --family K");
      std::vector<WeierstrassParams> members;
      if (!g2_text.empty()) members.push_back({parse_complex(g2_text), parse_complex(g3_text)});
      if (family == 1) throw UsageError("--family needs K >= 2");
      if (family >= 2) {
        const auto sampled = family_sample(family, seed);
        members.insert(members.end(), sampled.begin(), sampled.end());
      }
      std::vector<RationalMap<double>> maps;
      json listed = json::array();
      for (const auto& p : members) {
        maps.push_back(lattes_mult2(p));
        listed.push_back({{"g2", pair_of(p.g2)},
                          {"g3", pair_of(p.g3)},
                          {"j", pair_of(j_invariant(p))},
                          {"discriminant", pair_of(discriminant(p))}});
      }
      const std::vector<double> dist = isospectral_distances(maps, nmax, opts);
      bool iso = true;
      for (double d : dist) iso = iso && d <= iso_tol;
      bool superattracting = false;
      for (const auto& f : maps) superattracting = superattracting || superattracting_in_range(f, 1, nmax, opts);
      results["members"] = listed;
      results["layer_distances"] = dist;
      results["isospectral"] = iso;
      results["superattracting_in_window"] = superattracting;
      results["verdict"] = std::string("isospectral: ") + (iso ? "true" : "false");
    } else if (chosen == probe) {
      cfg.projective_tol = common.projective_tol;
      cfg.superattracting_tol = common.superattracting_tol;
      cfg.root_of_unity_tol = common.root_of_unity_tol;
      cfg.division_tol = common.division_tol;
      cfg.merge_factor = common.merge_factor;
      cfg.precision = common.resolved;
      arguments = {{"degree", cfg.degree},
                   {"from", cfg.n},
                   {"to", cfg.m},
                   {"trials", cfg.trials},
                   {"seed", cfg.seed},
                   {"threshold", cfg.distance_threshold},
                   {"plant_duplicates", cfg.plant_duplicates},
                   {"plant_conjugates", cfg.plant_conjugates}};
      report["config"]["window"] = window_echo(cfg.n, cfg.m);
      report["config"]["seed"] = cfg.seed;
      const ProbeReport r = collision_probe(cfg);
      json entries = json::array();
      for (const ProbeEntry& e : r.entries) {
        json item{{"trial", e.trial},
                  {"seed", e.seed},
                  {"origin", std::string(to_string(e.origin))},
                  {"status", e.failure ? std::string(to_string(*e.failure)) : std::string("ok")},
                  {"precision", std::string(to_string(e.precision))}};
        if (e.failure_period) item["failure_period"] = *e.failure_period;
        entries.push_back(item);
      }
      auto pair_list = [](const std::vector<ProbePair>& pairs) {
        json out = json::array();
        for (const ProbePair& p : pairs) {
          json item{{"a", p.a}, {"b", p.b}, {"distance", p.distance}};
          if (p.extended_distance) item["extended_distance"] = *p.extended_distance;
          out.push_back(item);
        }
        return out;
      };
      results["entries"] = entries;
      results["duplicate_pairs"] = pair_list(r.duplicate_pairs);
      results["conjugate_pairs"] = pair_list(r.conjugate_pairs);
      results["candidates"] = pair_list(r.candidates);
      results["min_inter_class"] = r.min_inter_class;
      results["max_intra_class"] = r.max_intra_class;
      results["separated"] = r.separated();
      results["duplicates_detected"] = r.duplicates_detected();
      results["conjugates_flagged"] = r.conjugates_flagged();
      results["failures"] = r.failures;
      results["skipped"] = r.skipped;
      // Injectivity results are only proved for d >= 4 and only generically.
      results["exploratory"] = cfg.degree < 4;
    }
    report["status"] = "ok";
  } catch (const UsageError& e) {
    diagnostics << "multspec " << name << ": " << e.what() << "\n";
    return {kExitUsage, {}, false};
  } catch (const Error& e) {
    status = exit_status(e.kind());
    json err{{"kind", std::string(to_string(e.kind()))}, {"message", e.detail()}};
    if (e.kind() == ErrorKind::Superattracting) err["period"] = e.period();
    report["status"] = "error";
    report["error"] = err;
    results = json::object();
    diagnostics << "multspec " << name << ": " << e.what() << "\n";
  }
  if (!report.contains("config")) report["config"] = common.echo();

  CommandResult out{status, emit_report(report), false};
  if (!common.out.empty()) {
    std::ofstream file(common.out, std::ios::binary);
    if (!file || !(file << out.report)) {
      diagnostics << "multspec: cannot write " << common.out << "\n";
      return {kExitUsage, out.report, false};
    }
    out.written_to_file = true;
  }
  return out;
}

}  // namespace multspec::cli
