#pragma once

// Map documents, canonical reports and the multspec subcommands.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "multspec/ratmap.hpp"

namespace multspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNumerical = 3;

/// JSON map document: degree, numerator and denominator as ascending
/// [re, im] coefficient lists, optional label. Throws ParseError,
/// ShapeError or Degenerate.
RationalMap<double> parse_map_document(std::string_view text);

std::string write_map_document(const RationalMap<double>& f, const std::optional<std::string>& label = std::nullopt);

/// Sorted keys, 17 significant digits for floats, two-space indentation
/// with scalar-only arrays kept on one line, trailing newline.
std::string emit_report(const nlohmann::json& report);

/// Exit status for a library error kind.
int exit_status(ErrorKind kind) noexcept;

struct CommandResult {
  int status = kExitOk;
  /// Canonical report; empty when argument parsing failed.
  std::string report;
  /// True when --out consumed the report.
  bool written_to_file = false;
};

/// Runs one subcommand (args exclude the program name). Diagnostics go to
/// `diagnostics`; the report is returned and, with --out, also written to
/// that file.
CommandResult run_command(const std::vector<std::string>& args, std::ostream& diagnostics);

}  // namespace multspec::cli
