#include "multspec/common.hpp"

namespace multspec {

std::string_view to_string(Precision p) noexcept {
  return p == Precision::Double ? "double" : "extended";
}

std::optional<Precision> parse_precision(std::string_view text) noexcept {
  if (text == "double") return Precision::Double;
  if (text == "extended") return Precision::Extended;
  return std::nullopt;
}

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::DegreeCap: return "DegreeCap";
    case ErrorKind::IndeterminatePoint: return "IndeterminatePoint";
    case ErrorKind::CycleBroken: return "CycleBroken";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OrbitMatchFailed: return "OrbitMatchFailed";
    case ErrorKind::NotPeriodic: return "NotPeriodic";
    case ErrorKind::Superattracting: return "Superattracting";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SingularCurve: return "SingularCurve";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, int period)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      period_(period),
      detail_(message) {}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace multspec
