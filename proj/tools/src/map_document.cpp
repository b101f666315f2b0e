#include <string>

#include "multspec/cli.hpp"

namespace multspec::cli {

namespace {

using nlohmann::json;

std::vector<Cplx> coefficients(const json& doc, const char* key, int degree) {
  if (!doc.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  const json& list = doc.at(key);
  if (!list.is_array()) throw Error(ErrorKind::ParseError, std::string("'") + key + "' must be an array");
  if (list.size() != static_cast<std::size_t>(degree) + 1) {
    throw Error(ErrorKind::ShapeError, std::string("'") + key + "' has " + std::to_string(list.size()) +
                                           " coefficients, expected " + std::to_string(degree + 1));
  }
  std::vector<Cplx> out;
  for (const json& pair : list) {
    if (!pair.is_array()) throw Error(ErrorKind::ParseError, "coefficients must be [re, im] pairs");
    if (pair.size() != 2) throw Error(ErrorKind::ShapeError, "coefficient pair must have two entries");
    if (!pair[0].is_number() || !pair[1].is_number())
      throw Error(ErrorKind::ParseError, "coefficient entries must be numbers");
    out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return out;
}

json pairs(std::span<const Cplx> coeffs) {
  json out = json::array();
  for (const Cplx& c : coeffs) out.push_back(json::array({c.real(), c.imag()}));
  return out;
}

}  // namespace

RationalMap<double> parse_map_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "map document must be an object");
  if (!doc.contains("degree") || !doc.at("degree").is_number_integer())
    throw Error(ErrorKind::ParseError, "'degree' must be an integer");
  const auto degree = doc.at("degree").get<long long>();
  if (degree < 2 || degree > kDegreeCap) throw Error(ErrorKind::ShapeError, "degree must be between 2 and 4096");
  if (doc.contains("label") && !doc.at("label").is_string())
    throw Error(ErrorKind::ParseError, "'label' must be a string");
  const int d = static_cast<int>(degree);
  HomForm<double> p(coefficients(doc, "numerator", d));
  HomForm<double> q(coefficients(doc, "denominator", d));
  try {
    return make_map(std::move(p), std::move(q));
  } catch (const Error& e) {
    // All-zero forms are as unusable as forms sharing a root.
    if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::Degenerate, e.detail());
    throw;
  }
}

std::string write_map_document(const RationalMap<double>& f, const std::optional<std::string>& label) {
  json doc;
  doc["degree"] = f.degree();
  doc["numerator"] = pairs(f.numerator().coeffs());
  doc["denominator"] = pairs(f.denominator().coeffs());
  if (label) doc["label"] = *label;
  return emit_report(doc);
}

}  // namespace multspec::cli
