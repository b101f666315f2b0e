#include <cmath>
#include <cstdio>
#include <string>

#include "multspec/cli.hpp"

namespace multspec::cli {

namespace {

using nlohmann::json;

void put_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

bool is_flat(const json& j) {
  for (const json& e : j) {
    if (e.is_object()) return false;
    if (e.is_array() && !e.empty())
      for (const json& inner : e)
        if (inner.is_structured()) return false;
  }
  return true;
}

void put(std::string& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner_pad(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += inner_pad + json(it.key()).dump() + ": ";
        put(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (is_flat(j)) {
        out += "[";
        bool first = true;
        for (const json& e : j) {
          if (!first) out += ",";
          first = false;
          put(out, e, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const json& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += inner_pad;
        put(out, e, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      put_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string emit_report(const json& report) {
  std::string out;
  put(out, report, 0);
  out += "\n";
  return out;
}

}  // namespace multspec::cli
