#include "rkbudget/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rkbudget {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string format_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string{};
}

namespace {

void dump(std::ostream& out, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent >= 0) out << '\n' << std::string(static_cast<std::size_t>(d * indent), ' ');
  };
  const char* sep = indent >= 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ',';
        first = false;
        pad(depth + 1);
        out << Json(key).dump() << sep;
        dump(out, value, indent, depth + 1);
      }
      pad(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out << ',';
        first = false;
        pad(depth + 1);
        dump(out, value, indent, depth + 1);
      }
      pad(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_real(v) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

void write_json(std::ostream& out, const Json& j, int indent) {
  dump(out, j, indent, 0);
  out << '\n';
}

}  // namespace rkbudget
