#include "sdc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sdc {

namespace {

void write(std::ostringstream& out, const nlohmann::json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      // nlohmann::json objects iterate in sorted key order.
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << inner << nlohmann::json(it.key()).dump() << ": ";
        write(out, it.value(), indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(v.begin(), v.end(), [](const nlohmann::json& e) {
        return e.is_object() || (e.is_array() && !e.empty() && e[0].is_structured());
      });
      out << (flat ? "[" : "[\n");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out << (flat ? ", " : ",\n");
        if (!flat) out << inner;
        write(out, v[i], indent + 1);
      }
      out << (flat ? "]" : "\n" + pad + "]");
      return;
    }
    case nlohmann::json::value_t::number_float:
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      out << format_number(v);
      return;
    default:
      out << v.dump();
  }
}

}  // namespace

std::string format_number(const nlohmann::json& number) {
  if (number.is_number_integer() || number.is_number_unsigned()) return number.dump();
  if (!number.is_number_float()) return number.dump();
  const double x = number.get<double>();
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string canonical_json(const nlohmann::json& value) {
  std::ostringstream out;
  write(out, value, 0);
  out << "\n";
  return out.str();
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<nlohmann::json>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ",";
      if (!row.contains(header[i])) continue;
      const auto& cell = row.at(header[i]);
      if (cell.is_number()) {
        const std::string s = format_number(cell);
        out << (s == "null" ? "" : s);
      } else if (cell.is_boolean()) {
        out << (cell.get<bool>() ? "true" : "false");
      } else if (cell.is_string()) {
        out << cell.get<std::string>();
      }
    }
    out << "\n";
  }
  return out.str();
}

const std::vector<std::string>& tail_csv_header() {
  static const std::vector<std::string> header{"d_a",    "d_b",          "epsilon",
                                               "trials", "empirical_tail", "half_width",
                                               "analytic_bound", "vacuous"};
  return header;
}

}  // namespace sdc
