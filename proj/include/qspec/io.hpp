#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qspec/cd_zeros.hpp"
#include "qspec/pseudo_eigen.hpp"
#include "qspec/quadrature_operator.hpp"
#include "qspec/spectral_limit.hpp"

namespace qspec::io {

/// Shortest decimal that round-trips to the same double (at most 17 significant digits).
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return std::signbit(v) ? "-0" : "0";
  // Shortest digits come from the scientific form; fixed output from to_chars may print
  // every digit of an integral value.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  const std::string sci(buf, res.ptr);
  const auto e = sci.find('e');
  const int exponent = std::stoi(sci.substr(e + 1));
  std::string digits;
  for (char c : sci.substr(0, e))
    if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
  const std::string sign = v < 0 ? "-" : "";
  const int n = static_cast<int>(digits.size());
  if (exponent < -5 || exponent >= 21) return sci;
  if (exponent < 0) return sign + "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + digits;
  if (exponent + 1 >= n) return sign + digits + std::string(static_cast<std::size_t>(exponent + 1 - n), '0');
  return sign + digits.substr(0, static_cast<std::size_t>(exponent + 1)) + "." + digits.substr(static_cast<std::size_t>(exponent + 1));
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << "\r\n";
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  write_csv_row(os, header);
  std::vector<std::string> cells;
  for (const auto& row : rows) {
    cells.clear();
    for (double v : row) cells.push_back(format_double(v));
    write_csv_row(os, cells);
  }
}

inline const std::vector<std::string>& moment_header() {
  static const std::vector<std::string> h{"lambda", "d", "expectation", "var_truncated", "var_full", "flags"};
  return h;
}

inline void write_moment_row(std::ostream& os, const MomentReport& r, const std::string& flags = "") {
  write_csv_row(os, {format_double(r.lambda), format_double(r.d_value), format_double(r.expectation),
                     format_double(r.var_truncated), format_double(r.var_full), flags});
}

inline nlohmann::json to_json(const EigenDecomposition& e) {
  nlohmann::json vectors = nlohmann::json::array();
  for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
    nlohmann::json col = nlohmann::json::array();
    for (std::size_t n = 0; n < e.eigenvalues.size(); ++n) col.push_back(e.eigenvectors(n, k));
    vectors.push_back(std::move(col));
  }
  return {{"cap", e.cap}, {"eigenvalues", e.eigenvalues}, {"eigenvectors", std::move(vectors)}};
}

inline nlohmann::json to_json(const ComplexRootSet& rs) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& z : rs.roots) roots.push_back({z.real(), z.imag()});
  nlohmann::json j{{"cap", rs.cap}, {"roots", std::move(roots)}, {"max_residual", rs.max_residual}};
  if (!rs.flagged.empty()) j["flagged"] = rs.flagged;
  return j;
}

inline nlohmann::json to_json(const ProximityCertificate& c) {
  nlohmann::json j{{"mode", c.mode == LimitMode::phase ? "phase" : "quadrature"},
                   {"target", c.target},
                   {"epsilon", c.epsilon},
                   {"cap", c.cap},
                   {"eigenvalue", c.eigenvalue},
                   {"distance", c.distance},
                   {"residual", c.residual}};
  if (c.mode == LimitMode::phase) j["index"] = c.index;
  return j;
}

inline void write_roots_csv(std::ostream& os, const ComplexRootSet& rs) {
  std::vector<std::vector<double>> rows;
  for (const auto& z : rs.roots) rows.push_back({z.real(), z.imag()});
  write_csv(os, {"re", "im"}, rows);
}

}  // namespace qspec::io
