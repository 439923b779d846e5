#pragma once

// Matrix file formats.
//
// Butson text: first line "s N", then N lines of N exponents.
// Complex CSV: N rows of 2N comma-separated values, re,im interleaved,
// written with 17 significant digits so that doubles round-trip exactly.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hadm/matrix.hpp"

namespace hadm::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void write_butson(std::ostream& os, const ButsonMatrix& h) {
  os << h.order() << ' ' << h.size() << '\n';
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) os << (j ? " " : "") << h.exp(i, j);
    os << '\n';
  }
}

inline ButsonMatrix read_butson(std::istream& is) {
  long long s = 0, n = 0;
  if (!(is >> s >> n) || s <= 0 || n <= 0) throw ParseError("butson: bad header, expected \"s N\"");
  std::vector<std::int64_t> e;
  e.reserve(std::size_t(n * n));
  for (long long k = 0; k < n * n; ++k) {
    long long v;
    if (!(is >> v)) throw ParseError("butson: expected " + std::to_string(n * n) + " exponents");
    if (v < 0 || v >= s) throw ParseError("butson: exponent outside [0, s)");
    e.push_back(v);
  }
  std::string rest;
  if (is >> rest) throw ParseError("butson: trailing data after matrix");
  return ButsonMatrix(std::uint64_t(s), std::size_t(n), std::move(e));
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_complex_csv(std::ostream& os, const PhaseMatrix& h) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (j) os << ',';
      os << format_double(h(i, j).real()) << ',' << format_double(h(i, j).imag());
    }
    os << '\n';
  }
}

inline PhaseMatrix read_complex_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      if (b == std::string::npos) throw ParseError("csv: empty cell");
      std::string t = cell.substr(b, e - b + 1);
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(t, &used);
      } catch (const std::exception&) {
        throw ParseError("csv: not a number: " + t);
      }
      if (used != t.size()) throw ParseError("csv: not a number: " + t);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw ParseError("csv: empty matrix");
  std::vector<cplx> a;
  a.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != 2 * n) throw ParseError("csv: expected 2N columns per row");
    for (std::size_t j = 0; j < n; ++j) a.emplace_back(r[2 * j], r[2 * j + 1]);
  }
  try {
    return PhaseMatrix(n, std::move(a));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("csv: ") + ex.what());
  }
}

using AnyMatrix = std::variant<ButsonMatrix, PhaseMatrix>;

/// Complex CSV if the text contains a comma, Butson text otherwise.
inline AnyMatrix read_matrix(std::istream& is) {
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  std::istringstream ss(text);
  if (text.find(',') != std::string::npos) return read_complex_csv(ss);
  return read_butson(ss);
}

inline AnyMatrix read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  return read_matrix(f);
}

inline void write_matrix(std::ostream& os, const AnyMatrix& m) {
  std::visit(
      [&](const auto& h) {
        if constexpr (std::is_same_v<std::decay_t<decltype(h)>, ButsonMatrix>)
          write_butson(os, h);
        else
          write_complex_csv(os, h);
      },
      m);
}

}  // namespace hadm::io
