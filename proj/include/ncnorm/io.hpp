#pragma once

// File formats: matrices as JSON ({"dims":[n,m],"entries":[[re,im],...]},
// row-major), divergence tables as CSV with a fixed header.  All reals are
// printed with 12 significant digits, locale-independent.

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ncnorm/checks.hpp"
#include "ncnorm/counterexamples.hpp"
#include "ncnorm/matrix.hpp"

namespace ncnorm {

inline std::string format_real(double x, int digits = 12) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, digits);
  if (res.ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf, res.ptr);
}

inline nlohmann::json matrix_to_json(const BipartiteOp& Y) {
  nlohmann::json j;
  j["dims"] = {Y.n, Y.m};
  nlohmann::json entries = nlohmann::json::array();
  const long d = Y.dim();
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c)
      entries.push_back({Y.mat(r, c).real(), Y.mat(r, c).imag()});
  j["entries"] = std::move(entries);
  return j;
}

inline BipartiteOp matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("entries"))
    throw std::invalid_argument("matrix file: expected object with dims and entries");
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2)
    throw std::invalid_argument("matrix file: dims must be [n, m]");
  const int n = dims.at(0).get<int>();
  const int m = dims.at(1).get<int>();
  if (n < 1 || m < 1) throw std::invalid_argument("matrix file: dims must be positive");
  const long d = static_cast<long>(n) * m;
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<size_t>(d) * static_cast<size_t>(d))
    throw std::invalid_argument("matrix file: entries length must be (n*m)^2");
  Matrix M(d, d);
  size_t idx = 0;
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c, ++idx) {
      const auto& e = entries.at(idx);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix file: each entry must be [re, im]");
      const double re = e.at(0).get<double>();
      const double im = e.at(1).get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw std::invalid_argument("matrix file: entries must be finite");
      M(r, c) = Complex(re, im);
    }
  return BipartiteOp(n, m, M);
}

inline void write_matrix_file(const std::string& path, const BipartiteOp& Y) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << matrix_to_json(Y).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline BipartiteOp read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("matrix file: invalid JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

inline std::string divergence_csv(const std::vector<DivergenceRow>& rows) {
  std::ostringstream out;
  out << "n,psi,nc,ratio,paper_bound\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_real(r.psi) << ',' << format_real(r.nc) << ','
        << format_real(r.ratio) << ',' << format_real(r.paper_bound) << '\n';
  return out.str();
}

inline void write_divergence_csv(const std::string& path, const std::vector<DivergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << divergence_csv(rows);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json report_to_json(const CheckReport& rep) {
  nlohmann::json j;
  j["suite"] = rep.suite;
  j["trials"] = rep.trials;
  j["passed"] = rep.passed;
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : rep.failures)
    fails.push_back({{"seed", f.seed},
                     {"description", f.description},
                     {"lhs", f.lhs},
                     {"rhs", f.rhs},
                     {"slack", f.slack}});
  j["failures"] = std::move(fails);
  return j;
}

}  // namespace ncnorm
