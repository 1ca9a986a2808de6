// Copyright 2026 The qlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qlab/context.hpp"
#include "qlab/error.hpp"
#include "qlab/quantum_state.hpp"

// JSON interchange: {"dim": d, "re": [[...], ...], "im": [[...], ...]}.
// Rows may also be given flattened (d*d numbers, row-major).

namespace qlab::io {

using Json = nlohmann::json;

namespace detail {

inline double finite_number(const Json& v, const char* field) {
  if (!v.is_number()) throw ParseError(std::string("matrix field '") + field + "' has a non-number entry");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(std::string("matrix field '") + field + "' has a NaN/Inf entry");
  return x;
}

inline Eigen::MatrixXd read_part(const Json& j, const char* field, int d) {
  if (!j.contains(field)) throw ParseError(std::string("matrix is missing field '") + field + "'");
  const Json& a = j.at(field);
  if (!a.is_array()) throw ParseError(std::string("matrix field '") + field + "' is not an array");
  Eigen::MatrixXd out(d, d);
  if (a.size() == static_cast<std::size_t>(d) * d && !a.front().is_array()) {
    for (int i = 0; i < d * d; ++i) out(i / d, i % d) = finite_number(a[i], field);
    return out;
  }
  if (a.size() != static_cast<std::size_t>(d))
    throw ParseError(std::string("matrix field '") + field + "' has " + std::to_string(a.size()) +
                     " rows, expected " + std::to_string(d));
  for (int i = 0; i < d; ++i) {
    const Json& row = a[i];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(d))
      throw ParseError(std::string("matrix field '") + field + "' row " + std::to_string(i) +
                       " does not have " + std::to_string(d) + " entries");
    for (int k = 0; k < d; ++k) out(i, k) = finite_number(row[k], field);
  }
  return out;
}

inline Json write_part(const Matrix& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(imag ? m(i, k).imag() : m(i, k).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("matrix JSON must be an object");
  if (!j.contains("dim") || !j.at("dim").is_number_integer())
    throw ParseError("matrix JSON needs an integer 'dim'");
  const auto d = j.at("dim").get<long long>();
  if (d < 1 || d > 4096) throw ParseError("matrix 'dim' out of range: " + std::to_string(d));
  const int n = static_cast<int>(d);
  Matrix m(n, n);
  m.real() = detail::read_part(j, "re", n);
  m.imag() = j.contains("im") ? detail::read_part(j, "im", n) : Eigen::MatrixXd::Zero(n, n);
  return m;
}

inline Json matrix_to_json(const Matrix& m) {
  return Json{{"dim", m.rows()}, {"re", detail::write_part(m, false)}, {"im", detail::write_part(m, true)}};
}

inline Json context_to_json(const Context& ctx) {
  return Json{{"dim", ctx.dim()},
              {"basis_re", detail::write_part(ctx.basis(), false)},
              {"basis_im", detail::write_part(ctx.basis(), true)},
              {"id", ctx.id_hex()}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline Matrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

inline AlgebraElement read_element_file(const std::string& path) {
  return AlgebraElement(read_matrix_file(path));
}

inline QuantumState read_state_file(const std::string& path) {
  return QuantumState(read_matrix_file(path));
}

}  // namespace qlab::io
