#pragma once

// JSON algebra specs and report helpers. Either
//   {"preset": "truncated_free", "params": [2, 2], "scalars": "Q"}
// or an explicit table
//   {"dim": 2, "labels": ["1","X"], "unit": ["1","0"], "scalars": "Q",
//    "structure_constants": [[0,0,0,1,1], [0,1,1,1,1], [1,0,1,1,1]]}
// where [i, j, k, num, den] means e_i e_j has e_k-coefficient num/den.

#include "leftdiff/algebra.hpp"
#include "leftdiff/linalg.hpp"
#include "leftdiff/scalar.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace leftdiff {

using Json = nlohmann::ordered_json;

struct AlgebraSpec {
  Json resolved;  // normalized form, sufficient to rebuild the algebra
  Algebra algebra;
  std::vector<Violation> violations;
};

namespace detail {

inline const Json& require_field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw parse_error(std::string("algebra spec: missing field \"") + name + "\"");
  return *it;
}

inline Rational json_rational(const Json& j, const char* what) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw parse_error(std::string("algebra spec: ") + what + " must be an integer or a \"num/den\" string");
}

inline Scalars json_scalars(const Json& j) {
  auto it = j.find("scalars");
  if (it == j.end()) return Scalars::Q;
  if (!it->is_string()) throw parse_error("algebra spec: \"scalars\" must be \"Q\" or \"Z\"");
  const auto s = it->get<std::string>();
  if (s == "Q") return Scalars::Q;
  if (s == "Z") return Scalars::Z;
  throw parse_error("algebra spec: unknown scalars \"" + s + "\" (expected Q or Z)");
}

inline std::string read_spec_text(std::string_view source) {
  std::size_t i = 0;
  while (i < source.size() && std::isspace(static_cast<unsigned char>(source[i]))) ++i;
  if (i < source.size() && source[i] == '{') return std::string(source);
  std::ifstream in{std::string(source)};
  if (!in) throw parse_error("cannot read spec file '" + std::string(source) + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline AlgebraSpec spec_from_preset(const Json& j) {
  const Json& name = require_field(j, "preset");
  if (!name.is_string()) throw parse_error("algebra spec: \"preset\" must be a string");
  std::vector<long> params;
  if (auto it = j.find("params"); it != j.end()) {
    if (!it->is_array()) throw parse_error("algebra spec: \"params\" must be an array of integers");
    for (const auto& p : *it) {
      if (!p.is_number_integer()) throw parse_error("algebra spec: \"params\" must be an array of integers");
      params.push_back(p.get<long>());
    }
  }
  const Scalars scalars = json_scalars(j);
  Algebra a = preset(name.get<std::string>(), params, scalars);
  Json resolved;
  resolved["preset"] = name;
  resolved["params"] = params;
  resolved["scalars"] = std::string(to_string(scalars));
  return {std::move(resolved), std::move(a), {}};
}

inline AlgebraSpec spec_from_table(const Json& j) {
  const Json& dim_field = require_field(j, "dim");
  if (!dim_field.is_number_integer() || dim_field.get<long>() < 1)
    throw parse_error("algebra spec: \"dim\" must be a positive integer");
  const auto d = static_cast<std::size_t>(dim_field.get<long>());
  if (d > 64) throw parse_error("algebra spec: \"dim\" above 64 is not supported");
  const Scalars scalars = json_scalars(j);

  std::vector<std::string> labels;
  if (auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array() || it->size() != d) throw parse_error("algebra spec: \"labels\" must list dim strings");
    for (const auto& l : *it) {
      if (!l.is_string()) throw parse_error("algebra spec: \"labels\" must list dim strings");
      labels.push_back(l.get<std::string>());
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) labels.push_back("e" + std::to_string(i));
  }

  const Json& unit_field = require_field(j, "unit");
  if (!unit_field.is_array() || unit_field.size() != d)
    throw parse_error("algebra spec: \"unit\" must be a coordinate vector of length dim");
  Vector unit;
  for (const auto& u : unit_field) unit.push_back(json_rational(u, "unit entry"));

  const Json& table = require_field(j, "structure_constants");
  if (!table.is_array()) throw parse_error("algebra spec: \"structure_constants\" must be an array");
  std::vector<Rational> c(d * d * d);
  std::size_t row = 0;
  for (const auto& t : table) {
    const std::string where = "structure_constants[" + std::to_string(row++) + "]";
    if (!t.is_array() || t.size() != 5) throw parse_error("algebra spec: " + where + " must be [i, j, k, num, den]");
    for (const auto& x : t)
      if (!x.is_number_integer()) throw parse_error("algebra spec: " + where + " must hold integers");
    const long i = t[0].get<long>(), jj = t[1].get<long>(), k = t[2].get<long>();
    const long num = t[3].get<long>(), den = t[4].get<long>();
    const auto in_range = [&](long v) { return v >= 0 && static_cast<std::size_t>(v) < d; };
    if (!in_range(i) || !in_range(jj) || !in_range(k)) throw parse_error("algebra spec: " + where + " index out of range");
    if (den == 0) throw parse_error("algebra spec: " + where + " has zero denominator");
    const Rational q = make_rational(num, den);
    if (scalars == Scalars::Z && !is_integral(q))
      throw parse_error("algebra spec: " + where + " is not an integer in Z-mode");
    c[(static_cast<std::size_t>(i) * d + static_cast<std::size_t>(jj)) * d + static_cast<std::size_t>(k)] += q;
  }
  if (scalars == Scalars::Z)
    for (const auto& u : unit)
      if (!is_integral(u)) throw parse_error("algebra spec: unit has a non-integer entry in Z-mode");

  Algebra a(labels, c, unit, scalars);
  Json resolved;
  resolved["dim"] = d;
  resolved["labels"] = labels;
  Json unit_json = Json::array();
  for (const auto& u : unit) unit_json.push_back(to_string(u));
  resolved["unit"] = unit_json;
  resolved["scalars"] = std::string(to_string(scalars));
  Json constants = Json::array();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t jj = 0; jj < d; ++jj)
      for (std::size_t k = 0; k < d; ++k) {
        const Rational& q = c[(i * d + jj) * d + k];
        if (sgn(q) == 0) continue;
        constants.push_back({i, jj, k, q.get_num().get_si(), q.get_den().get_si()});
      }
  resolved["structure_constants"] = constants;
  auto violations = validate(a);
  return {std::move(resolved), std::move(a), std::move(violations)};
}

}  // namespace detail

/// Parses an algebra spec from a path or inline JSON text. Law violations are
/// returned, not thrown, so callers can list every failing triple.
inline AlgebraSpec parse_spec(std::string_view source) {
  const std::string text = detail::read_spec_text(source);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("malformed JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  if (!j.is_object()) throw parse_error("algebra spec must be a JSON object");
  if (j.contains("preset")) return detail::spec_from_preset(j);
  return detail::spec_from_table(j);
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
  return out;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw parse_error("expected an array of rationals");
  Vector v;
  for (const auto& x : j) v.push_back(detail::json_rational(x, "vector entry"));
  return v;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw parse_error("expected a non-empty array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw parse_error("matrix rows have different lengths");
  return Matrix::from_rows(rows, cols);
}

/// Basis vectors of a subspace of End(A) as d x d matrices.
inline Json basis_json(const Subspace& s) {
  Json out = Json::array();
  const std::size_t d = matrix_side(s.ambient_dim());
  for (const auto& v : s.basis()) out.push_back(to_json(Matrix::unflatten(v, d)));
  return out;
}

inline Json algebra_summary(const Algebra& a) {
  Json out;
  out["dim"] = a.dim();
  out["commutative"] = a.is_commutative();
  out["scalars"] = std::string(to_string(a.scalars()));
  out["labels"] = a.labels();
  return out;
}

}  // namespace leftdiff
