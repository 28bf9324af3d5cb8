#pragma once

// Finite-dimensional associative unital algebras given by structure
// constants, their multiplication operators, presets and tensor squares.

#include "leftdiff/linalg.hpp"
#include "leftdiff/scalar.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace leftdiff {

class Algebra {
public:
  /// `constants[(i*d + j)*d + k]` is the coefficient of e_k in e_i * e_j.
  Algebra(std::vector<std::string> labels, std::vector<Rational> constants, Vector unit,
          Scalars scalars = Scalars::Q)
      : labels_(std::move(labels)), constants_(std::move(constants)), unit_(std::move(unit)), scalars_(scalars) {
    const std::size_t d = labels_.size();
    if (d == 0) throw domain_error("algebras must have dimension >= 1");
    if (constants_.size() != d * d * d)
      throw dimension_mismatch("structure constant table has " + std::to_string(constants_.size()) +
                               " entries, expected " + std::to_string(d * d * d));
    if (unit_.size() != d) throw dimension_mismatch("unit vector has wrong length");
    commutative_ = true;
    for (std::size_t i = 0; i < d && commutative_; ++i)
      for (std::size_t j = i + 1; j < d && commutative_; ++j)
        for (std::size_t k = 0; k < d; ++k)
          if (constant(i, j, k) != constant(j, i, k)) {
            commutative_ = false;
            break;
          }
    sparse_.resize(d * d);
    for (std::size_t ij = 0; ij < d * d; ++ij)
      for (std::size_t k = 0; k < d; ++k)
        if (sgn(constants_[ij * d + k]) != 0) sparse_[ij].emplace_back(k, constants_[ij * d + k]);
  }

  std::size_t dim() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Vector& unit() const noexcept { return unit_; }
  Scalars scalars() const noexcept { return scalars_; }
  bool is_commutative() const noexcept { return commutative_; }
  const std::vector<Rational>& constants() const noexcept { return constants_; }

  const Rational& constant(std::size_t i, std::size_t j, std::size_t k) const {
    const std::size_t d = dim();
    return constants_[(i * d + j) * d + k];
  }

  Vector basis_vector(std::size_t i) const { return unit_vector(dim(), i); }

  /// Nonzero (k, c_ijk) pairs of e_i * e_j.
  const std::vector<std::pair<std::size_t, Rational>>& product_terms(std::size_t i, std::size_t j) const {
    return sparse_[i * dim() + j];
  }

  Vector multiply(const Vector& a, const Vector& b) const {
    const std::size_t d = dim();
    detail::check_length(a, d, "Algebra::multiply");
    detail::check_length(b, d, "Algebra::multiply");
    Vector out(d);
    Rational ab, t;
    for (std::size_t i = 0; i < d; ++i) {
      if (sgn(a[i]) == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (sgn(b[j]) == 0) continue;
        mpq_mul(ab.get_mpq_t(), a[i].get_mpq_t(), b[j].get_mpq_t());
        for (const auto& [k, c] : product_terms(i, j)) {
          mpq_mul(t.get_mpq_t(), ab.get_mpq_t(), c.get_mpq_t());
          mpq_add(out[k].get_mpq_t(), out[k].get_mpq_t(), t.get_mpq_t());
        }
      }
    }
    return out;
  }

  /// Matrix of x -> a*x.
  Matrix left_matrix(const Vector& a) const {
    const std::size_t d = dim();
    detail::check_length(a, d, "left multiplication");
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      if (sgn(a[i]) == 0) continue;
      for (std::size_t j = 0; j < d; ++j)
        for (const auto& [k, c] : product_terms(i, j)) m(k, j) += a[i] * c;
    }
    return m;
  }

  /// Matrix of x -> x*a.
  Matrix right_matrix(const Vector& a) const {
    const std::size_t d = dim();
    detail::check_length(a, d, "right multiplication");
    Matrix m(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      if (sgn(a[j]) == 0) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (const auto& [k, c] : product_terms(i, j)) m(k, i) += a[j] * c;
    }
    return m;
  }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    return a.labels_ == b.labels_ && a.constants_ == b.constants_ && a.unit_ == b.unit_ && a.scalars_ == b.scalars_;
  }

private:
  std::vector<std::string> labels_;
  std::vector<Rational> constants_;
  Vector unit_;
  Scalars scalars_;
  bool commutative_ = true;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> sparse_;
};

/// One failed law. `indices` are the basis indices involved.
struct Violation {
  std::string law;  // "associativity", "left_unit", "right_unit", "integrality"
  std::vector<std::size_t> indices;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Every violated associativity triple and unit law; empty means valid.
inline std::vector<Violation> validate(const Algebra& a) {
  std::vector<Violation> out;
  const std::size_t d = a.dim();
  std::vector<Vector> e;
  for (std::size_t i = 0; i < d; ++i) e.push_back(a.basis_vector(i));
  std::vector<Vector> products(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) products[i * d + j] = a.multiply(e[i], e[j]);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (a.multiply(products[i * d + j], e[k]) != a.multiply(e[i], products[j * d + k]))
          out.push_back({"associativity", {i, j, k}, "(e_i e_j) e_k != e_i (e_j e_k)"});
  for (std::size_t i = 0; i < d; ++i) {
    if (a.multiply(a.unit(), e[i]) != e[i]) out.push_back({"left_unit", {i}, "1 * e_i != e_i"});
    if (a.multiply(e[i], a.unit()) != e[i]) out.push_back({"right_unit", {i}, "e_i * 1 != e_i"});
  }
  if (a.scalars() == Scalars::Z) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k)
          if (!is_integral(a.constant(i, j, k)))
            out.push_back({"integrality", {i, j, k}, "non-integer structure constant in Z-mode"});
    for (std::size_t i = 0; i < d; ++i)
      if (!is_integral(a.unit()[i])) out.push_back({"integrality", {i}, "non-integer unit coordinate in Z-mode"});
  }
  return out;
}

enum class Side { left, right };

/// l_a (x -> a x) or r_a (x -> x a) as an exact matrix.
struct MultOperator {
  Matrix matrix;
  Side side;
  Vector element;
};

inline MultOperator left_mult(const Algebra& a, const Vector& x) { return {a.left_matrix(x), Side::left, x}; }
inline MultOperator right_mult(const Algebra& a, const Vector& x) { return {a.right_matrix(x), Side::right, x}; }

struct MultSpans {
  Subspace left;   // L_A
  Subspace right;  // R_A
};

/// L_A and R_A inside the d*d coordinate space of End(A).
inline MultSpans mult_op_spans(const Algebra& a) {
  const std::size_t d = a.dim();
  std::vector<Vector> ls, rs;
  for (std::size_t i = 0; i < d; ++i) {
    ls.push_back(a.left_matrix(a.basis_vector(i)).flatten());
    rs.push_back(a.right_matrix(a.basis_vector(i)).flatten());
  }
  return {canonicalize(ls, d * d), canonicalize(rs, d * d)};
}

/// Space of derivations {D : D(xy) = D(x) y + x D(y)} in End coordinates.
inline Subspace derivations(const Algebra& a) {
  const std::size_t d = a.dim();
  const std::size_t n = d * d;
  EchelonBuilder rows(n);
  // Unknown D has coordinate (r, c) at index r*d + c, meaning D(e_c) has e_r-coefficient D_rc.
  for (std::size_t i = 0; i < d && !rows.full(); ++i)
    for (std::size_t j = 0; j < d && !rows.full(); ++j)
      for (std::size_t out = 0; out < d; ++out) {
        Vector row(n);
        for (std::size_t k = 0; k < d; ++k) row[out * d + k] += a.constant(i, j, k);
        for (std::size_t m = 0; m < d; ++m) {
          row[m * d + i] -= a.constant(m, j, out);
          row[m * d + j] -= a.constant(i, m, out);
        }
        rows.add(std::move(row));
      }
  return kernel_of_rows(rows);
}

inline bool is_derivation(const Algebra& a, const Matrix& m) {
  const std::size_t d = a.dim();
  if (m.rows() != d || m.cols() != d) throw dimension_mismatch("is_derivation: shape mismatch");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const Vector ei = a.basis_vector(i), ej = a.basis_vector(j);
      if (m.apply(a.multiply(ei, ej)) != a.multiply(m.apply(ei), ej) + a.multiply(ei, m.apply(ej))) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Presets. Bases are ordered by (degree, lexicographic).
// ---------------------------------------------------------------------------

namespace detail {

inline std::string monomial_label(long a, long b, int vars) {
  auto power = [](const char* var, long e) -> std::string {
    if (e == 0) return "";
    return e == 1 ? std::string(var) : std::string(var) + "^" + std::to_string(e);
  };
  std::string x = power("X", a);
  std::string y = vars == 2 ? power("Y", b) : "";
  if (x.empty() && y.empty()) return "1";
  if (x.empty()) return y;
  if (y.empty()) return x;
  return x + "*" + y;
}

inline std::vector<std::string> generator_names(std::size_t count) {
  static const char* const small[] = {"x", "y", "z"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i)
    names.push_back(count <= 3 ? std::string(small[i]) : "x" + std::to_string(i + 1));
  return names;
}

// All words of length <= max_len over `letters` symbols, by (length, lex).
inline std::vector<std::vector<std::size_t>> words_up_to(std::size_t letters, std::size_t max_len) {
  std::vector<std::vector<std::size_t>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len && letters > 0; ++len) {
    const std::size_t end = out.size();
    for (std::size_t w = begin; w < end; ++w)
      for (std::size_t c = 0; c < letters; ++c) {
        auto next = out[w];
        next.push_back(c);
        out.push_back(std::move(next));
      }
    begin = end;
  }
  return out;
}

}  // namespace detail

/// k[X] or k[X,Y] modulo all monomials of total degree > max_degree.
inline Algebra truncated_poly(int vars, int max_degree, Scalars scalars = Scalars::Q) {
  if (vars != 1 && vars != 2) throw domain_error("truncated_poly supports 1 or 2 variables");
  if (max_degree < 0) throw domain_error("truncated_poly: max_degree must be >= 0");
  std::vector<std::pair<long, long>> monomials;
  for (long deg = 0; deg <= max_degree; ++deg) {
    if (vars == 1) {
      monomials.emplace_back(deg, 0);
    } else {
      for (long a = deg; a >= 0; --a) monomials.emplace_back(a, deg - a);
    }
  }
  const std::size_t d = monomials.size();
  std::vector<std::string> labels;
  for (auto [a, b] : monomials) labels.push_back(detail::monomial_label(a, b, vars));
  std::vector<Rational> c(d * d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const std::pair<long, long> prod{monomials[i].first + monomials[j].first,
                                       monomials[i].second + monomials[j].second};
      for (std::size_t k = 0; k < d; ++k)
        if (monomials[k] == prod) c[(i * d + j) * d + k] = 1;
    }
  return Algebra(std::move(labels), std::move(c), unit_vector(d, 0), scalars);
}

/// k<x_1..x_g> modulo all words of length > max_degree.
inline Algebra truncated_free(int generators, int max_degree, Scalars scalars = Scalars::Q) {
  if (generators < 0) throw domain_error("truncated_free: generator count must be >= 0");
  if (max_degree < 0) throw domain_error("truncated_free: max_degree must be >= 0");
  const auto names = detail::generator_names(static_cast<std::size_t>(generators));
  const auto words = detail::words_up_to(static_cast<std::size_t>(generators), static_cast<std::size_t>(max_degree));
  const std::size_t d = words.size();
  std::vector<std::string> labels;
  for (const auto& w : words) {
    if (w.empty()) {
      labels.emplace_back("1");
      continue;
    }
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "*" : "") + names[w[i]];
    labels.push_back(std::move(s));
  }
  // Index lookup by (length, rank among words of that length).
  auto index_of = [&](const std::vector<std::size_t>& w) -> std::size_t {
    std::size_t offset = 0, power = 1;
    for (std::size_t len = 0; len < w.size(); ++len) {
      offset += power;
      power *= static_cast<std::size_t>(generators);
    }
    std::size_t rank = 0;
    for (auto letter : w) rank = rank * static_cast<std::size_t>(generators) + letter;
    return offset + rank;
  };
  std::vector<Rational> c(d * d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (words[i].size() + words[j].size() > static_cast<std::size_t>(max_degree)) continue;
      auto w = words[i];
      w.insert(w.end(), words[j].begin(), words[j].end());
      c[(i * d + j) * d + index_of(w)] = 1;
    }
  return Algebra(std::move(labels), std::move(c), unit_vector(d, 0), scalars);
}

namespace detail {
inline std::string matrix_unit_label(std::size_t i, std::size_t j, std::size_t n) {
  return n < 10 ? "E" + std::to_string(i + 1) + std::to_string(j + 1)
                : "E" + std::to_string(i + 1) + "," + std::to_string(j + 1);
}

inline Algebra matrix_unit_algebra(std::size_t n, bool upper_only, Scalars scalars) {
  std::vector<std::pair<std::size_t, std::size_t>> units;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = upper_only ? i : 0; j < n; ++j) units.emplace_back(i, j);
  const std::size_t d = units.size();
  std::vector<std::string> labels;
  for (auto [i, j] : units) labels.push_back(matrix_unit_label(i, j, n));
  std::vector<Rational> c(d * d * d);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      if (units[p].second != units[q].first) continue;
      const std::pair<std::size_t, std::size_t> prod{units[p].first, units[q].second};
      for (std::size_t k = 0; k < d; ++k)
        if (units[k] == prod) c[(p * d + q) * d + k] = 1;
    }
  Vector unit(d);
  for (std::size_t k = 0; k < d; ++k)
    if (units[k].first == units[k].second) unit[k] = 1;
  return Algebra(std::move(labels), std::move(c), std::move(unit), scalars);
}
}  // namespace detail

/// Full n x n matrix algebra, basis E_ij in row-major order.
inline Algebra matrix_algebra(int n, Scalars scalars = Scalars::Q) {
  if (n < 1) throw domain_error("matrix_algebra: n must be >= 1");
  return detail::matrix_unit_algebra(static_cast<std::size_t>(n), false, scalars);
}

/// Upper triangular n x n matrices, basis E_ij (i <= j) in row-major order.
inline Algebra upper_triangular(int n, Scalars scalars = Scalars::Q) {
  if (n < 1) throw domain_error("upper_triangular: n must be >= 1");
  return detail::matrix_unit_algebra(static_cast<std::size_t>(n), true, scalars);
}

/// k[X]/(X^2).
inline Algebra dual_numbers(Scalars scalars = Scalars::Q) { return truncated_poly(1, 1, scalars); }

/// Dispatch by preset name; see the individual builders for parameters.
inline Algebra preset(const std::string& name, const std::vector<long>& params, Scalars scalars = Scalars::Q) {
  auto need = [&](std::size_t count) {
    if (params.size() != count)
      throw domain_error("preset '" + name + "' takes " + std::to_string(count) + " parameter(s), got " +
                         std::to_string(params.size()));
  };
  auto bounded = [&](long v, long lo, long hi, const char* what) {
    if (v < lo || v > hi)
      throw domain_error("preset '" + name + "': " + what + " = " + std::to_string(v) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
  };
  if (name == "dual_numbers") {
    need(0);
    return dual_numbers(scalars);
  }
  if (name == "truncated_poly") {
    need(2);
    return truncated_poly(bounded(params[0], 1, 2, "vars"), bounded(params[1], 0, 12, "max_degree"), scalars);
  }
  if (name == "truncated_free") {
    need(2);
    return truncated_free(bounded(params[0], 0, 4, "num_gens"), bounded(params[1], 0, 6, "max_degree"), scalars);
  }
  if (name == "matrix_algebra") {
    need(1);
    return matrix_algebra(bounded(params[0], 1, 7, "n"), scalars);
  }
  if (name == "upper_triangular") {
    need(1);
    return upper_triangular(bounded(params[0], 1, 9, "n"), scalars);
  }
  throw domain_error("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Tensor square
// ---------------------------------------------------------------------------

struct TensorSquare {
  Algebra algebra;  // basis e_i (x) e_j at index i*d + j
  Matrix mult_map;  // d x d^2, e_i (x) e_j -> e_i e_j
};

inline TensorSquare tensor_square(const Algebra& a) {
  const std::size_t d = a.dim();
  const std::size_t n = d * d;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) labels.push_back(a.labels()[i] + "⊗" + a.labels()[j]);
  std::vector<Rational> c(n * n * n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          for (std::size_t p = 0; p < d; ++p) {
            const Rational& left = a.constant(i, k, p);
            if (sgn(left) == 0) continue;
            for (std::size_t q = 0; q < d; ++q) {
              const Rational& right = a.constant(j, l, q);
              if (sgn(right) == 0) continue;
              c[((i * d + j) * n + (k * d + l)) * n + (p * d + q)] += left * right;
            }
          }
  Vector unit(n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) unit[i * d + j] = a.unit()[i] * a.unit()[j];
  Matrix m(d, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) m(k, i * d + j) = a.constant(i, j, k);
  return {Algebra(std::move(labels), std::move(c), std::move(unit), a.scalars()), std::move(m)};
}

/// Coordinates of x (x) y in the tensor square basis.
inline Vector tensor(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = x[i] * y[j];
  return out;
}

}  // namespace leftdiff
