#pragma once

// Principal parts of a finite-dimensional commutative algebra:
// P^n = (A (x) A) / J^{n+1}, J = ker(m), with j^n : a -> 1 (x) a mod J^{n+1}.
// Order <= n operators are the composites F j^n for left A-module maps
// F : P^n -> A; this gives a route to the filtration levels that shares no
// code with the commutator recursion.

#include "leftdiff/algebra.hpp"
#include "leftdiff/linalg.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace leftdiff {

namespace detail {
inline void require_commutative_for_principal_parts(const Algebra& a) {
  // The multiplication map is an algebra morphism only for commutative A.
  if (!a.is_commutative()) throw domain_error("principal parts need a commutative algebra");
}
}  // namespace detail

/// J = ker(m : A (x) A -> A).
inline Subspace mult_kernel(const Algebra& a) {
  detail::require_commutative_for_principal_parts(a);
  return kernel(tensor_square(a).mult_map);
}

/// Span of all products u*v (u in `left`, v in `right`) inside an algebra.
inline Subspace product_in_algebra(const Algebra& b, const Subspace& left, const Subspace& right) {
  EchelonBuilder e(b.dim());
  for (const auto& u : left.basis())
    for (const auto& v : right.basis()) {
      if (e.full()) return std::move(e).finish();
      e.add(b.multiply(u, v));
    }
  return std::move(e).finish();
}

/// J^k inside the tensor square algebra `b`; J^0 is the unit ideal.
inline Subspace ideal_power(const Algebra& b, const Subspace& j, std::size_t k) {
  if (k == 0) return Subspace::full(b.dim());
  Subspace power = j;
  for (std::size_t i = 1; i < k; ++i) {
    if (power.is_zero()) break;
    power = product_in_algebra(b, power, j);
  }
  return power;
}

/// Least k with J^k = 0, or nullopt if the powers stall at a nonzero ideal.
inline std::optional<std::size_t> nilpotency_index(const Algebra& b, const Subspace& j) {
  Subspace power = Subspace::full(b.dim());
  for (std::size_t k = 1;; ++k) {
    Subspace next = k == 1 ? j : product_in_algebra(b, power, j);
    if (next.is_zero()) return k;
    if (next == power) return std::nullopt;
    power = std::move(next);
  }
}

struct PrincipalParts {
  std::shared_ptr<const Algebra> algebra;
  std::size_t n = 0;
  std::size_t quotient_dim = 0;
  Subspace ideal;                   // J^{n+1} inside A (x) A
  Matrix projection;                // quotient_dim x d^2, kernel J^{n+1}
  Matrix j_n;                       // quotient_dim x d, a -> class of 1 (x) a
  std::vector<Matrix> left_action;  // class of (e_i (x) 1) * -, one per basis element
};

/// P^n with quotient coordinates on the non-pivot columns of J^{n+1}.
inline PrincipalParts build_principal_parts(const Algebra& a, std::size_t n) {
  detail::require_commutative_for_principal_parts(a);
  const std::size_t d = a.dim();
  const TensorSquare ts = tensor_square(a);
  const Subspace j = kernel(ts.mult_map);
  PrincipalParts pp;
  pp.algebra = std::make_shared<const Algebra>(a);
  pp.n = n;
  pp.ideal = ideal_power(ts.algebra, j, n + 1);
  pp.projection = complement_projection(pp.ideal);
  pp.quotient_dim = pp.projection.rows();

  std::vector<std::size_t> representatives;  // quotient coordinate r <-> basis vector e_c of A (x) A
  {
    std::vector<bool> is_pivot(d * d, false);
    for (auto p : pp.ideal.pivots()) is_pivot[p] = true;
    for (std::size_t c = 0; c < d * d; ++c)
      if (!is_pivot[c]) representatives.push_back(c);
  }

  std::vector<Vector> j_columns;
  for (std::size_t i = 0; i < d; ++i) j_columns.push_back(pp.projection.apply(tensor(a.unit(), a.basis_vector(i))));
  pp.j_n = Matrix::from_columns(j_columns, pp.quotient_dim);

  for (std::size_t i = 0; i < d; ++i) {
    const Vector left_factor = tensor(a.basis_vector(i), a.unit());
    std::vector<Vector> columns;
    for (auto c : representatives)
      columns.push_back(pp.projection.apply(ts.algebra.multiply(left_factor, unit_vector(d * d, c))));
    pp.left_action.push_back(Matrix::from_columns(columns, pp.quotient_dim));
  }
  return pp;
}

/// action(e_i) action(e_j) = sum_k c_ijk action(e_k) for all i, j.
inline bool left_module_axioms_hold(const PrincipalParts& pp) {
  const Algebra& a = *pp.algebra;
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Matrix expected(pp.quotient_dim, pp.quotient_dim);
      for (const auto& [k, c] : a.product_terms(i, j)) expected = expected + c * pp.left_action[k];
      if (!(pp.left_action[i] * pp.left_action[j] == expected)) return false;
    }
  Matrix unit_action(pp.quotient_dim, pp.quotient_dim);
  for (std::size_t k = 0; k < d; ++k) unit_action = unit_action + a.unit()[k] * pp.left_action[k];
  return unit_action == Matrix::identity(pp.quotient_dim);
}

/// Hom_A(P^n, A) as a subspace of d x q matrices (row-major coordinates):
/// { F : F action(e_i) = l_{e_i} F for all i }.
inline Subspace module_hom_space(const PrincipalParts& pp) {
  const Algebra& a = *pp.algebra;
  const std::size_t d = a.dim();
  const std::size_t q = pp.quotient_dim;
  EchelonBuilder rows(d * q);
  for (std::size_t i = 0; i < d && !rows.full(); ++i) {
    const Matrix l = a.left_matrix(a.basis_vector(i));
    const Matrix& act = pp.left_action[i];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < q; ++c) {
        Vector row(d * q);
        for (std::size_t k = 0; k < q; ++k)
          if (sgn(act(k, c)) != 0) row[r * q + k] += act(k, c);
        for (std::size_t k = 0; k < d; ++k)
          if (sgn(l(r, k)) != 0) row[k * q + c] -= l(r, k);
        rows.add(std::move(row));
      }
  }
  return kernel_of_rows(rows);
}

struct InducedOperators {
  Subspace operators;  // span of F j^n inside End(A)
  std::size_t hom_dim = 0;
  std::size_t quotient_dim = 0;
  bool injective = false;  // whether F -> F j^n is injective on the hom space
};

inline InducedOperators induced_operators_report(const Algebra& a, std::size_t n) {
  const PrincipalParts pp = build_principal_parts(a, n);
  const Subspace homs = module_hom_space(pp);
  const std::size_t d = a.dim();
  std::vector<Vector> ops;
  for (const auto& f : homs.basis()) {
    Matrix fm(d, pp.quotient_dim);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < pp.quotient_dim; ++c) fm(r, c) = f[r * pp.quotient_dim + c];
    ops.push_back((fm * pp.j_n).flatten());
  }
  InducedOperators out;
  out.operators = canonicalize(ops, d * d);
  out.hom_dim = homs.dim();
  out.quotient_dim = pp.quotient_dim;
  out.injective = out.operators.dim() == out.hom_dim;
  return out;
}

/// Operators of the form F j^n with F a left-module map P^n -> A.
inline Subspace induced_operators(const Algebra& a, std::size_t n) {
  return induced_operators_report(a, n).operators;
}

}  // namespace leftdiff
