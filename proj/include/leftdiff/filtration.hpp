#pragma once

// Filtrations of End(A) by differential operators of bounded order.
//
// Commutative mode follows the recursion
//     D_{-1} = 0,  D_{n+1} = { d : d l_t - l_t d in D_n for all t },
// non-commutative mode the left-multiplication sandwich
//     D'_n = { phi : l_t phi - phi l_t in D_{n-1} for all t },  D_n = L_A D'_n L_A.
//
// "For all t" is reduced to basis elements: t -> (d -> d l_t - l_t d) is
// linear in t and each level is a subspace, so the conditions for a basis
// imply those for every element.
//
// Endomorphisms are d x d matrices; End(A) is the d*d coordinate space of
// their row-major entries. Levels are Subspace over Q and IntegerLattice
// over Z (scalar mode Z), with one templated engine for both.

#include "leftdiff/algebra.hpp"
#include "leftdiff/linalg.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace leftdiff {

enum class FiltrationMode { commutative, noncommutative };

inline std::string to_string(FiltrationMode m) { return m == FiltrationMode::commutative ? "comm" : "nc"; }

template <class Level>
struct BasicFiltration {
  std::shared_ptr<const Algebra> algebra;
  FiltrationMode mode = FiltrationMode::commutative;
  std::vector<Level> levels;         // D_0 .. D_{n_max}
  std::vector<Level> primed_levels;  // D'_0 .. D'_{n_max}, non-commutative mode only
  std::size_t n_max = 0;
  std::optional<std::size_t> stabilized_at;
};

using Filtration = BasicFiltration<Subspace>;
using IntegerFiltration = BasicFiltration<IntegerLattice>;

inline std::size_t default_n_max(const Algebra& a) { return a.dim() + 1; }

// ---------------------------------------------------------------------------
// Composition maps on End coordinates
// ---------------------------------------------------------------------------

/// phi -> phi * r on the row-major coordinates of d x d matrices.
inline Matrix right_composition_map(const Matrix& r) {
  const std::size_t d = r.rows();
  Matrix m(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        if (sgn(r(c, b)) != 0) m(a * d + b, a * d + c) = r(c, b);
  return m;
}

/// phi -> l * phi.
inline Matrix left_composition_map(const Matrix& l) {
  const std::size_t d = l.rows();
  Matrix m(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        if (sgn(l(a, c)) != 0) m(a * d + b, c * d + b) = l(a, c);
  return m;
}

/// ad(x): phi -> phi l_x - l_x phi.
inline Matrix ad_map(const Algebra& a, const Vector& x) {
  const Matrix l = a.left_matrix(x);
  return right_composition_map(l) - left_composition_map(l);
}

inline std::vector<Matrix> ad_maps(const Algebra& a) {
  std::vector<Matrix> maps;
  for (std::size_t i = 0; i < a.dim(); ++i) maps.push_back(ad_map(a, a.basis_vector(i)));
  return maps;
}

/// ad(x) D = D l_x - l_x D, directly on a d x d matrix.
inline Matrix ad_apply(const Algebra& a, const Vector& x, const Matrix& d) {
  const Matrix l = a.left_matrix(x);
  return d * l - l * d;
}

// ---------------------------------------------------------------------------
// Level operations for Q (Subspace) and Z (IntegerLattice)
// ---------------------------------------------------------------------------

template <class Level>
struct level_ops;

template <>
struct level_ops<Subspace> {
  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace span(const std::vector<Vector>& vs, std::size_t n) { return canonicalize(vs, n); }
  static Subspace preimage(std::span<const Matrix> maps, const Subspace& t, std::size_t n) {
    return preimage_all(maps, t, n);
  }
  static Subspace product(const Subspace& a, const Subspace& b) { return product_span(a, b); }
  static bool has(const Subspace& s, const Vector& v) { return contains(s, v); }
  static std::vector<Vector> generators(const Subspace& s) { return s.basis(); }
  static std::size_t dim(const Subspace& s) { return s.dim(); }
};

template <>
struct level_ops<IntegerLattice> {
  static IntegerLattice zero(std::size_t n) { return IntegerLattice(n); }
  static IntegerLattice span(const std::vector<Vector>& vs, std::size_t n) { return hnf_span(vs, n); }
  static IntegerLattice preimage(std::span<const Matrix> maps, const IntegerLattice& t, std::size_t n) {
    return lattice_preimage_all(maps, t, n);
  }
  static IntegerLattice product(const IntegerLattice& a, const IntegerLattice& b) {
    return lattice_product_span(a, b);
  }
  static bool has(const IntegerLattice& s, const Vector& v) { return lattice_contains(s, v); }
  static std::vector<Vector> generators(const IntegerLattice& s) {
    std::vector<Vector> out;
    for (const auto& z : s.basis()) out.push_back(to_rational_vector(z));
    return out;
  }
  static std::size_t dim(const IntegerLattice& s) { return s.rank(); }
};

template <class Level>
Level left_mult_level(const Algebra& a) {
  std::vector<Vector> ls;
  for (std::size_t i = 0; i < a.dim(); ++i) ls.push_back(a.left_matrix(a.basis_vector(i)).flatten());
  return level_ops<Level>::span(ls, a.dim() * a.dim());
}

template <class Level>
Level right_mult_level(const Algebra& a) {
  std::vector<Vector> rs;
  for (std::size_t i = 0; i < a.dim(); ++i) rs.push_back(a.right_matrix(a.basis_vector(i)).flatten());
  return level_ops<Level>::span(rs, a.dim() * a.dim());
}

namespace detail {

template <class Level>
void require_integral_if_needed(const Algebra& a) {
  if constexpr (std::is_same_v<Level, IntegerLattice>) {
    for (const auto& c : a.constants())
      if (!is_integral(c)) throw domain_error("integer filtration needs integral structure constants");
  }
}

template <class Level>
void mark_stable(BasicFiltration<Level>& f) {
  const auto& ls = f.levels;
  for (std::size_t n = 0; n + 1 < ls.size(); ++n)
    if (ls[n] == ls[n + 1]) {
      f.stabilized_at = n;
      return;
    }
}

}  // namespace detail

/// Commutative recursion; levels D_0..D_{n_max}.
template <class Level = Subspace>
BasicFiltration<Level> commutative_filtration(const Algebra& a, std::size_t n_max) {
  if (!a.is_commutative()) throw domain_error("commutative filtration requires a commutative algebra");
  detail::require_integral_if_needed<Level>(a);
  using ops = level_ops<Level>;
  const std::size_t n = a.dim() * a.dim();
  BasicFiltration<Level> f;
  f.algebra = std::make_shared<const Algebra>(a);
  f.mode = FiltrationMode::commutative;
  f.n_max = n_max;
  const auto maps = ad_maps(a);
  Level previous = ops::zero(n);
  for (std::size_t level = 0; level <= n_max; ++level) {
    // Once two consecutive levels agree the recursion is at a fixed point.
    if (level >= 2 && f.levels[level - 1] == f.levels[level - 2]) {
      f.levels.push_back(f.levels.back());
      continue;
    }
    Level next = ops::preimage(maps, previous, n);
    f.levels.push_back(next);
    previous = std::move(next);
  }
  detail::mark_stable(f);
  return f;
}

/// Left-multiplication sandwich; both D'_n and D_n = L_A (D'_n L_A) are kept.
template <class Level = Subspace>
BasicFiltration<Level> noncommutative_filtration(const Algebra& a, std::size_t n_max) {
  detail::require_integral_if_needed<Level>(a);
  using ops = level_ops<Level>;
  const std::size_t n = a.dim() * a.dim();
  BasicFiltration<Level> f;
  f.algebra = std::make_shared<const Algebra>(a);
  f.mode = FiltrationMode::noncommutative;
  f.n_max = n_max;
  const auto maps = ad_maps(a);
  const Level lefts = left_mult_level<Level>(a);
  Level previous = ops::zero(n);
  for (std::size_t level = 0; level <= n_max; ++level) {
    if (level >= 2 && f.levels[level - 1] == f.levels[level - 2]) {
      f.primed_levels.push_back(f.primed_levels.back());
      f.levels.push_back(f.levels.back());
      continue;
    }
    Level primed = ops::preimage(maps, previous, n);
    Level sandwiched = ops::product(lefts, ops::product(primed, lefts));
    f.primed_levels.push_back(std::move(primed));
    f.levels.push_back(sandwiched);
    previous = std::move(sandwiched);
  }
  detail::mark_stable(f);
  return f;
}

inline Filtration compute_filtration(const Algebra& a, FiltrationMode mode, std::size_t n_max) {
  return mode == FiltrationMode::commutative ? commutative_filtration<Subspace>(a, n_max)
                                             : noncommutative_filtration<Subspace>(a, n_max);
}

/// Least n with D in level n; nullopt means "exceeds n_max".
template <class Level>
std::optional<std::size_t> operator_order(const BasicFiltration<Level>& f, const Matrix& d) {
  const std::size_t dim = f.algebra->dim();
  if (d.rows() != dim || d.cols() != dim)
    throw dimension_mismatch("operator_order: expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                             " matrix");
  for (std::size_t n = 0; n < f.levels.size(); ++n)
    if (level_ops<Level>::has(f.levels[n], d.flatten())) return n;
  return std::nullopt;
}

namespace detail {

inline void require_commutative_for_ad(const Algebra& a) {
  if (!a.is_commutative())
    throw domain_error("the iterated-commutator criterion is stated for commutative algebras only");
}

// ad(e_i) pairwise commute for commutative A, so nondecreasing index
// sequences cover every tuple. A zero intermediate kills all extensions.
inline bool iterated_ad_vanishes(const Algebra& a, const Matrix& current, std::size_t start, std::size_t remaining) {
  if (current.is_zero()) return true;
  if (remaining == 0) return false;
  for (std::size_t i = start; i < a.dim(); ++i)
    if (!iterated_ad_vanishes(a, ad_apply(a, a.basis_vector(i), current), i, remaining - 1)) return false;
  return true;
}

inline void collect_iterated_ad_rows(const std::vector<Matrix>& ads, const Matrix& composite, std::size_t start,
                                     std::size_t remaining, EchelonBuilder& rows) {
  if (rows.full() || composite.is_zero()) return;
  if (remaining == 0) {
    for (std::size_t r = 0; r < composite.rows() && !rows.full(); ++r) rows.add(composite.row(r));
    return;
  }
  for (std::size_t i = start; i < ads.size(); ++i)
    collect_iterated_ad_rows(ads, ads[i] * composite, i, remaining - 1, rows);
}

}  // namespace detail

/// True iff ad(x_0) ... ad(x_n) D = 0 for every (n+1)-tuple of elements.
inline bool iterated_ad_test(const Algebra& a, const Matrix& d, std::size_t n) {
  detail::require_commutative_for_ad(a);
  if (d.rows() != a.dim() || d.cols() != a.dim()) throw dimension_mismatch("iterated_ad_test: shape mismatch");
  return detail::iterated_ad_vanishes(a, d, 0, n + 1);
}

/// {D : ad(x_0) ... ad(x_n) D = 0 for all tuples}, as a subspace of End(A).
/// Built from the composite (n+1)-fold commutator maps, independently of the
/// level-by-level recursion.
inline Subspace iterated_ad_kernel(const Algebra& a, std::size_t n) {
  detail::require_commutative_for_ad(a);
  const std::size_t dd = a.dim() * a.dim();
  const auto ads = ad_maps(a);
  EchelonBuilder rows(dd);
  detail::collect_iterated_ad_rows(ads, Matrix::identity(dd), 0, n + 1, rows);
  return kernel_of_rows(rows);
}

struct MultiplicativeCheck {
  std::size_t r = 0;
  std::size_t s = 0;
  bool holds = true;
  std::optional<Matrix> witness;  // a product D_r * D_s outside D_{r+s}
};

/// Whether D_r D_s is contained in D_{r+s}.
template <class Level>
MultiplicativeCheck check_multiplicative(const BasicFiltration<Level>& f, std::size_t r, std::size_t s) {
  if (r + s > f.n_max)
    throw domain_error("check_multiplicative: r + s = " + std::to_string(r + s) + " exceeds n_max = " +
                       std::to_string(f.n_max));
  using ops = level_ops<Level>;
  const std::size_t d = f.algebra->dim();
  MultiplicativeCheck out{r, s, true, std::nullopt};
  const auto& target = f.levels[r + s];
  std::vector<Matrix> right;
  for (const auto& v : ops::generators(f.levels[s])) right.push_back(Matrix::unflatten(v, d));
  for (const auto& u : ops::generators(f.levels[r])) {
    const Matrix left = Matrix::unflatten(u, d);
    for (const auto& m : right) {
      Matrix product = left * m;
      if (!ops::has(target, product.flatten())) {
        out.holds = false;
        out.witness = std::move(product);
        return out;
      }
    }
  }
  return out;
}

/// L_A D_n = D_n = D_n L_A for every level (diagnostic, not assumed).
template <class Level>
bool left_stable(const BasicFiltration<Level>& f) {
  using ops = level_ops<Level>;
  const Level lefts = left_mult_level<Level>(*f.algebra);
  for (const auto& level : f.levels)
    if (!(ops::product(lefts, level) == level) || !(ops::product(level, lefts) == level)) return false;
  return true;
}

inline std::vector<std::size_t> level_dims(const Filtration& f) {
  std::vector<std::size_t> out;
  for (const auto& l : f.levels) out.push_back(l.dim());
  return out;
}

template <class Level>
std::vector<std::size_t> level_dims(const std::vector<Level>& levels) {
  std::vector<std::size_t> out;
  for (const auto& l : levels) out.push_back(level_ops<Level>::dim(l));
  return out;
}

}  // namespace leftdiff
