#pragma once

// Exact linear algebra over Q and Z.
//
// Subspaces are stored in reduced row echelon form with strictly increasing
// pivots, so two equal subspaces have identical stored bases and equality is
// a plain data comparison. Lattices are stored in row-style Hermite normal
// form (positive pivots, entries above a pivot reduced into [0, pivot)); no
// saturation is ever applied, so 2*v and v span different lattices.

#include "leftdiff/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace leftdiff {

using Vector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

inline Vector zero_vector(std::size_t n) { return Vector(n); }

inline Vector unit_vector(std::size_t n, std::size_t i) {
  Vector v(n);
  v.at(i) = 1;
  return v;
}

inline bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

inline bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& z) { return sgn(z) == 0; });
}

inline std::size_t first_nonzero(const Vector& v, std::size_t from = 0) {
  for (std::size_t j = from; j < v.size(); ++j)
    if (sgn(v[j]) != 0) return j;
  return v.size();
}

inline std::size_t first_nonzero(const IntVector& v, std::size_t from = 0) {
  for (std::size_t j = from; j < v.size(); ++j)
    if (sgn(v[j]) != 0) return j;
  return v.size();
}

namespace detail {

// v -= c * row, touching only columns >= from where row is nonzero.
inline void sub_scaled(Vector& v, const Rational& c, const Vector& row, std::size_t from = 0) {
  Rational t;
  for (std::size_t j = from; j < row.size(); ++j) {
    if (sgn(row[j]) == 0) continue;
    mpq_mul(t.get_mpq_t(), c.get_mpq_t(), row[j].get_mpq_t());
    mpq_sub(v[j].get_mpq_t(), v[j].get_mpq_t(), t.get_mpq_t());
  }
}

inline void sub_scaled(IntVector& v, const Integer& c, const IntVector& row, std::size_t from = 0) {
  for (std::size_t j = from; j < row.size(); ++j) {
    if (sgn(row[j]) == 0) continue;
    mpz_submul(v[j].get_mpz_t(), c.get_mpz_t(), row[j].get_mpz_t());
  }
}

inline void check_length(const Vector& v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw dimension_mismatch(std::string(what) + ": vector of length " + std::to_string(v.size()) +
                             ", expected " + std::to_string(n));
}

}  // namespace detail

inline Vector operator+(Vector a, const Vector& b) {
  detail::check_length(b, a.size(), "vector sum");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vector operator-(Vector a, const Vector& b) {
  detail::check_length(b, a.size(), "vector difference");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vector operator*(const Rational& c, Vector a) {
  for (auto& x : a) x *= c;
  return a;
}

/// Dense row-major rational matrix. A matrix M acts on column coordinate
/// vectors, so M * x gives the coordinates of the image of x.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail::check_length(rows[i], cols, "Matrix::from_rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      detail::check_length(columns[j], rows, "Matrix::from_columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  /// Inverse of flatten() for square matrices.
  static Matrix unflatten(const Vector& coords, std::size_t n) {
    detail::check_length(coords, n * n, "Matrix::unflatten");
    Matrix m(n, n);
    m.data_ = coords;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  /// Row-major coordinates; the coordinate system of End(A).
  const Vector& flatten() const noexcept { return data_; }

  bool is_zero() const { return leftdiff::is_zero(data_); }

  bool is_integral() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q.get_den() == 1; });
  }

  Vector apply(const Vector& x) const {
    detail::check_length(x, cols_, "Matrix::apply");
    Vector y(rows_);
    Rational t;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (sgn(x[j]) == 0) continue;
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rational& a = (*this)(i, j);
        if (sgn(a) == 0) continue;
        mpq_mul(t.get_mpq_t(), a.get_mpq_t(), x[j].get_mpq_t());
        mpq_add(y[i].get_mpq_t(), y[i].get_mpq_t(), t.get_mpq_t());
      }
    }
    return y;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw dimension_mismatch("matrix product: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                               " times " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    Matrix c(a.rows_, b.cols_);
    Rational t;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rational& bkj = b(k, j);
          if (sgn(bkj) == 0) continue;
          mpq_mul(t.get_mpq_t(), aik.get_mpq_t(), bkj.get_mpq_t());
          mpq_add(c(i, j).get_mpq_t(), c(i, j).get_mpq_t(), t.get_mpq_t());
        }
      }
    return c;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.require_same_shape(b, "matrix sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.require_same_shape(b, "matrix difference");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend Matrix operator*(const Rational& c, Matrix a) {
    for (auto& x : a.data_) x *= c;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  void require_same_shape(const Matrix& b, const char* what) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw dimension_mismatch(std::string(what) + ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Side length n of an n*n matrix coordinate space.
inline std::size_t matrix_side(std::size_t ambient) {
  std::size_t n = 0;
  while (n * n < ambient) ++n;
  if (n * n != ambient)
    throw dimension_mismatch("ambient dimension " + std::to_string(ambient) + " is not a square");
  return n;
}

class Subspace;

/// Incremental reduced row echelon form. Every accepted row is normalized to
/// a unit pivot and cleared from all other rows, so the state is always RREF.
class EchelonBuilder {
public:
  explicit EchelonBuilder(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  bool full() const noexcept { return rows_.size() == ambient_; }

  /// Reduces v against the current rows in place; returns true if the
  /// residual is zero.
  bool reduce(Vector& v) const {
    detail::check_length(v, ambient_, "EchelonBuilder::reduce");
    Rational c;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (sgn(v[p]) == 0) continue;
      c = v[p];
      detail::sub_scaled(v, c, rows_[k], p);
    }
    return leftdiff::is_zero(v);
  }

  /// Adds v to the span; returns true if the rank grew.
  bool add(Vector v) {
    if (full()) {
      detail::check_length(v, ambient_, "EchelonBuilder::add");
      return false;
    }
    if (reduce(v)) return false;
    const std::size_t p = first_nonzero(v);
    const Rational inv = 1 / v[p];
    for (std::size_t j = p; j < ambient_; ++j)
      if (sgn(v[j]) != 0) v[j] *= inv;
    Rational c;
    for (auto& row : rows_) {
      if (sgn(row[p]) == 0) continue;
      c = row[p];
      detail::sub_scaled(row, c, v, p);
    }
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
  }

  const std::vector<Vector>& rows() const noexcept { return rows_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  Subspace finish() &&;

private:
  std::size_t ambient_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

/// A linear subspace of Q^n in canonical RREF form.
class Subspace {
public:
  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

  static Subspace full(std::size_t ambient) {
    Subspace s(ambient);
    for (std::size_t i = 0; i < ambient; ++i) {
      s.basis_.push_back(unit_vector(ambient, i));
      s.pivots_.push_back(i);
    }
    return s;
  }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  bool is_zero() const noexcept { return basis_.empty(); }
  bool is_full() const noexcept { return basis_.size() == ambient_; }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  friend bool operator==(const Subspace&, const Subspace&) = default;

private:
  friend class EchelonBuilder;
  std::size_t ambient_;
  std::vector<Vector> basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace EchelonBuilder::finish() && {
  Subspace s(ambient_);
  s.basis_ = std::move(rows_);
  s.pivots_ = std::move(pivots_);
  return s;
}

inline EchelonBuilder builder_from(const Subspace& s) {
  EchelonBuilder b(s.ambient_dim());
  for (const auto& v : s.basis()) b.add(v);
  return b;
}

inline Subspace canonicalize(std::span<const Vector> vectors, std::size_t ambient) {
  EchelonBuilder b(ambient);
  for (const auto& v : vectors) {
    detail::check_length(v, ambient, "canonicalize");
    if (!b.full()) b.add(v);
  }
  return std::move(b).finish();
}

inline Subspace canonicalize(const std::vector<Vector>& vectors, std::size_t ambient) {
  return canonicalize(std::span<const Vector>(vectors), ambient);
}

/// Residual of v after clearing the pivot coordinates of S; zero iff v in S.
inline Vector reduce(const Subspace& s, Vector v) {
  detail::check_length(v, s.ambient_dim(), "reduce");
  Rational c;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const std::size_t p = s.pivots()[k];
    if (sgn(v[p]) == 0) continue;
    c = v[p];
    detail::sub_scaled(v, c, s.basis()[k], p);
  }
  return v;
}

inline bool contains(const Subspace& s, const Vector& v) {
  detail::check_length(v, s.ambient_dim(), "contains");
  return is_zero(reduce(s, v));
}

/// Coordinates of v in the stored basis of S, or nullopt if v is not in S.
inline std::optional<Vector> coordinates_in(const Subspace& s, const Vector& v) {
  if (!contains(s, v)) return std::nullopt;
  Vector c(s.dim());
  for (std::size_t k = 0; k < s.dim(); ++k) c[k] = v[s.pivots()[k]];
  return c;
}

inline bool is_subspace_of(const Subspace& inner, const Subspace& outer) {
  if (inner.ambient_dim() != outer.ambient_dim()) throw dimension_mismatch("is_subspace_of: ambient mismatch");
  if (inner.dim() > outer.dim()) return false;
  return std::all_of(inner.basis().begin(), inner.basis().end(),
                     [&](const Vector& v) { return contains(outer, v); });
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw dimension_mismatch("sum: ambient mismatch");
  EchelonBuilder builder = builder_from(a);
  for (const auto& v : b.basis()) {
    if (builder.full()) break;
    builder.add(v);
  }
  return std::move(builder).finish();
}

/// Kernel of the linear map whose matrix has the given rows.
inline Subspace kernel_of_rows(const EchelonBuilder& echelon) {
  const std::size_t n = echelon.ambient_dim();
  const auto& pivots = echelon.pivots();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> generators;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vector v(n);
    v[f] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -echelon.rows()[k][f];
    generators.push_back(std::move(v));
  }
  return canonicalize(generators, n);
}

inline Subspace kernel(const Matrix& m) {
  EchelonBuilder e(m.cols());
  for (std::size_t i = 0; i < m.rows() && !e.full(); ++i) e.add(m.row(i));
  return kernel_of_rows(e);
}

/// Matrix of the projection onto the non-pivot coordinates of T along T.
/// Its kernel is exactly T; rows are indexed by the non-pivot columns.
inline Matrix complement_projection(const Subspace& t) {
  const std::size_t n = t.ambient_dim();
  std::vector<bool> is_pivot(n, false);
  for (auto p : t.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Matrix q(free_cols.size(), n);
  for (std::size_t r = 0; r < free_cols.size(); ++r) {
    const std::size_t j = free_cols[r];
    q(r, j) = 1;
    for (std::size_t k = 0; k < t.dim(); ++k) {
      const Rational& b = t.basis()[k][j];
      if (sgn(b) != 0) q(r, t.pivots()[k]) = -b;
    }
  }
  return q;
}

/// {v : L_i v in T for every i}.
inline Subspace preimage_all(std::span<const Matrix> maps, const Subspace& target, std::size_t domain_dim) {
  for (const auto& l : maps)
    if (l.rows() != target.ambient_dim() || l.cols() != domain_dim)
      throw dimension_mismatch("preimage_under: map of shape " + std::to_string(l.rows()) + "x" +
                               std::to_string(l.cols()) + " does not fit");
  if (target.is_full()) return Subspace::full(domain_dim);
  const Matrix q = complement_projection(target);
  EchelonBuilder e(domain_dim);
  for (const auto& l : maps) {
    if (e.full()) break;
    const Matrix condition = q * l;
    for (std::size_t i = 0; i < condition.rows() && !e.full(); ++i) e.add(condition.row(i));
  }
  return kernel_of_rows(e);
}

inline Subspace preimage_under(const Matrix& l, const Subspace& target) {
  return preimage_all(std::span<const Matrix>(&l, 1), target, l.cols());
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw dimension_mismatch("intersect: ambient mismatch");
  // a ∩ b = preimage of b under the inclusion of a, pushed forward.
  const std::size_t n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace(n);
  Matrix inclusion = Matrix::from_columns(a.basis(), n);
  const Subspace coeffs = preimage_under(inclusion, b);
  std::vector<Vector> images;
  for (const auto& c : coeffs.basis()) images.push_back(inclusion.apply(c));
  return canonicalize(images, n);
}

/// Canonical span of {B1 * B2} over basis matrices of two subspaces of the
/// n*n matrix coordinate space. Bilinearity makes basis products sufficient.
inline Subspace product_span(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw dimension_mismatch("product_span: ambient mismatch");
  const std::size_t n = matrix_side(a.ambient_dim());
  std::vector<Matrix> right;
  right.reserve(b.dim());
  for (const auto& v : b.basis()) right.push_back(Matrix::unflatten(v, n));
  EchelonBuilder e(a.ambient_dim());
  for (const auto& u : a.basis()) {
    const Matrix left = Matrix::unflatten(u, n);
    for (const auto& r : right) {
      if (e.full()) return std::move(e).finish();
      e.add((left * r).flatten());
    }
  }
  return std::move(e).finish();
}

inline Subspace span_of_matrices(const std::vector<Matrix>& ms, std::size_t n) {
  std::vector<Vector> coords;
  coords.reserve(ms.size());
  for (const auto& m : ms) {
    if (m.rows() != n || m.cols() != n) throw dimension_mismatch("span_of_matrices: shape mismatch");
    coords.push_back(m.flatten());
  }
  return canonicalize(coords, n * n);
}

// ---------------------------------------------------------------------------
// Integer lattices
// ---------------------------------------------------------------------------

class IntegerLattice;

/// Incremental Hermite normal form by extended-gcd row operations. Rows whose
/// leading entry lies at or beyond `limit` are not inserted but handed back
/// to the caller; with limit == ambient every nonzero vector is absorbed.
class HnfBuilder {
public:
  explicit HnfBuilder(std::size_t ambient, std::size_t limit) : ambient_(ambient), limit_(limit) {}
  explicit HnfBuilder(std::size_t ambient) : HnfBuilder(ambient, ambient) {}

  std::size_t rank() const noexcept { return rows_.size(); }

  /// Returns the residual if it was not absorbed (zero vectors are dropped).
  std::optional<IntVector> add(IntVector v) {
    if (v.size() != ambient_) throw dimension_mismatch("HnfBuilder::add: wrong length");
    std::size_t lead = first_nonzero(v);
    std::size_t k = 0;
    while (lead < limit_) {
      while (k < rows_.size() && pivots_[k] < lead) ++k;
      if (k == rows_.size() || pivots_[k] > lead) {
        if (sgn(v[lead]) < 0)
          for (auto& x : v) x = -x;
        pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(k), lead);
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(k), std::move(v));
        return std::nullopt;
      }
      combine(rows_[k], v, lead);
      lead = first_nonzero(v, lead + 1);
      ++k;
    }
    if (lead == ambient_) return std::nullopt;
    return v;
  }

  IntegerLattice finish() &&;

private:
  // Unimodular 2x2 step: row keeps gcd(row[p], v[p]) at p, v gets 0 there.
  static void combine(IntVector& row, IntVector& v, std::size_t p) {
    if (mpz_divisible_p(v[p].get_mpz_t(), row[p].get_mpz_t())) {
      const Integer q = v[p] / row[p];
      detail::sub_scaled(v, q, row, p);
      return;
    }
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), row[p].get_mpz_t(), v[p].get_mpz_t());
    const Integer a = row[p] / g;
    const Integer b = v[p] / g;
    for (std::size_t j = p; j < row.size(); ++j) {
      if (sgn(row[j]) == 0 && sgn(v[j]) == 0) continue;
      Integer r = s * row[j] + t * v[j];
      v[j] = a * v[j] - b * row[j];
      row[j] = std::move(r);
    }
    if (sgn(row[p]) < 0)
      for (auto& x : row) x = -x;
  }

  std::size_t ambient_;
  std::size_t limit_;
  std::vector<IntVector> rows_;
  std::vector<std::size_t> pivots_;
};

/// A Z-submodule of Z^n in canonical Hermite normal form.
class IntegerLattice {
public:
  explicit IntegerLattice(std::size_t ambient = 0) : ambient_(ambient) {}

  static IntegerLattice full(std::size_t ambient) {
    IntegerLattice l(ambient);
    for (std::size_t i = 0; i < ambient; ++i) {
      IntVector v(ambient);
      v[i] = 1;
      l.basis_.push_back(std::move(v));
      l.pivots_.push_back(i);
    }
    return l;
  }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  std::size_t dim() const noexcept { return basis_.size(); }
  bool is_zero() const noexcept { return basis_.empty(); }
  const std::vector<IntVector>& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  friend bool operator==(const IntegerLattice&, const IntegerLattice&) = default;

private:
  friend class HnfBuilder;
  std::size_t ambient_;
  std::vector<IntVector> basis_;
  std::vector<std::size_t> pivots_;
};

inline IntegerLattice HnfBuilder::finish() && {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t p = pivots_[k];
    for (std::size_t i = 0; i < k; ++i) {
      if (sgn(rows_[i][p]) == 0) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows_[i][p].get_mpz_t(), rows_[k][p].get_mpz_t());
      if (sgn(q) != 0) detail::sub_scaled(rows_[i], q, rows_[k], p);
    }
  }
  IntegerLattice l(ambient_);
  l.basis_ = std::move(rows_);
  l.pivots_ = std::move(pivots_);
  return l;
}

inline IntVector to_integer_vector(const Vector& v) {
  IntVector z(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw domain_error("non-integer entry " + to_string(v[i]) + " in integer context");
    z[i] = v[i].get_num();
  }
  return z;
}

inline Vector to_rational_vector(const IntVector& z) {
  Vector v(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) v[i] = z[i];
  return v;
}

inline IntegerLattice hnf_span(std::span<const IntVector> vectors, std::size_t ambient) {
  HnfBuilder b(ambient);
  for (const auto& v : vectors) b.add(v);
  return std::move(b).finish();
}

inline IntegerLattice hnf_span(const std::vector<IntVector>& vectors, std::size_t ambient) {
  return hnf_span(std::span<const IntVector>(vectors), ambient);
}

/// Rational input must be integral; throws domain_error otherwise.
inline IntegerLattice hnf_span(const std::vector<Vector>& vectors, std::size_t ambient) {
  HnfBuilder b(ambient);
  for (const auto& v : vectors) b.add(to_integer_vector(v));
  return std::move(b).finish();
}

inline bool lattice_contains(const IntegerLattice& l, IntVector v) {
  if (v.size() != l.ambient_dim()) throw dimension_mismatch("lattice_contains: wrong length");
  std::size_t k = 0;
  for (std::size_t lead = first_nonzero(v); lead < v.size(); lead = first_nonzero(v, lead + 1)) {
    while (k < l.rank() && l.pivots()[k] < lead) ++k;
    if (k == l.rank() || l.pivots()[k] != lead) return false;
    const IntVector& row = l.basis()[k];
    if (!mpz_divisible_p(v[lead].get_mpz_t(), row[lead].get_mpz_t())) return false;
    const Integer q = v[lead] / row[lead];
    detail::sub_scaled(v, q, row, lead);
  }
  return true;
}

/// Non-integral vectors are never lattice members.
inline bool lattice_contains(const IntegerLattice& l, const Vector& v) {
  if (v.size() != l.ambient_dim()) throw dimension_mismatch("lattice_contains: wrong length");
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return lattice_contains(l, to_integer_vector(v));
}

inline bool contains(const IntegerLattice& l, const Vector& v) { return lattice_contains(l, v); }

inline bool is_sublattice_of(const IntegerLattice& inner, const IntegerLattice& outer) {
  return std::all_of(inner.basis().begin(), inner.basis().end(),
                     [&](const IntVector& v) { return lattice_contains(outer, v); });
}

inline IntegerLattice sum(const IntegerLattice& a, const IntegerLattice& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw dimension_mismatch("sum: ambient mismatch");
  HnfBuilder builder(a.ambient_dim());
  for (const auto& v : a.basis()) builder.add(v);
  for (const auto& v : b.basis()) builder.add(v);
  return std::move(builder).finish();
}

/// Q-span of a lattice.
inline Subspace rational_span(const IntegerLattice& l) {
  std::vector<Vector> vs;
  for (const auto& v : l.basis()) vs.push_back(to_rational_vector(v));
  return canonicalize(vs, l.ambient_dim());
}

/// {x in Z^n : M x = 0} for an integral matrix M, as a lattice.
inline IntegerLattice integer_kernel(const Matrix& m) {
  const std::size_t eqs = m.rows();
  const std::size_t n = m.cols();
  HnfBuilder b(eqs + n, eqs);
  std::vector<IntVector> generators;
  for (std::size_t j = 0; j < n; ++j) {
    IntVector row(eqs + n);
    for (std::size_t i = 0; i < eqs; ++i) {
      const Rational& a = m(i, j);
      if (a.get_den() != 1) throw domain_error("integer_kernel: non-integral matrix entry");
      row[i] = a.get_num();
    }
    row[eqs + j] = 1;
    if (auto rest = b.add(std::move(row))) generators.emplace_back(rest->begin() + static_cast<std::ptrdiff_t>(eqs), rest->end());
  }
  return hnf_span(generators, n);
}

/// {v in Z^n : L_i v in target for every i}, exactly over Z.
inline IntegerLattice lattice_preimage_all(std::span<const Matrix> maps, const IntegerLattice& target,
                                           std::size_t domain_dim) {
  // Current solution lattice, as rows in Z^domain_dim.
  std::vector<IntVector> current = IntegerLattice::full(domain_dim).basis();
  const std::size_t m = target.ambient_dim();
  const std::size_t r = target.rank();
  for (const auto& l : maps) {
    if (l.rows() != m || l.cols() != domain_dim) throw dimension_mismatch("lattice preimage: map does not fit");
    if (current.empty()) break;
    // Unknowns (x, c): sum_j x_j L p_j - sum_k c_k b_k = 0.
    const std::size_t s = current.size();
    Matrix system(m, s + r);
    for (std::size_t j = 0; j < s; ++j) {
      const Vector image = l.apply(to_rational_vector(current[j]));
      for (std::size_t i = 0; i < m; ++i) system(i, j) = image[i];
    }
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t i = 0; i < m; ++i) system(i, s + k) = -Rational(target.basis()[k][i]);
    const IntegerLattice sol = integer_kernel(system);
    std::vector<IntVector> next;
    for (const auto& z : sol.basis()) {
      IntVector v(domain_dim);
      for (std::size_t j = 0; j < s; ++j) {
        if (sgn(z[j]) == 0) continue;
        detail::sub_scaled(v, -z[j], current[j]);
      }
      next.push_back(std::move(v));
    }
    current = hnf_span(next, domain_dim).basis();
  }
  HnfBuilder b(domain_dim);
  for (auto& v : current) b.add(std::move(v));
  return std::move(b).finish();
}

inline IntegerLattice lattice_product_span(const IntegerLattice& a, const IntegerLattice& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw dimension_mismatch("product_span: ambient mismatch");
  const std::size_t n = matrix_side(a.ambient_dim());
  HnfBuilder builder(a.ambient_dim());
  std::vector<Matrix> right;
  for (const auto& v : b.basis()) right.push_back(Matrix::unflatten(to_rational_vector(v), n));
  for (const auto& u : a.basis()) {
    const Matrix left = Matrix::unflatten(to_rational_vector(u), n);
    for (const auto& r : right) builder.add(to_integer_vector((left * r).flatten()));
  }
  return std::move(builder).finish();
}

inline IntegerLattice product_span(const IntegerLattice& a, const IntegerLattice& b) {
  return lattice_product_span(a, b);
}

}  // namespace leftdiff
