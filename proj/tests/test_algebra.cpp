#include "leftdiff/algebra.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace leftdiff;

namespace {

std::vector<Algebra> unital_presets() {
  return {dual_numbers(),         truncated_poly(1, 3),     truncated_poly(2, 2), truncated_free(2, 2),
          truncated_free(1, 3),   matrix_algebra(2),        upper_triangular(2),  upper_triangular(3),
          truncated_poly(1, 0)};
}

Vector random_element(std::mt19937_64& rng, std::size_t d) {
  std::uniform_int_distribution<int> dist(-3, 3);
  Vector v(d);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST(Validate, PresetsAreValid) {
  for (const auto& a : unital_presets()) EXPECT_TRUE(validate(a).empty());
}

TEST(Validate, SwappedUnitIsReported) {
  // a*a = b, a*b = b*a = a, b*b = b: b is the unit but a is declared as one.
  std::vector<Rational> c(8);
  c[(0 * 2 + 0) * 2 + 1] = 1;
  c[(0 * 2 + 1) * 2 + 0] = 1;
  c[(1 * 2 + 0) * 2 + 0] = 1;
  c[(1 * 2 + 1) * 2 + 1] = 1;
  const Algebra bad({"a", "b"}, c, unit_vector(2, 0));
  const auto v = validate(bad);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().law, "left_unit");
  const Algebra good({"a", "b"}, c, unit_vector(2, 1));
  EXPECT_TRUE(validate(good).empty());
}

TEST(Validate, NonAssociativeTableIsReported) {
  // e1 e1 = e2 but e1 (e1 e1) = 0 while (e1 e1) e1 = e1.
  std::vector<Rational> c(27);
  auto set = [&](int i, int j, int k) { c[(i * 3 + j) * 3 + k] = 1; };
  for (int i = 0; i < 3; ++i) {
    set(0, i, i);
    set(i, 0, i);
  }
  set(1, 1, 2);
  set(2, 1, 1);
  const auto v = validate(Algebra({"1", "a", "b"}, c, unit_vector(3, 0)));
  bool found = false;
  for (const auto& x : v) found = found || x.law == "associativity";
  EXPECT_TRUE(found);
}

TEST(Algebra, RejectsEmptyAndMalformed) {
  EXPECT_THROW(Algebra({}, {}, {}), domain_error);
  EXPECT_THROW(Algebra({"1"}, {Rational(1), Rational(0)}, unit_vector(1, 0)), dimension_mismatch);
}

TEST(Presets, Dimensions) {
  EXPECT_EQ(truncated_free(2, 2).dim(), 7u);
  EXPECT_EQ(truncated_poly(2, 2).dim(), 6u);
  EXPECT_EQ(truncated_free(2, 3).dim(), 15u);
  const Algebra m2 = matrix_algebra(2);
  EXPECT_EQ(m2.dim(), 4u);
  EXPECT_FALSE(m2.is_commutative());
  EXPECT_EQ(truncated_poly(2, 2).labels(), (std::vector<std::string>{"1", "X", "Y", "X^2", "X*Y", "Y^2"}));
  EXPECT_THROW(preset("truncated_poly", {3, 2}), domain_error);
  EXPECT_THROW(preset("octonions", {}), domain_error);
  EXPECT_THROW(preset("matrix_algebra", {}), domain_error);
}

TEST(Presets, MatchIndependentTables) {
  const std::pair<Algebra, oracle::Alg> cases[] = {
      {truncated_poly(1, 3), oracle::poly1(3)},
      {truncated_poly(2, 2), oracle::poly2(2)},
      {truncated_free(2, 2), oracle::free_alg(2, 2)},
      {matrix_algebra(2), oracle::matrix_units(2, false)},
      {upper_triangular(2), oracle::matrix_units(2, true)},
  };
  for (const auto& [a, o] : cases) {
    ASSERT_EQ(a.dim(), o.d);
    for (std::size_t i = 0; i < o.d; ++i)
      for (std::size_t j = 0; j < o.d; ++j)
        for (std::size_t k = 0; k < o.d; ++k)
          EXPECT_EQ(a.constant(i, j, k).get_str(), o.table[i][j][k].str());
  }
}

TEST(MultOperators, Examples) {
  const Algebra dual = dual_numbers();
  EXPECT_EQ(left_mult(dual, dual.unit()).matrix, Matrix::identity(2));
  const Matrix lx = left_mult(dual, dual.basis_vector(1)).matrix;
  EXPECT_EQ(lx, Matrix::from_rows({Vector{0, 0}, Vector{1, 0}}, 2));  // 1 -> X, X -> 0

  // Upper triangular 2x2 with basis (E11, E12, E22).
  const Algebra ut = upper_triangular(2);
  const Matrix l11 = left_mult(ut, ut.basis_vector(0)).matrix;
  EXPECT_EQ(l11.apply(ut.basis_vector(0)), ut.basis_vector(0));
  EXPECT_EQ(l11.apply(ut.basis_vector(1)), ut.basis_vector(1));
  EXPECT_TRUE(is_zero(l11.apply(ut.basis_vector(2))));

  EXPECT_THROW(left_mult(dual, Vector{1, 2, 3}), dimension_mismatch);
}

TEST(MultOperators, SpansHaveFullDimension) {
  for (const auto& a : unital_presets()) {
    const auto spans = mult_op_spans(a);
    EXPECT_EQ(spans.left.dim(), a.dim());
    EXPECT_EQ(spans.right.dim(), a.dim());
    EXPECT_EQ(a.is_commutative(), spans.left == spans.right);
  }
}

TEST(MultOperators, MatrixAlgebraSandwichIsEverything) {
  const Algebra m2 = matrix_algebra(2);
  const auto spans = mult_op_spans(m2);
  EXPECT_EQ(product_span(spans.left, spans.right).dim(), 16u);
}

TEST(MultOperators, ProductLawsOnRandomElements) {
  std::mt19937_64 rng(7);
  for (const auto& a : unital_presets()) {
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = random_element(rng, a.dim()), y = random_element(rng, a.dim());
      const Vector xy = a.multiply(x, y);
      EXPECT_EQ(a.left_matrix(xy), a.left_matrix(x) * a.left_matrix(y));
      EXPECT_EQ(a.right_matrix(xy), a.right_matrix(y) * a.right_matrix(x));
      EXPECT_EQ(a.left_matrix(x) * a.right_matrix(y), a.right_matrix(y) * a.left_matrix(x));
    }
  }
}

TEST(TensorSquare, MultiplicationMap) {
  const Algebra dual = dual_numbers();
  const TensorSquare ts = tensor_square(dual);
  EXPECT_EQ(ts.mult_map.apply(tensor(dual.unit(), dual.unit())), dual.unit());
  const Vector x = dual.basis_vector(1);
  EXPECT_TRUE(is_zero(ts.mult_map.apply(tensor(x, x))));
  for (const auto& a : unital_presets()) {
    if (a.dim() > 7) continue;
    EXPECT_EQ(kernel(tensor_square(a).mult_map).dim(), a.dim() * a.dim() - a.dim());
  }
}

TEST(TensorSquare, Commutativity) {
  EXPECT_TRUE(tensor_square(truncated_poly(1, 3)).algebra.is_commutative());
  EXPECT_FALSE(tensor_square(truncated_free(2, 2)).algebra.is_commutative());
  EXPECT_TRUE(validate(tensor_square(upper_triangular(2)).algebra).empty());
}

TEST(Derivations, DualNumbers) {
  // Derivations of k[X]/(X^2): 1 -> 0, X -> cX.
  const Subspace ders = derivations(dual_numbers());
  ASSERT_EQ(ders.dim(), 1u);
  EXPECT_TRUE(is_derivation(dual_numbers(), Matrix::from_rows({Vector{0, 0}, Vector{0, 1}}, 2)));
  EXPECT_FALSE(is_derivation(dual_numbers(), Matrix::identity(2)));
}

TEST(IntegerMode, PresetsStayIntegral) {
  const Algebra z = truncated_poly(1, 3, Scalars::Z);
  EXPECT_EQ(z.scalars(), Scalars::Z);
  EXPECT_TRUE(validate(z).empty());
  std::vector<Rational> c(1, Rational(1, 2));
  const auto v = validate(Algebra({"1"}, c, Vector{Rational(1)}, Scalars::Z));
  bool integrality = false;
  for (const auto& x : v) integrality = integrality || x.law == "integrality";
  EXPECT_TRUE(integrality);
}
