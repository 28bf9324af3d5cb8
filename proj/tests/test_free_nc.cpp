#include "leftdiff/filtration.hpp"
#include "leftdiff/free_nc.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace leftdiff;

namespace {

FreeElement parse(const FreeAlgebraPtr& a, const std::string& text) { return parse_free_element(a, text); }

// Evaluation morphism as a linear map on the truncated basis.
LinearMap as_linear_map(const UniversalMap<FreeTarget>& psi) {
  std::vector<FreeElement> images;
  for (const auto& w : psi.source()->basis()) images.push_back(psi.evaluate(w));
  return LinearMap(psi.source(), psi.target().algebra, std::move(images));
}

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST(FreeAlgebra, BasisOrder) {
  const auto a = make_free_algebra({"x", "y"}, 2);
  ASSERT_EQ(a->dim(), 7u);
  std::vector<std::string> words;
  for (const auto& w : a->basis()) words.push_back(a->format_word(w));
  EXPECT_EQ(words, (std::vector<std::string>{"1", "x", "y", "x*x", "x*y", "y*x", "y*y"}));
  EXPECT_EQ(make_free_algebra({"x", "y"}, 3)->dim(), 15u);
  EXPECT_THROW(make_free_algebra({"x", "x"}, 2), domain_error);
  EXPECT_THROW(make_free_algebra({"1a"}, 2), domain_error);
  EXPECT_THROW(make_free_algebra({"a", "b", "c", "d"}, 9), domain_error);
}

TEST(FreeElement, Arithmetic) {
  const auto a = make_free_algebra({"x", "y"}, 2);
  const FreeElement x = FreeElement::generator(a, "x"), y = FreeElement::generator(a, "y");
  EXPECT_EQ((x * y).to_string(), "x*y");
  EXPECT_FALSE(x * y == y * x);
  EXPECT_TRUE((x * x * y).is_zero());  // beyond the truncation
  EXPECT_EQ((Rational(2) * y * y - x + x * y).to_string(), "-x + x*y + 2*y*y");
  EXPECT_EQ(FreeElement::zero(a).to_string(), "0");
}

TEST(FreeElement, Parser) {
  const auto a = make_free_algebra({"x", "y", "xy2"}, 3);
  EXPECT_EQ(parse(a, "x y"), parse(a, "x*y"));
  EXPECT_EQ(parse(a, "(x + y)^2"), parse(a, "x*x + x*y + y*x + y*y"));
  EXPECT_EQ(parse(a, "xy2").to_string(), "xy2");  // longest name wins
  EXPECT_EQ(parse(a, "1/2 x - 3").to_string(), "-3 + 1/2*x");
  EXPECT_THROW(parse(a, "x + z"), parse_error);
  EXPECT_THROW(parse(a, "(x"), parse_error);
}

TEST(FreeProduct, RenamesCollidingGenerators) {
  const FreeProduct p = free_product({"x", "y"}, {"x", "w"}, 2);
  EXPECT_EQ(p.algebra->alphabet(), (std::vector<std::string>{"x", "y", "x'", "w"}));
  EXPECT_EQ(p.renamed, (std::vector<std::string>{"x"}));
  EXPECT_EQ(p.embed_second(0).to_string(), "x'");
  EXPECT_EQ(p.embed_first(1).to_string(), "y");
  EXPECT_EQ(free_product({"x"}, {"y"}, 3).algebra->dim(), 15u);
  EXPECT_THROW(free_product({"x", "x'"}, {"x"}, 2), domain_error);
}

TEST(UniversalMap, MatrixUnits) {
  const auto m2 = std::make_shared<const Algebra>(matrix_algebra(2));
  const FreeProduct p = free_product({"x"}, {"y"}, 3);
  const auto psi = universal_map(p, {m2->basis_vector(1)}, {m2->basis_vector(2)}, StructureTarget{m2});
  EXPECT_EQ(psi.apply(parse(p.algebra, "x y")), m2->basis_vector(0));  // E12 E21 = E11
  EXPECT_EQ(psi.apply(parse(p.algebra, "y x")), m2->basis_vector(3));
  EXPECT_TRUE(is_zero(psi.apply(parse(p.algebra, "x x"))));
  const MorphismCheck c = check_morphism(psi);
  EXPECT_TRUE(c.holds());
  EXPECT_FALSE(c.descends);  // x y x y = E11 survives past degree 3
}

TEST(UniversalMap, UniquenessWordByWord) {
  // Augmentation: every generator to 0.
  const FreeProduct p = free_product({"x"}, {"y"}, 3);
  const auto base = make_free_algebra({"x", "y"}, 3);
  const auto eps = universal_map(p, {FreeElement::zero(base)}, {FreeElement::zero(base)}, FreeTarget{base});
  EXPECT_TRUE(check_morphism(eps).holds());
  EXPECT_EQ(eps.apply(parse(p.algebra, "3 + x y")), Rational(3) * FreeElement::one(base));

  // x -> x, y -> y: every split of every basis word is checked.
  const auto id = universal_map(p, {parse(base, "x")}, {parse(base, "y")}, FreeTarget{base});
  const MorphismCheck good = check_morphism(id);
  EXPECT_TRUE(good.holds());
  EXPECT_TRUE(good.descends);
  std::size_t splits = 0;
  for (const auto& w : p.algebra->basis()) splits += w.size() + 1;
  EXPECT_EQ(good.splits_checked, splits);
}

TEST(Codiagonal, KernelIsGeneratedByDifferences) {
  for (std::size_t g = 1; g <= 2; ++g) {
    const auto names = leftdiff::detail::generator_names(g);
    const CodiagonalReport r = codiagonal_kernel_check(names, 3);
    EXPECT_TRUE(r.holds);
    ASSERT_EQ(r.slices.size(), 4u);
    for (const auto& s : r.slices) {
      // In degree k the codiagonal maps (2g)^k words onto g^k words.
      EXPECT_EQ(s.words, power(2 * g, s.degree));
      EXPECT_EQ(s.kernel_dim, power(2 * g, s.degree) - power(g, s.degree));
      EXPECT_EQ(s.ideal_dim, s.kernel_dim);
    }
  }
}

TEST(Substitution, Examples) {
  const auto b = make_free_algebra({"x", "y"}, 4);
  const LinearMap phi = multimorphism_example11(1, b, {0}, b, {{1, parse(b, "y")}});
  EXPECT_EQ(phi.apply(parse(b, "x y x")), parse(b, "x y x"));
  EXPECT_TRUE(phi.apply(parse(b, "x y x y")).is_zero());
  EXPECT_TRUE(phi.apply(parse(b, "x x")).is_zero());
  const LinearMap to_x = multimorphism_example11(1, b, {0}, b, {{1, parse(b, "x")}});
  EXPECT_EQ(to_x.apply(parse(b, "y")), parse(b, "x"));
  EXPECT_EQ(to_x.apply(parse(b, "x y")), parse(b, "x x"));
  const LinearMap two = multimorphism_example11(2, b, {0}, b, {{1, parse(b, "x + y")}});
  EXPECT_EQ(two.apply(parse(b, "y x y")), parse(b, "(x + y) x (x + y)"));
  EXPECT_THROW(multimorphism_example11(1, b, {0}, b, {}), domain_error);
}

// The law with every b in B: n = 1 is bimodule linearity and holds, n = 2
// compares phi(b1 b2) with phi(b1) phi(b2), which the substitution map breaks.
TEST(Substitution, LiteralLawFailsAtTwoFactors) {
  const auto b = make_free_algebra({"x", "y"}, 3);
  const LinearMap phi = multimorphism_example11(1, b, {0}, b, {{1, parse(b, "y")}});
  const MultimorphismReport r = check_multimorphism(phi, {0}, 100, 20240917);
  ASSERT_EQ(r.shapes.size(), 2u);
  EXPECT_TRUE(r.shapes[0].holds);
  EXPECT_TRUE(r.shapes[0].exhaustive);
  EXPECT_FALSE(r.shapes[1].holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->n, 2u);
  EXPECT_NE(r.witness->lhs, r.witness->rhs);
}

TEST(Multimorphism, AlgebraMorphismsPass) {
  const auto b = make_free_algebra({"x", "y"}, 3);
  const FreeProduct p = free_product({"x"}, {"y"}, 3);
  const auto psi = universal_map(p, {parse(b, "x")}, {parse(b, "x - y")}, FreeTarget{b});
  ASSERT_TRUE(check_morphism(psi).holds());
  EXPECT_TRUE(check_multimorphism(as_linear_map(psi), {0}, 100, 11).holds);
  EXPECT_TRUE(check_multimorphism(LinearMap::identity(b), {0}, 100, 11).holds);
}

TEST(Multimorphism, BrokenMapFailsWithWitness) {
  const auto b = make_free_algebra({"x", "y"}, 3);
  const LinearMap broken = swap_words_map(b, {0}, {0, 0});
  const MultimorphismReport r = check_multimorphism(broken, {0}, 100, 11);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->n, 1u);
}

TEST(Multimorphism, SamplingIsDeterministic) {
  const auto b = make_free_algebra({"x", "y"}, 3);
  const LinearMap broken = swap_words_map(b, {1}, {0, 1});
  const auto r1 = check_multimorphism(broken, {0}, 50, 99);
  const auto r2 = check_multimorphism(broken, {0}, 50, 99);
  ASSERT_TRUE(r1.witness && r2.witness);
  EXPECT_EQ(r1.witness->a, r2.witness->a);
  EXPECT_EQ(r1.witness->b, r2.witness->b);
}

TEST(HasseSchmidt, ShiftDerivation) {
  const auto a = make_free_algebra({"x", "y"}, 3);
  const LinearMap d = derivation_from_generators(a, {parse(a, "y"), FreeElement::zero(a)});
  EXPECT_TRUE(is_derivation(d));
  EXPECT_FALSE(is_derivation(swap_words_map(a, {0}, {1})));
  const HSSequence seq = hs_from_derivation(d, 3);
  EXPECT_EQ(seq.maps[1].apply(parse(a, "x y")), parse(a, "y y"));
  EXPECT_EQ(seq.maps[2].apply(parse(a, "x x")), parse(a, "y y"));
  EXPECT_EQ(seq.maps[3].apply(parse(a, "x x x")), parse(a, "y y y"));
  const HSCheck c = hs_check(seq);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.identities_checked, 4u * 15u * 15u);
}

TEST(HasseSchmidt, WrongScalingIsCaught) {
  const auto a = make_free_algebra({"x", "y"}, 3);
  const LinearMap d = derivation_from_generators(a, {parse(a, "y"), FreeElement::zero(a)});
  HSSequence seq = hs_from_derivation(d, 2);
  seq.maps[2] = Rational(2) * seq.maps[2];  // d^2 instead of d^2 / 2
  const HSCheck c = hs_check(seq);
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.failing_n, 2u);
}

TEST(HasseSchmidt, TermsLieInTheFiltration) {
  const auto a = make_free_algebra({"x", "y"}, 3);
  const LinearMap d = derivation_from_generators(a, {parse(a, "y"), FreeElement::zero(a)});
  const HSSequence seq = hs_from_derivation(d, 2);
  const Filtration f = noncommutative_filtration(to_algebra(*a), 2);
  for (std::size_t n = 0; n <= 2; ++n) EXPECT_TRUE(contains(f.levels[n], seq.maps[n].matrix().flatten())) << n;
}

TEST(HasseSchmidt, IntegerModeRefusesDivision) {
  const auto a = make_free_algebra({"x", "y"}, 2);
  const LinearMap d = derivation_from_generators(a, {parse(a, "y"), FreeElement::zero(a)});
  EXPECT_NO_THROW(hs_from_derivation(d, 1, Scalars::Z));
  EXPECT_THROW(hs_from_derivation(d, 2, Scalars::Z), domain_error);
}

TEST(FreeProperty, AssociativeAndMatchesStructureConstants) {
  const auto a = make_free_algebra({"x", "y"}, 3);
  const Algebra table = to_algebra(*a);
  EXPECT_TRUE(validate(table).empty());
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coeff(-2, 2);
  auto random = [&] {
    Vector v(a->dim());
    for (auto& c : v) c = coeff(rng);
    return FreeElement::from_coordinates(a, v);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const FreeElement u = random(), v = random(), w = random();
    EXPECT_EQ((u * v) * w, u * (v * w));
    EXPECT_EQ((u * v).coordinates(), table.multiply(u.coordinates(), v.coordinates()));
  }
}
