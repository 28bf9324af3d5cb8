#include "leftdiff/poly_diffops.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace leftdiff;

namespace {

Poly X(unsigned k = 1, int vars = 2, Scalars s = Scalars::Q) { return Poly::monomial(k, 0, 1, vars, s); }
Poly Y(unsigned k = 1, int vars = 2, Scalars s = Scalars::Q) { return Poly::monomial(0, k, 1, vars, s); }

Rational falling(unsigned m, unsigned i) {
  Rational r = 1;
  for (unsigned k = 0; k < i; ++k) r *= static_cast<long>(m - k);
  return r;
}

// Ordinary partial derivatives by the power rule, applied to the naive
// coefficients; shares nothing with the divided-power rewriting.
Poly naive_apply(const DPOp& d, const Poly& p) {
  Poly out(p.vars(), p.scalars());
  for (const auto& [e, g] : naive_coefficients(d)) {
    Poly deriv(p.vars(), p.scalars());
    for (const auto& [m, c] : p.terms()) {
      if (m.first < e.first || m.second < e.second) continue;
      deriv.add_term({m.first - e.first, m.second - e.second}, c * falling(m.first, e.first) * falling(m.second, e.second));
    }
    out += g * deriv;
  }
  return out;
}

struct Gen {
  std::mt19937_64 rng;
  int vars;

  Poly poly(unsigned max_degree) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<unsigned> terms(0, 4), deg(0, max_degree);
    Poly p(vars);
    for (unsigned t = terms(rng); t > 0; --t) {
      const unsigned total = deg(rng);
      const unsigned a = vars == 1 ? total : std::uniform_int_distribution<unsigned>(0, total)(rng);
      p.add_term({a, total - a}, coeff(rng));
    }
    return p;
  }

  DPOp op(unsigned max_order, unsigned max_degree) {
    std::uniform_int_distribution<unsigned> ord(0, max_order), terms(1, 3);
    DPOp d(vars);
    for (unsigned t = terms(rng); t > 0; --t) {
      const unsigned total = ord(rng);
      const unsigned i = vars == 1 ? total : std::uniform_int_distribution<unsigned>(0, total)(rng);
      d.add_term({i, total - i}, poly(max_degree));
    }
    return d;
  }
};

}  // namespace

TEST(Theta, Examples) {
  EXPECT_EQ(theta_apply(X(3, 1), 2, 0), Rational(3) * X(1, 1));
  EXPECT_EQ(theta_apply(X() * Y(), 1, 1), Poly::constant(1, 2));
  EXPECT_TRUE(theta_apply(X(1, 1), 2, 0).is_zero());
  EXPECT_EQ(apply(DPOp::partial(2, 0, 1), X(3, 1)), Rational(6) * X(1, 1));
}

TEST(Compose, RewriteRules) {
  const DPOp t1 = DPOp::theta(1, 0, 1);
  EXPECT_EQ(compose(t1, t1), Rational(2) * DPOp::theta(2, 0, 1));
  // tX o X = X tX + 1
  const DPOp lx = DPOp::multiplication(X(1, 1));
  EXPECT_EQ(compose(t1, lx), compose(lx, t1) + DPOp::multiplication(Poly::constant(1, 1)));
  EXPECT_EQ(format(compose(t1, lx)), "X*tX + 1");
}

TEST(Compose, CommutatorWithMultiplication) {
  const DPOp t1 = DPOp::theta(1, 0, 1);
  EXPECT_EQ(ad_mult(t1, X(2, 1)), DPOp::multiplication(Rational(2) * X(1, 1)));
  for (unsigned i = 1; i <= 6; ++i) EXPECT_EQ(ad_mult(DPOp::theta(i, 0, 1), X(1, 1)), DPOp::theta(i - 1, 0, 1));
}

TEST(Order, Examples) {
  EXPECT_EQ(order(DPOp(2)), -1);
  EXPECT_EQ(order(DPOp::multiplication(X())), 0);
  EXPECT_EQ(order(DPOp::theta(2, 1, 2)), 3);
}

TEST(Naive, DividedPowersOverIntegers) {
  const Scalars Z = Scalars::Z;
  const DPOp t2 = DPOp::theta(2, 0, 2, Z);
  EXPECT_FALSE(is_naive(t2));
  EXPECT_TRUE(is_naive(DPOp::partial(2, 0, 2, Z)));
  EXPECT_TRUE(is_naive(Rational(6) * DPOp::theta(2, 1, 2, Z)));
  EXPECT_FALSE(is_naive(Rational(3) * DPOp::theta(2, 1, 2, Z)));
  EXPECT_THROW(is_naive(DPOp::theta(2, 0, 2)), domain_error);
}

// tX^2 maps Z[X] into itself: X^m -> C(m,2) X^(m-2) has integral coefficients.
TEST(Naive, ThetaSquaredIsIntegralButNotNaive) {
  const Scalars Z = Scalars::Z;
  const DPOp t2 = DPOp::theta(2, 0, 1, Z);
  for (unsigned m = 0; m <= 10; ++m) {
    const Poly image = apply(t2, Poly::monomial(m, 0, 1, 1, Z));
    for (const auto& [e, c] : image.terms()) EXPECT_TRUE(is_integral(c));
  }
  EXPECT_FALSE(is_naive(t2));
}

TEST(Naive, EveryRationalOperatorIsNaive) {
  Gen g{std::mt19937_64(17), 2};
  for (int trial = 0; trial < 50; ++trial) {
    const DPOp d = g.op(4, 3);
    DPOp rebuilt(2);
    for (const auto& [e, f] : naive_coefficients(d)) rebuilt += compose(DPOp::multiplication(f), DPOp::partial(e.first, e.second, 2));
    EXPECT_EQ(rebuilt, d);
  }
}

TEST(OneVariableExpansion, MatchesBinomialFormula) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (unsigned m = 0; m <= 10; ++m)
    for (int trial = 0; trial < 5; ++trial) {
      DPOp d(1, Scalars::Z);
      std::vector<long> f(m + 3);
      for (auto& c : f) {
        c = coeff(rng);
      }
      for (unsigned i = 0; i < f.size(); ++i) d.add_term({i, 0}, Poly::constant(f[i], 1, Scalars::Z));
      Poly expected(1, Scalars::Z);
      for (unsigned i = 0; i <= m; ++i) expected.add_term({m - i, 0}, Rational(f[i]) * Rational(binomial(m, i)));
      EXPECT_EQ(apply(d, Poly::monomial(m, 0, 1, 1, Scalars::Z)), expected) << "m=" << m;
    }
}

TEST(Format, Examples) {
  const DPOp d = parse_operator("6*tX^3 + (X^2+1)*tX^2*tY + 3*tX");
  EXPECT_EQ(format(d), "6*tX^3 + (X^2+1)*tX^2*tY + 3*tX");
  EXPECT_EQ(format(parse_operator("dX^2")), "2*tX^2");
  EXPECT_EQ(format(parse_operator("tX*X")), "X*tX + 1");
  EXPECT_EQ(format(parse_operator("(tX)^2")), "2*tX^2");
  EXPECT_EQ(format(parse_operator("1/2*X - Y")), "1/2*X - Y");
  EXPECT_EQ(format(DPOp(2)), "0");
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_operator("tX +"), parse_error);
  EXPECT_THROW(parse_operator("tZ"), parse_error);
  EXPECT_THROW(parse_operator("(X"), parse_error);
  EXPECT_THROW(parse_operator("Y", 1), parse_error);
  EXPECT_THROW(parse_operator("1/2*X", 2, Scalars::Z), parse_error);
  EXPECT_THROW(parse_poly("tX"), parse_error);
  try {
    parse_operator("X + $");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
  }
}

TEST(Parse, RoundTripsFormattedOperators) {
  Gen g{std::mt19937_64(29), 2};
  for (int trial = 0; trial < 100; ++trial) {
    const DPOp d = g.op(4, 4);
    EXPECT_EQ(parse_operator(format(d)), d) << format(d);
  }
}

// ---------------------------------------------------------------------------
// 200 seeded operator pairs, polynomial degree <= 10.
// ---------------------------------------------------------------------------

TEST(Coherence, ActionMatchesNormalForm) {
  Gen g{std::mt19937_64(20240917), 2};
  for (int trial = 0; trial < 200; ++trial) {
    const DPOp a = g.op(3, 3), b = g.op(3, 3);
    const Poly p = g.poly(10);
    EXPECT_EQ(apply(compose(a, b), p), apply(a, apply(b, p)));
    EXPECT_EQ(apply(a, p), naive_apply(a, p));
  }
}

TEST(Coherence, OrderIsSubadditive) {
  Gen g{std::mt19937_64(31), 2};
  for (int trial = 0; trial < 200; ++trial) {
    const DPOp a = g.op(4, 3), b = g.op(4, 3);
    const DPOp c = compose(a, b);
    if (a.is_zero() || b.is_zero()) {
      EXPECT_TRUE(c.is_zero());
      continue;
    }
    EXPECT_LE(order(c), order(a) + order(b));
  }
}

TEST(Coherence, CommutatorLowersOrder) {
  Gen g{std::mt19937_64(37), 2};
  for (int trial = 0; trial < 200; ++trial) {
    const DPOp a = g.op(4, 3);
    const Poly f = g.poly(10);
    const DPOp c = ad_mult(a, f);
    if (order(a) <= 0)
      EXPECT_TRUE(c.is_zero());
    else
      EXPECT_LE(order(c), order(a) - 1);
  }
}

TEST(Coherence, IteratedCommutatorsAnnihilate) {
  Gen g{std::mt19937_64(41), 2};
  for (int trial = 0; trial < 100; ++trial) {
    DPOp d = g.op(3, 2);
    const int n = order(d);
    for (int k = 0; k <= n; ++k) d = ad_mult(d, g.poly(3) + X());
    EXPECT_TRUE(d.is_zero());
  }
}

TEST(IntegerMode, CompositionStaysIntegral) {
  const Scalars Z = Scalars::Z;
  const DPOp d = compose(DPOp::theta(3, 1, 2, Z), DPOp::multiplication(Poly::monomial(4, 2, 5, 2, Z)));
  for (const auto& [e, f] : d.terms())
    for (const auto& [m, c] : f.terms()) EXPECT_TRUE(is_integral(c));
  EXPECT_THROW(Poly::monomial(1, 0, make_rational(1, 2), 2, Z), domain_error);
  EXPECT_THROW(naive_coefficients(d), domain_error);
}
