// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "leftdiff/leftdiff.hpp"

#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace leftdiff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<Algebra> commutative_corpus() {
  return {truncated_poly(1, 0), dual_numbers(),       truncated_poly(1, 2),
          truncated_poly(1, 3), truncated_poly(1, 4), truncated_poly(2, 2)};
}

std::string dims_string(const std::vector<std::size_t>& ds) {
  std::string s;
  for (auto d : ds) s += (s.empty() ? "" : " ") + std::to_string(d);
  return s;
}

Outcome three_way_equivalence() {
  Outcome o;
  std::size_t levels = 0;
  for (const Algebra& a : commutative_corpus()) {
    const std::size_t nmax = a.dim() + 1;
    const Filtration rec = commutative_filtration(a, nmax);
    for (std::size_t n = 0; n <= nmax; ++n, ++levels) {
      if (rec.levels[n] == iterated_ad_kernel(a, n) && rec.levels[n] == induced_operators(a, n)) continue;
      o.pass = false;
      o.detail = "mismatch at dim " + std::to_string(a.dim()) + ", n = " + std::to_string(n);
      return o;
    }
  }
  o.detail = std::to_string(levels) + " levels, recursion = iterated commutators = principal parts";
  return o;
}

Outcome commutative_reduction() {
  Outcome o;
  for (const Algebra& a : commutative_corpus()) {
    const std::size_t nmax = a.dim() + 1;
    if (noncommutative_filtration(a, nmax).levels != commutative_filtration(a, nmax).levels) {
      o.pass = false;
      o.detail = "sandwich differs from recursion for dim " + std::to_string(a.dim());
      return o;
    }
  }
  o.detail = "sandwich levels equal the commutative recursion on all 6 algebras";
  return o;
}

Outcome dual_fingerprint() {
  // Golden value from the brute-force oracle in tests/oracle.hpp.
  const std::vector<std::size_t> golden{2, 3, 4};
  const Filtration f = commutative_filtration(dual_numbers(), 3);
  std::vector<std::size_t> got = level_dims(f);
  got.resize(3);
  Outcome o;
  o.pass = got == golden && f.stabilized_at == 2u;
  o.detail = "dims " + dims_string(got) + ", stabilized at " +
             (f.stabilized_at ? std::to_string(*f.stabilized_at) : std::string("none"));
  return o;
}

Outcome multiplicativity() {
  std::vector<Algebra> corpus = commutative_corpus();
  corpus.push_back(matrix_algebra(2));
  corpus.push_back(upper_triangular(2));
  corpus.push_back(truncated_free(2, 2));
  Outcome o;
  std::size_t pairs = 0;
  for (const Algebra& a : corpus) {
    const Filtration f = noncommutative_filtration(a, 4);
    if (!(f.primed_levels[0] == mult_op_spans(a).right)) {
      o.pass = false;
      o.detail = "D'_0 != R_A for dim " + std::to_string(a.dim());
      return o;
    }
    for (std::size_t r = 0; r <= 4; ++r)
      for (std::size_t s = 0; r + s <= 4; ++s, ++pairs)
        if (!check_multiplicative(f, r, s).holds) {
          o.pass = false;
          o.detail = "D_" + std::to_string(r) + " D_" + std::to_string(s) + " not in D_" + std::to_string(r + s) +
                     " for dim " + std::to_string(a.dim());
          return o;
        }
  }
  o.detail = std::to_string(pairs) + " (algebra, r, s) checks and D'_0 = R_A on 9 algebras";
  return o;
}

Outcome hasse_schmidt() {
  const auto a = make_free_algebra({"x", "y"}, 3);
  const LinearMap d = derivation_from_generators(a, {FreeElement::generator(a, "y"), FreeElement::zero(a)});
  const HSSequence seq = hs_from_derivation(d, 2);
  const HSCheck hs = hs_check(seq);
  const Filtration f = noncommutative_filtration(to_algebra(*a), 2);
  Outcome o;
  o.pass = hs.holds;
  for (std::size_t n = 0; n <= 2; ++n) o.pass = o.pass && contains(f.levels[n], seq.maps[n].matrix().flatten());
  o.detail = std::to_string(hs.identities_checked) + " Leibniz identities, d^n/n! in D_n for n <= 2 (dims " +
             dims_string(level_dims(f)) + ")";
  return o;
}

Outcome divided_powers() {
  Outcome o;
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::size_t cases = 0;
  for (unsigned m = 0; m <= 10; ++m)
    for (int t = 0; t < 10; ++t, ++cases) {
      DPOp d(1, Scalars::Z);
      std::vector<Poly> f;
      for (unsigned i = 0; i <= m + 1; ++i) {
        Poly p(1, Scalars::Z);
        for (unsigned k = 0; k <= 2; ++k) p.add_term({k, 0}, coeff(rng));
        d.add_term({i, 0}, p);
        f.push_back(p);
      }
      Poly expected(1, Scalars::Z);
      for (unsigned i = 0; i <= m; ++i)
        expected += f[i] * Poly::monomial(m - i, 0, Rational(binomial(m, i)), 1, Scalars::Z);
      if (!(apply(d, Poly::monomial(m, 0, 1, 1, Scalars::Z)) == expected)) {
        o.pass = false;
        o.detail = "expansion mismatch at m = " + std::to_string(m);
        return o;
      }
    }
  const DPOp t2 = DPOp::theta(2, 0, 2, Scalars::Z);
  bool integral = true;
  for (unsigned m = 0; m <= 10; ++m) {
    const Poly image = apply(t2, Poly::monomial(m, 3, 1, 2, Scalars::Z));
    for (const auto& [e, c] : image.terms()) integral = integral && is_integral(c);
  }
  const bool strictly_larger = integral && !is_naive(t2);

  bool rational_naive = true;
  std::uniform_int_distribution<unsigned> ord(0, 4);
  for (int t = 0; t < 100; ++t) {
    DPOp d(2);
    for (int k = 0; k < 3; ++k) {
      const unsigned total = ord(rng), i = std::uniform_int_distribution<unsigned>(0, total)(rng);
      d.add_term({i, total - i}, Poly::monomial(ord(rng), ord(rng), coeff(rng), 2));
    }
    DPOp rebuilt(2);
    for (const auto& [e, g] : naive_coefficients(d))
      rebuilt += compose(DPOp::multiplication(g), DPOp::partial(e.first, e.second, 2));
    rational_naive = rational_naive && rebuilt == d;
  }
  o.pass = strictly_larger && rational_naive;
  o.detail = std::to_string(cases) + " expansions; tX^2 integral, not naive over Z; " +
             (rational_naive ? "all" : "not all") + " Q operators naive";
  return o;
}

Outcome operator_coherence() {
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<unsigned> small(0, 3), deg(0, 10);
  auto poly = [&](unsigned max_deg) {
    Poly p(2);
    for (unsigned t = small(rng) + 1; t > 0; --t) {
      const unsigned total = std::uniform_int_distribution<unsigned>(0, max_deg)(rng);
      const unsigned a = std::uniform_int_distribution<unsigned>(0, total)(rng);
      p.add_term({a, total - a}, coeff(rng));
    }
    return p;
  };
  auto op = [&] {
    DPOp d(2);
    for (unsigned t = small(rng) + 1; t > 0; --t) {
      const unsigned total = small(rng), i = std::uniform_int_distribution<unsigned>(0, total)(rng);
      d.add_term({i, total - i}, poly(3));
    }
    return d;
  };
  Outcome o;
  for (int t = 0; t < 200; ++t) {
    const DPOp a = op(), b = op();
    const Poly p = poly(10), f = poly(4);
    const DPOp ab = compose(a, b);
    const DPOp c = ad_mult(a, f);
    const bool coherent = apply(ab, p) == apply(a, apply(b, p));
    const bool additive = ab.is_zero() || order(ab) <= order(a) + order(b);
    const bool lowers = order(a) <= 0 ? c.is_zero() : order(c) <= order(a) - 1;
    if (!(coherent && additive && lowers)) {
      o.pass = false;
      o.detail = "pair " + std::to_string(t) + ": " + format(a) + " ; " + format(b);
      return o;
    }
  }
  o.detail = "200 pairs: action coherent, order subadditive, commutators lower order";
  return o;
}

Outcome free_products_and_multimorphisms() {
  Outcome o;
  std::ostringstream detail;
  bool codiag = true;
  for (std::size_t g = 1; g <= 2; ++g) codiag = codiag && codiagonal_kernel_check(leftdiff::detail::generator_names(g), 3).holds;

  const FreeProduct p = free_product({"x"}, {"y"}, 3);
  const auto base = make_free_algebra({"x", "y"}, 3);
  const auto psi = universal_map(p, {FreeElement::generator(base, "x")}, {FreeElement::generator(base, "y")},
                                 FreeTarget{base});
  const bool unique = check_morphism(psi).holds();

  const LinearMap phi = multimorphism_example11(1, base, {0}, base, {{1, FreeElement::generator(base, "y")}});
  const MultimorphismReport mm = check_multimorphism(phi, {0}, 100, 20240917);
  const MultimorphismReport bad = check_multimorphism(swap_words_map(base, {0}, {0, 0}), {0}, 100, 20240917);
  const bool broken_caught = !bad.holds && bad.witness.has_value();

  o.pass = codiag && unique && mm.holds && broken_caught;
  detail << "codiagonal " << (codiag ? "ok" : "FAILED") << ", universal map " << (unique ? "ok" : "FAILED")
         << ", broken map " << (broken_caught ? "rejected" : "NOT rejected") << ", substitution map ";
  if (mm.holds) {
    detail << "passes";
  } else {
    const auto& w = *mm.witness;
    detail << "fails at n = " << w.n << " (b = " << w.b[0] << ", " << (w.b.size() > 1 ? w.b[1] : "") << "; phi(...) = "
           << w.lhs << ", product side = " << w.rhs << ")";
  }
  o.detail = detail.str();
  return o;
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(LEFTDIFF_CLI_PATH) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  return out;
}

Outcome determinism() {
  const std::string spec = R"('{"preset": "truncated_free", "params": [2, 2]}')";
  const std::vector<std::string> runs{"report --spec " + spec + " --format json --seed 42",
                                      "free --format json --seed 42 --samples 50",
                                      "multiplicative --spec " + spec + " --format json --seed 42"};
  Outcome o;
  std::size_t bytes = 0;
  for (const auto& args : runs) {
    const std::string a = run_cli(args), b = run_cli(args);
    bytes += a.size();
    if (a != b || a.empty() || a.front() != '{') {
      o.pass = false;
      o.detail = "outputs differ or are not JSON for: " + args;
      return o;
    }
  }
  o.detail = "3 commands run twice, " + std::to_string(bytes) + " bytes identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"definition equivalence", three_way_equivalence},
      {"commutative reduction", commutative_reduction},
      {"dual-numbers fingerprint", dual_fingerprint},
      {"multiplicativity", multiplicativity},
      {"Hasse-Schmidt containment", hasse_schmidt},
      {"divided-power operators", divided_powers},
      {"operator coherence", operator_coherence},
      {"free product and multimorphism", free_products_and_multimorphisms},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria pass"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
