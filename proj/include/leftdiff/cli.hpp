#pragma once

// Command dispatch behind the leftdiff_cli binary. `run` builds a Report;
// `emit` serializes it; `execute` maps errors to exit codes.

#include "leftdiff/algebra.hpp"
#include "leftdiff/filtration.hpp"
#include "leftdiff/free_nc.hpp"
#include "leftdiff/poly_diffops.hpp"
#include "leftdiff/principal_parts.hpp"
#include "leftdiff/spec_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace leftdiff::cli {

inline constexpr std::uint64_t default_seed = 20240917;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"validate", "filtration", "order",   "ad-test", "principal-parts", "compare",
                                              "multiplicative", "poly", "free", "hs-check", "report"};
  return names;
}

struct Options {
  std::string command;
  std::string spec;  // path or inline JSON
  std::optional<std::string> mode;
  std::optional<std::size_t> nmax;
  std::uint64_t seed = default_seed;
  std::string format = "table";
  bool timing = false;

  std::optional<std::size_t> rmax;  // multiplicative
  std::string op;                   // order, ad-test: JSON matrix
  std::optional<std::size_t> n;     // ad-test, principal-parts

  std::string expr;  // poly
  std::string apply_to;
  std::string ad_with;
  std::string compose_with;
  int vars = 2;
  std::string scalars = "Q";

  std::size_t gens = 2;  // free, hs-check
  std::size_t degree = 3;
  std::size_t r = 1;
  std::size_t samples = 100;
  std::string z = "y";
  std::string images = "y,0";
  std::size_t hs_length = 2;
};

struct Report {
  Json json;
  std::vector<std::string> summary;  // table mode, printed above the rows
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int exit_code = 0;
};

namespace detail {

inline Json options_json(const Options& o) {
  Json j;
  j["command"] = o.command;
  if (!o.spec.empty()) j["spec_source"] = o.spec;
  if (o.mode) j["mode"] = *o.mode;
  if (o.nmax) j["nmax"] = *o.nmax;
  if (o.rmax) j["rmax"] = *o.rmax;
  if (!o.op.empty()) j["op"] = o.op;
  if (o.n) j["n"] = *o.n;
  if (o.command == "poly") {
    j["expr"] = o.expr;
    if (!o.apply_to.empty()) j["apply"] = o.apply_to;
    if (!o.ad_with.empty()) j["ad"] = o.ad_with;
    if (!o.compose_with.empty()) j["compose"] = o.compose_with;
    j["vars"] = o.vars;
    j["scalars"] = o.scalars;
  }
  if (o.command == "free") {
    j["gens"] = o.gens;
    j["degree"] = o.degree;
    j["r"] = o.r;
    j["samples"] = o.samples;
    j["z"] = o.z;
  }
  if (o.command == "hs-check") {
    j["gens"] = o.gens;
    j["degree"] = o.degree;
    j["images"] = o.images;
    j["hs_length"] = o.hs_length;
  }
  return j;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline AlgebraSpec load(const Options& o) {
  if (o.spec.empty()) throw parse_error("--spec is required for '" + o.command + "'");
  return parse_spec(o.spec);
}

inline void require_valid(const AlgebraSpec& s) {
  if (s.violations.empty()) return;
  std::string msg = "the algebra violates " + std::to_string(s.violations.size()) + " law instance(s):";
  for (const auto& v : s.violations) {
    msg += "\n  " + v.law + " (";
    for (std::size_t i = 0; i < v.indices.size(); ++i) msg += (i ? "," : "") + std::to_string(v.indices[i]);
    msg += ")";
  }
  throw domain_error(msg);
}

inline FiltrationMode resolve_mode(const Options& o, const Algebra& a) {
  if (!o.mode) return a.is_commutative() ? FiltrationMode::commutative : FiltrationMode::noncommutative;
  if (*o.mode == "comm") return FiltrationMode::commutative;
  if (*o.mode == "nc") return FiltrationMode::noncommutative;
  throw parse_error("--mode must be 'comm' or 'nc', got '" + *o.mode + "'");
}

inline std::size_t resolve_nmax(const Options& o, const Algebra& a) { return o.nmax.value_or(default_n_max(a)); }

template <class Level>
Json level_json(const Level& level, std::size_t d) {
  Json out;
  out["dim"] = level_ops<Level>::dim(level);
  Json basis = Json::array();
  for (const auto& v : level_ops<Level>::generators(level)) basis.push_back(to_json(Matrix::unflatten(v, d)));
  out["basis"] = basis;
  return out;
}

template <class Level>
Json filtration_json(const BasicFiltration<Level>& f) {
  const std::size_t d = f.algebra->dim();
  Json out;
  out["mode"] = to_string(f.mode);
  out["n_max"] = f.n_max;
  out["stabilized_at"] = f.stabilized_at ? Json(*f.stabilized_at) : Json(nullptr);
  out["dims"] = level_dims(f.levels);
  if (f.mode == FiltrationMode::noncommutative) out["primed_dims"] = level_dims(f.primed_levels);
  Json levels = Json::array();
  for (std::size_t n = 0; n < f.levels.size(); ++n) {
    Json l = level_json(f.levels[n], d);
    l = Json{{"n", n}, {"dim", l["dim"]}, {"basis", l["basis"]}};
    if (f.mode == FiltrationMode::noncommutative) l["primed"] = level_json(f.primed_levels[n], d);
    levels.push_back(std::move(l));
  }
  out["levels"] = levels;
  return out;
}

template <class Level>
void filtration_rows(const BasicFiltration<Level>& f, Report& rep) {
  rep.header = {"level", "dim"};
  if (f.mode == FiltrationMode::noncommutative) rep.header.push_back("primed_dim");
  for (std::size_t n = 0; n < f.levels.size(); ++n) {
    std::vector<std::string> row{std::to_string(n), std::to_string(level_ops<Level>::dim(f.levels[n]))};
    if (f.mode == FiltrationMode::noncommutative)
      row.push_back(std::to_string(level_ops<Level>::dim(f.primed_levels[n])));
    rep.rows.push_back(std::move(row));
  }
  rep.summary.push_back("mode: " + to_string(f.mode) + ", n_max: " + std::to_string(f.n_max));
  rep.summary.push_back(f.stabilized_at ? "stabilized at level " + std::to_string(*f.stabilized_at)
                                        : "not stabilized within n_max");
}

template <class Level>
BasicFiltration<Level> build_filtration(const Algebra& a, FiltrationMode mode, std::size_t n_max) {
  return mode == FiltrationMode::commutative ? commutative_filtration<Level>(a, n_max)
                                             : noncommutative_filtration<Level>(a, n_max);
}

inline void summarize_algebra(const AlgebraSpec& s, Report& rep) {
  rep.json["spec"] = s.resolved;
  rep.json["algebra"] = algebra_summary(s.algebra);
  rep.summary.push_back("algebra: dim " + std::to_string(s.algebra.dim()) + ", " +
                        (s.algebra.is_commutative() ? "commutative" : "non-commutative") + ", scalars " +
                        std::string(to_string(s.algebra.scalars())));
}

inline Matrix parse_op(const Options& o, const Algebra& a) {
  if (o.op.empty()) throw parse_error("--op is required for '" + o.command + "' (a JSON matrix)");
  Json j;
  try {
    j = Json::parse(o.op);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("--op: malformed JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  Matrix m = matrix_from_json(j);
  if (m.rows() != a.dim() || m.cols() != a.dim())
    throw dimension_mismatch("--op must be a " + std::to_string(a.dim()) + "x" + std::to_string(a.dim()) + " matrix");
  return m;
}

// ---------------------------------------------------------------------------

inline void cmd_validate(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  summarize_algebra(s, rep);
  Json vs = Json::array();
  rep.header = {"law", "indices", "detail"};
  for (const auto& v : s.violations) {
    vs.push_back({{"law", v.law}, {"indices", v.indices}, {"detail", v.detail}});
    std::string idx;
    for (std::size_t i = 0; i < v.indices.size(); ++i) idx += (i ? " " : "") + std::to_string(v.indices[i]);
    rep.rows.push_back({v.law, idx, v.detail});
  }
  rep.json["result"] = {{"valid", s.violations.empty()}, {"violations", vs}};
  rep.summary.push_back(s.violations.empty() ? "valid" : std::to_string(s.violations.size()) + " violation(s)");
  rep.exit_code = s.violations.empty() ? 0 : 1;
}

inline void cmd_filtration(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  require_valid(s);
  summarize_algebra(s, rep);
  const FiltrationMode mode = resolve_mode(o, s.algebra);
  const std::size_t nmax = resolve_nmax(o, s.algebra);
  if (s.algebra.scalars() == Scalars::Z) {
    const auto f = build_filtration<IntegerLattice>(s.algebra, mode, nmax);
    rep.json["result"] = filtration_json(f);
    filtration_rows(f, rep);
  } else {
    const auto f = build_filtration<Subspace>(s.algebra, mode, nmax);
    rep.json["result"] = filtration_json(f);
    filtration_rows(f, rep);
  }
}

inline void cmd_order(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  require_valid(s);
  summarize_algebra(s, rep);
  const Matrix op = parse_op(o, s.algebra);
  const FiltrationMode mode = resolve_mode(o, s.algebra);
  const std::size_t nmax = resolve_nmax(o, s.algebra);
  std::optional<std::size_t> ord;
  if (s.algebra.scalars() == Scalars::Z)
    ord = operator_order(build_filtration<IntegerLattice>(s.algebra, mode, nmax), op);
  else
    ord = operator_order(build_filtration<Subspace>(s.algebra, mode, nmax), op);
  rep.json["result"] = {{"mode", to_string(mode)},
                        {"n_max", nmax},
                        {"order", ord ? Json(*ord) : Json(nullptr)},
                        {"exceeds_n_max", !ord.has_value()}};
  rep.header = {"mode", "n_max", "order"};
  rep.rows.push_back({to_string(mode), std::to_string(nmax), ord ? std::to_string(*ord) : "> n_max"});
}

inline void cmd_ad_test(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  require_valid(s);
  summarize_algebra(s, rep);
  const Matrix op = parse_op(o, s.algebra);
  const std::size_t n = o.n.value_or(1);
  const bool vanishes = iterated_ad_test(s.algebra, op, n);
  rep.json["result"] = {{"n", n}, {"vanishes", vanishes}};
  rep.header = {"n", "iterated_commutator_vanishes"};
  rep.rows.push_back({std::to_string(n), yes_no(vanishes)});
  rep.exit_code = vanishes ? 0 : 1;
}

inline void cmd_principal_parts(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  require_valid(s);
  summarize_algebra(s, rep);
  const Algebra& a = s.algebra;
  const std::size_t n = o.n.value_or(1);
  const PrincipalParts pp = build_principal_parts(a, n);
  const std::size_t j_dim = mult_kernel(a).dim();
  const bool axioms = left_module_axioms_hold(pp);
  const InducedOperators ind = induced_operators_report(a, n);
  const Filtration f = commutative_filtration(a, n);
  const bool agrees = ind.operators == f.levels[n];
  Json r;
  r["n"] = n;
  r["tensor_dim"] = a.dim() * a.dim();
  r["kernel_dim"] = j_dim;
  r["ideal_power_dim"] = pp.ideal.dim();
  r["quotient_dim"] = pp.quotient_dim;
  r["left_module_axioms"] = axioms;
  r["hom_dim"] = ind.hom_dim;
  r["induced_dim"] = ind.operators.dim();
  r["hom_to_operator_injective"] = ind.injective;
  r["equals_filtration_level"] = agrees;
  r["j_n"] = to_json(pp.j_n);
  r["induced_basis"] = basis_json(ind.operators);
  rep.json["result"] = r;
  rep.header = {"quantity", "value"};
  rep.rows = {{"n", std::to_string(n)},
              {"dim J", std::to_string(j_dim)},
              {"dim J^(n+1)", std::to_string(pp.ideal.dim())},
              {"dim P^n", std::to_string(pp.quotient_dim)},
              {"left module axioms", yes_no(axioms)},
              {"dim Hom_A(P^n, A)", std::to_string(ind.hom_dim)},
              {"dim induced operators", std::to_string(ind.operators.dim())},
              {"hom -> operator injective", yes_no(ind.injective)},
              {"equals recursion level n", yes_no(agrees)}};
  rep.exit_code = axioms && agrees ? 0 : 1;
}

inline void cmd_compare(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  require_valid(s);
  summarize_algebra(s, rep);
  const Algebra& a = s.algebra;
  const std::size_t nmax = resolve_nmax(o, a);
  const Filtration nc = noncommutative_filtration(a, nmax);
  Json levels = Json::array();
  bool all = true;
  if (a.is_commutative()) {
    const Filtration rec = commutative_filtration(a, nmax);
    rep.header = {"level", "recursion", "iterated_ad", "principal_parts", "sandwich", "agree"};
    for (std::size_t n = 0; n <= nmax; ++n) {
      const Subspace iad = iterated_ad_kernel(a, n);
      const Subspace pp = induced_operators(a, n);
      const bool agree = rec.levels[n] == iad && rec.levels[n] == pp && rec.levels[n] == nc.levels[n];
      all = all && agree;
      levels.push_back({{"n", n},
                        {"recursion", rec.levels[n].dim()},
                        {"iterated_ad", iad.dim()},
                        {"principal_parts", pp.dim()},
                        {"sandwich", nc.levels[n].dim()},
                        {"recursion_eq_iterated_ad", rec.levels[n] == iad},
                        {"recursion_eq_principal_parts", rec.levels[n] == pp},
                        {"recursion_eq_sandwich", rec.levels[n] == nc.levels[n]},
                        {"iterated_ad_eq_principal_parts", iad == pp},
                        {"agree", agree}});
      rep.rows.push_back({std::to_string(n), std::to_string(rec.levels[n].dim()), std::to_string(iad.dim()),
                          std::to_string(pp.dim()), std::to_string(nc.levels[n].dim()), yes_no(agree)});
    }
    rep.json["result"] = {{"definitions", {"recursion", "iterated_ad", "principal_parts", "sandwich"}},
                          {"n_max", nmax},
                          {"all_agree", all},
                          {"levels", levels}};
    rep.summary.push_back(all ? "all definitions agree at every level" : "definitions disagree");
  } else {
    rep.header = {"level", "sandwich"};
    for (std::size_t n = 0; n <= nmax; ++n) {
      levels.push_back({{"n", n}, {"sandwich", nc.levels[n].dim()}});
      rep.rows.push_back({std::to_string(n), std::to_string(nc.levels[n].dim())});
    }
    rep.json["result"] = {{"definitions", {"sandwich"}}, {"n_max", nmax}, {"all_agree", true}, {"levels", levels}};
    rep.summary.push_back("non-commutative algebra: only the sandwich definition applies");
  }
  rep.exit_code = all ? 0 : 1;
}

template <class Level>
void multiplicative_into(const Algebra& a, FiltrationMode mode, std::size_t nmax, std::size_t rmax, Report& rep) {
  const auto f = build_filtration<Level>(a, mode, nmax);
  Json checks = Json::array();
  bool all = true;
  rep.header = {"r", "s", "contained"};
  for (std::size_t r = 0; r <= rmax; ++r)
    for (std::size_t s = 0; r + s <= rmax; ++s) {
      const auto c = check_multiplicative(f, r, s);
      all = all && c.holds;
      Json j{{"r", r}, {"s", s}, {"holds", c.holds}};
      if (c.witness) j["witness"] = to_json(*c.witness);
      checks.push_back(std::move(j));
      rep.rows.push_back({std::to_string(r), std::to_string(s), yes_no(c.holds)});
    }
  Json result{{"mode", to_string(mode)}, {"n_max", nmax}, {"rmax", rmax}, {"all_hold", all}, {"checks", checks}};
  if (mode == FiltrationMode::noncommutative) {
    const bool primed_is_right = f.primed_levels[0] == right_mult_level<Level>(a);
    const bool stable = left_stable(f);
    result["primed_zero_equals_right_multiplications"] = primed_is_right;
    result["left_stable"] = stable;
    rep.summary.push_back("D'_0 = R_A: " + yes_no(primed_is_right) + ", left-stable: " + yes_no(stable));
    all = all && primed_is_right;
  }
  rep.json["result"] = result;
  rep.summary.push_back(all ? "D_r D_s is contained in D_(r+s) for all r + s <= " + std::to_string(rmax)
                            : "multiplicativity fails");
  rep.exit_code = all ? 0 : 1;
}

inline void cmd_multiplicative(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  require_valid(s);
  summarize_algebra(s, rep);
  const FiltrationMode mode = resolve_mode(o, s.algebra);
  const std::size_t rmax = o.rmax.value_or(o.nmax.value_or(std::min<std::size_t>(4, default_n_max(s.algebra))));
  const std::size_t nmax = o.nmax.value_or(rmax);
  if (rmax > nmax) throw domain_error("--rmax exceeds --nmax");
  if (s.algebra.scalars() == Scalars::Z)
    multiplicative_into<IntegerLattice>(s.algebra, mode, nmax, rmax, rep);
  else
    multiplicative_into<Subspace>(s.algebra, mode, nmax, rmax, rep);
}

inline void cmd_poly(const Options& o, Report& rep) {
  if (o.expr.empty()) throw parse_error("--expr is required for 'poly'");
  Scalars scalars;
  if (o.scalars == "Q")
    scalars = Scalars::Q;
  else if (o.scalars == "Z")
    scalars = Scalars::Z;
  else
    throw parse_error("--scalars must be Q or Z");
  const DPOp d = parse_operator(o.expr, o.vars, scalars);
  Json r;
  r["normal_form"] = format(d);
  r["order"] = order(d);
  rep.header = {"quantity", "value"};
  rep.rows.push_back({"normal form", format(d)});
  rep.rows.push_back({"order", std::to_string(order(d))});
  if (scalars == Scalars::Z) {
    r["naive"] = is_naive(d);
    rep.rows.push_back({"naive", yes_no(is_naive(d))});
  } else {
    Json naive = Json::array();
    for (const auto& [e, f] : naive_coefficients(d))
      naive.push_back({{"i", e.first}, {"j", e.second}, {"coefficient", format(f)}});
    r["naive_coefficients"] = naive;
  }
  if (!o.apply_to.empty()) {
    const Poly p = parse_poly(o.apply_to, o.vars, scalars);
    r["apply"] = {{"argument", format(p)}, {"value", format(apply(d, p))}};
    rep.rows.push_back({"D(" + format(p) + ")", format(apply(d, p))});
  }
  if (!o.ad_with.empty()) {
    const Poly f = parse_poly(o.ad_with, o.vars, scalars);
    const DPOp c = ad_mult(d, f);
    r["ad"] = {{"argument", format(f)}, {"value", format(c)}, {"order", order(c)}};
    rep.rows.push_back({"[D, " + format(f) + "]", format(c)});
  }
  if (!o.compose_with.empty()) {
    const DPOp e = parse_operator(o.compose_with, o.vars, scalars);
    const DPOp c = compose(d, e);
    r["compose"] = {{"argument", format(e)}, {"value", format(c)}, {"order", order(c)}};
    rep.rows.push_back({"D o E", format(c)});
  }
  rep.json["result"] = r;
}

inline Json witness_json(const MultimorphismWitness& w) {
  return {{"n", w.n}, {"a", w.a}, {"b", w.b}, {"lhs", w.lhs}, {"rhs", w.rhs}};
}

inline Json multimorphism_json(const MultimorphismReport& m) {
  Json shapes = Json::array();
  for (const auto& s : m.shapes) {
    Json j{{"n", s.n},
           {"holds", s.holds},
           {"exhaustive", s.exhaustive},
           {"basis_tuples", s.basis_tuples},
           {"samples", s.samples}};
    if (s.witness) j["witness"] = witness_json(*s.witness);
    shapes.push_back(std::move(j));
  }
  Json out{{"holds", m.holds}, {"seed", m.seed}, {"shapes", shapes}};
  if (m.witness) out["witness"] = witness_json(*m.witness);
  return out;
}

inline void cmd_free(const Options& o, Report& rep) {
  if (o.gens < 1 || o.gens > 3) throw domain_error("--gens must be between 1 and 3");
  if (o.degree > 4) throw domain_error("--degree must be at most 4");
  const auto names = leftdiff::detail::generator_names(o.gens);
  rep.header = {"check", "result"};

  const CodiagonalReport codiag = codiagonal_kernel_check(names, o.degree);
  Json slices = Json::array();
  for (const auto& s : codiag.slices)
    slices.push_back(
        {{"degree", s.degree}, {"words", s.words}, {"kernel_dim", s.kernel_dim}, {"ideal_dim", s.ideal_dim}});
  rep.rows.push_back({"codiagonal kernel = ideal(x' - x)", yes_no(codiag.holds)});

  // Uniqueness of the codiagonal as the morphism fixing both copies.
  const FreeProduct prod = free_product(names, names, o.degree);
  const FreeAlgebraPtr base = make_free_algebra(names, o.degree);
  std::vector<FreeElement> id;
  for (std::size_t i = 0; i < names.size(); ++i) id.push_back(FreeElement::word(base, {i}));
  const auto psi = universal_map(prod, id, id, FreeTarget{base});
  const MorphismCheck morph = check_morphism(psi);
  rep.rows.push_back({"codiagonal determined word by word", yes_no(morph.holds())});

  // Substitution map on k<x; y>.
  const FreeAlgebraPtr b = make_free_algebra({"x", "y"}, o.degree);
  const FreeElement z = parse_free_element(b, o.z);
  const LinearMap phi = multimorphism_example11(o.r, b, {0}, b, {{1, z}});
  const MultimorphismReport mm = check_multimorphism(phi, {0}, o.samples, o.seed);
  for (const auto& s : mm.shapes)
    rep.rows.push_back({"substitution map, n = " + std::to_string(s.n), yes_no(s.holds)});

  // A map that is not a multimorphism must be caught.
  const LinearMap broken = swap_words_map(b, {0}, {0, 0});
  const MultimorphismReport bad = check_multimorphism(broken, {0}, o.samples, o.seed);
  rep.rows.push_back({"swap(x, x*x) rejected", yes_no(!bad.holds)});

  rep.json["result"] = {{"codiagonal", {{"holds", codiag.holds}, {"alphabet", codiag.alphabet}, {"slices", slices}}},
                        {"universal_map", {{"holds", morph.holds()},
                                           {"generators_agree", morph.generators_agree},
                                           {"multiplicative", morph.multiplicative},
                                           {"descends", morph.descends},
                                           {"splits_checked", morph.splits_checked}}},
                        {"substitution_map", {{"r", o.r}, {"z", z.to_string()}, {"check", multimorphism_json(mm)}}},
                        {"broken_map", {{"rejected", !bad.holds}, {"check", multimorphism_json(bad)}}}};
  if (mm.witness)
    rep.summary.push_back("substitution map witness (n = " + std::to_string(mm.witness->n) + "): phi(...) = " +
                          mm.witness->lhs + " but the right side is " + mm.witness->rhs);
  rep.exit_code = codiag.holds && morph.holds() && mm.holds && !bad.holds ? 0 : 1;
}

inline void cmd_hs_check(const Options& o, Report& rep) {
  if (o.gens < 1 || o.gens > 3) throw domain_error("--gens must be between 1 and 3");
  if (o.degree > 4) throw domain_error("--degree must be at most 4");
  const auto names = leftdiff::detail::generator_names(o.gens);
  const FreeAlgebraPtr a = make_free_algebra(names, o.degree);
  std::vector<FreeElement> images;
  {
    std::stringstream ss(o.images);
    std::string part;
    while (std::getline(ss, part, ',')) images.push_back(parse_free_element(a, part));
  }
  if (images.size() != names.size())
    throw parse_error("--images needs " + std::to_string(names.size()) + " comma-separated generator images");
  const LinearMap d = derivation_from_generators(a, images);
  const HSSequence seq = hs_from_derivation(d, o.hs_length);
  const HSCheck hs = hs_check(seq);

  const Algebra alg = to_algebra(*a);
  const std::size_t nmax = std::min(o.hs_length, o.nmax.value_or(o.hs_length));
  const Filtration f = noncommutative_filtration(alg, nmax);
  Json terms = Json::array();
  bool contained = true;
  rep.header = {"n", "in_D_n", "order"};
  for (std::size_t n = 0; n <= nmax; ++n) {
    const Matrix m = seq.maps[n].matrix();
    const bool in = contains(f.levels[n], m.flatten());
    const auto ord = operator_order(f, m);
    contained = contained && in;
    terms.push_back({{"n", n}, {"in_level", in}, {"order", ord ? Json(*ord) : Json(nullptr)}});
    rep.rows.push_back({std::to_string(n), yes_no(in), ord ? std::to_string(*ord) : "> n_max"});
  }
  Json images_json = Json::array();
  for (const auto& im : images) images_json.push_back(im.to_string());
  rep.json["result"] = {{"alphabet", names},
                        {"degree", o.degree},
                        {"images", images_json},
                        {"hs_identity", {{"holds", hs.holds},
                                         {"identities_checked", hs.identities_checked},
                                         {"witness", hs.witness}}},
                        {"filtration_dims", level_dims(f)},
                        {"containment", terms},
                        {"all_contained", contained}};
  rep.summary.push_back("Leibniz convolution identity: " + yes_no(hs.holds) + " (" +
                        std::to_string(hs.identities_checked) + " instances)");
  rep.exit_code = hs.holds && contained ? 0 : 1;
}

inline void cmd_report(const Options& o, Report& rep) {
  const AlgebraSpec s = load(o);
  summarize_algebra(s, rep);
  Json r;
  Json vs = Json::array();
  for (const auto& v : s.violations) vs.push_back({{"law", v.law}, {"indices", v.indices}, {"detail", v.detail}});
  r["validate"] = {{"valid", s.violations.empty()}, {"violations", vs}};
  if (!s.violations.empty()) {
    rep.json["result"] = r;
    rep.summary.push_back("invalid algebra, nothing else computed");
    rep.exit_code = 1;
    return;
  }
  Report part;
  cmd_filtration(o, part);
  r["filtration"] = part.json["result"];
  rep.header = part.header;
  rep.rows = part.rows;
  for (std::size_t i = 1; i < part.summary.size(); ++i) rep.summary.push_back(part.summary[i]);
  bool ok = true;
  if (s.algebra.is_commutative() && s.algebra.scalars() == Scalars::Q) {
    Report cmp;
    cmd_compare(o, cmp);
    r["compare"] = cmp.json["result"];
    ok = ok && cmp.exit_code == 0;
    rep.summary.push_back("definitions agree: " + yes_no(cmp.exit_code == 0));
  }
  Report mul;
  Options mo = o;
  const std::size_t nmax = resolve_nmax(o, s.algebra);
  mo.nmax = nmax;
  mo.rmax = std::min<std::size_t>(nmax, 4);
  cmd_multiplicative(mo, mul);
  r["multiplicative"] = mul.json["result"];
  ok = ok && mul.exit_code == 0;
  rep.summary.push_back("multiplicative up to r + s = " + std::to_string(*mo.rmax) + ": " +
                        yes_no(mul.exit_code == 0));
  rep.json["result"] = r;
  rep.exit_code = ok ? 0 : 1;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace detail

/// Runs one command; engine errors propagate as exceptions.
inline Report run(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.json["command"] = o.command;
  rep.json["options"] = detail::options_json(o);
  rep.json["seed"] = o.seed;
  if (o.command == "validate")
    detail::cmd_validate(o, rep);
  else if (o.command == "filtration")
    detail::cmd_filtration(o, rep);
  else if (o.command == "order")
    detail::cmd_order(o, rep);
  else if (o.command == "ad-test")
    detail::cmd_ad_test(o, rep);
  else if (o.command == "principal-parts")
    detail::cmd_principal_parts(o, rep);
  else if (o.command == "compare")
    detail::cmd_compare(o, rep);
  else if (o.command == "multiplicative")
    detail::cmd_multiplicative(o, rep);
  else if (o.command == "poly")
    detail::cmd_poly(o, rep);
  else if (o.command == "free")
    detail::cmd_free(o, rep);
  else if (o.command == "hs-check")
    detail::cmd_hs_check(o, rep);
  else if (o.command == "report")
    detail::cmd_report(o, rep);
  else
    throw parse_error("unknown command '" + o.command + "'");
  rep.json["ok"] = rep.exit_code == 0;
  if (o.timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rep.json["timing_ms"] = ms;
  }
  return rep;
}

inline std::string emit(const Report& rep, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    out << rep.json.dump(2) << "\n";
  } else if (format == "csv") {
    for (std::size_t i = 0; i < rep.header.size(); ++i) out << (i ? "," : "") << detail::csv_escape(rep.header[i]);
    out << "\n";
    for (const auto& row : rep.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::csv_escape(row[i]);
      out << "\n";
    }
  } else if (format == "table") {
    for (const auto& line : rep.summary) out << line << "\n";
    std::vector<std::size_t> width(rep.header.size(), 0);
    auto measure = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
    };
    measure(rep.header);
    for (const auto& row : rep.rows) measure(row);
    auto print = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
        out << (i ? "  " : "") << row[i];
        if (i + 1 < row.size()) out << std::string(width[i] - row[i].size(), ' ');
      }
      out << "\n";
    };
    if (!rep.header.empty()) {
      if (!rep.summary.empty()) out << "\n";
      print(rep.header);
      for (const auto& row : rep.rows) print(row);
    }
    out << (rep.exit_code == 0 ? "status: ok" : "status: check failed") << "\n";
  } else {
    throw parse_error("--format must be table, json or csv");
  }
  return out.str();
}

/// run + emit with exit codes: 0 ok, 1 failed check, 2 usage or input error.
inline int execute(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const Report rep = run(o);
    out << emit(rep, o.format);
    return rep.exit_code;
  } catch (const error& e) {
    err << "leftdiff " << o.command << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace leftdiff::cli
