#include "leftdiff/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  namespace cli = leftdiff::cli;
  cli::Options o;
  std::string mode;
  std::size_t nmax = 0, rmax = 0, n = 0;

  CLI::App app{"Differential operators on finite-dimensional and polynomial algebras"};
  app.add_option("command", o.command, "validate | filtration | order | ad-test | principal-parts | compare | "
                                       "multiplicative | poly | free | hs-check | report")
      ->required()
      ->check(CLI::IsMember(cli::commands()));
  app.add_option("--spec", o.spec, "Algebra spec: a JSON file path or inline JSON");
  app.add_option("--mode", mode, "Filtration: comm or nc (default: comm for commutative algebras, else nc)")
      ->check(CLI::IsMember({"comm", "nc"}));
  auto* nmax_opt = app.add_option("--nmax", nmax, "Highest level (default: dim + 1)");
  app.add_option("--seed", o.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--format", o.format, "Output: table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_flag("--timing", o.timing, "Add wall-clock timing to the report (breaks byte-identical output)");
  auto* rmax_opt = app.add_option("--rmax", rmax, "multiplicative: check all r + s <= rmax (default: min(4, nmax))");
  app.add_option("--op", o.op, "order, ad-test: operator as a JSON matrix, e.g. [[0,1],[0,0]]");
  auto* n_opt = app.add_option("--n", n, "ad-test, principal-parts: order n (default 1)");
  app.add_option("--expr", o.expr, "poly: operator, e.g. \"(X^2+1)*tX^2*tY + 3*tX\"");
  app.add_option("--apply", o.apply_to, "poly: polynomial to apply the operator to");
  app.add_option("--ad", o.ad_with, "poly: polynomial f for D*f - f*D");
  app.add_option("--compose", o.compose_with, "poly: operator E for D*E");
  app.add_option("--vars", o.vars, "poly: number of variables (1 or 2)")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  app.add_option("--scalars", o.scalars, "poly: Q or Z")->check(CLI::IsMember({"Q", "Z"}))->capture_default_str();
  app.add_option("--gens", o.gens, "free, hs-check: number of generators")->capture_default_str();
  app.add_option("--degree", o.degree, "free, hs-check: truncation degree")->capture_default_str();
  app.add_option("--r", o.r, "free: number of substituted letters")->capture_default_str();
  app.add_option("--samples", o.samples, "free: random tuples per shape")->capture_default_str();
  app.add_option("--z", o.z, "free: image of y under the substitution map")->capture_default_str();
  app.add_option("--images", o.images, "hs-check: comma-separated images of the generators under d")
      ->capture_default_str();
  app.add_option("--hs-length", o.hs_length, "hs-check: N, the last term d^N/N!")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!mode.empty()) o.mode = mode;
  if (*nmax_opt) o.nmax = nmax;
  if (*rmax_opt) o.rmax = rmax;
  if (*n_opt) o.n = n;
  return cli::execute(o, std::cout, std::cerr);
}
