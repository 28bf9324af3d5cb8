// A short tour: filtrations of a few small algebras, a divided-power
// operator over Z, and a Hasse-Schmidt sequence on a free algebra.

#include "leftdiff/leftdiff.hpp"

#include <iostream>

namespace ld = leftdiff;

static void print_dims(const char* name, const ld::Filtration& f) {
  std::cout << name << " [" << ld::to_string(f.mode) << "]:";
  for (auto d : ld::level_dims(f)) std::cout << ' ' << d;
  if (f.stabilized_at) std::cout << "  (stable from " << *f.stabilized_at << ")";
  std::cout << '\n';
}

int main() {
  const auto dual = ld::dual_numbers();
  print_dims("k[X]/(X^2)", ld::commutative_filtration(dual, 3));
  print_dims("k[X,Y]/(deg > 2)", ld::commutative_filtration(ld::truncated_poly(2, 2), 4));
  print_dims("k<x,y>/(len > 2)", ld::noncommutative_filtration(ld::truncated_free(2, 2), 4));
  print_dims("M_2(k)", ld::noncommutative_filtration(ld::matrix_algebra(2), 2));

  // tX^2 sends X^m to C(m,2) X^(m-2): integral, yet not a Z-combination of f d^i.
  const auto theta2 = ld::parse_operator("tX^2", 1, ld::Scalars::Z);
  const auto cube = ld::parse_poly("X^3", 1, ld::Scalars::Z);
  std::cout << ld::format(theta2) << " (" << ld::format(cube) << ") = " << ld::format(ld::apply(theta2, cube))
            << ", naive: " << (ld::is_naive(theta2) ? "yes" : "no") << '\n';
  std::cout << "tX o X = " << ld::format(ld::compose(ld::parse_operator("tX", 1), ld::parse_operator("X", 1)))
            << '\n';

  // d: x -> y, y -> 0 on k<x,y>/(len > 3) and its divided powers.
  const auto free = ld::make_free_algebra({"x", "y"}, 3);
  const auto d = ld::derivation_from_generators(
      free, {ld::FreeElement::generator(free, "y"), ld::FreeElement::zero(free)});
  const auto seq = ld::hs_from_derivation(d, 3);
  const auto xx = ld::parse_free_element(free, "x*x");
  std::cout << "d^2/2 (x*x) = " << seq.maps[2].apply(xx).to_string()
            << ", Leibniz convolution holds: " << (ld::hs_check(seq).holds ? "yes" : "no") << '\n';
}
