#pragma once

// Exact scalars shared by every module: arbitrary-precision rationals and
// integers (GMP), the scalar-mode tag, and a few combinatorial helpers.

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leftdiff {

using Rational = mpq_class;
using Integer = mpz_class;

/// Base ring of an object: the rationals or the integers.
enum class Scalars { Q, Z };

inline std::string_view to_string(Scalars s) { return s == Scalars::Q ? "Q" : "Z"; }

/// Root of the library's exception hierarchy.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class dimension_mismatch : public error {
public:
  using error::error;
};

/// The operation is not defined for this input (wrong mode, non-commutative
/// algebra where commutativity is required, non-integral data in Z-mode...).
class domain_error : public error {
public:
  using error::error;
};

/// Malformed textual or JSON input. `position` is a byte offset when known.
class parse_error : public error {
public:
  parse_error(const std::string& what, std::size_t position = npos)
      : error(position == npos ? what : what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

/// "n" for integers, "n/d" otherwise; the canonical textual form used in reports.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "n" or "n/d" (optional sign on the numerator).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw parse_error("empty rational literal");
  const auto slash = s.find('/');
  auto valid_int = [](const std::string& part) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den)) throw parse_error("malformed rational literal '" + s + "'");
  Integer n(num), d(den);
  if (d == 0) throw parse_error("zero denominator in '" + s + "'");
  return make_rational(n, d);
}

inline Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline Integer factorial(long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

}  // namespace leftdiff
