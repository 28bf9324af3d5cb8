#pragma once

// Divided-power differential operators on k[X] and k[X,Y].
//
// An operator is stored in normal form sum f_{i,j} tX^i tY^j: polynomial
// coefficients on the left, divided powers tX^i = (i!)^{-1} dX^i on the
// right. tX^i sends X^m to C(m,i) X^(m-i). The divided powers are a Z-basis
// of the full operator algebra on Z[X,Y], so Z-mode never needs
// denominators, and membership in the naive algebra (Z-span of f dX^i dY^j)
// is the divisibility of every coefficient of f_{i,j} by i! j!.

#include "leftdiff/scalar.hpp"

#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace leftdiff {

/// Exponent pair (power of X, power of Y).
using Exponent = std::pair<unsigned, unsigned>;

namespace detail {
inline void check_vars(int vars) {
  if (vars != 1 && vars != 2) throw domain_error("polynomial rings in 1 or 2 variables only");
}

// Descending total degree, then descending X-exponent.
struct DisplayOrder {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const unsigned da = a.first + a.second, db = b.first + b.second;
    if (da != db) return da > db;
    return a.first > b.first;
  }
};
}  // namespace detail

class Poly {
public:
  using Terms = std::map<Exponent, Rational, detail::DisplayOrder>;

  explicit Poly(int vars = 1, Scalars scalars = Scalars::Q) : vars_(vars), scalars_(scalars) {
    detail::check_vars(vars);
  }

  static Poly constant(const Rational& c, int vars = 1, Scalars scalars = Scalars::Q) {
    Poly p(vars, scalars);
    p.add_term({0, 0}, c);
    return p;
  }

  static Poly monomial(unsigned a, unsigned b, const Rational& c = 1, int vars = 1, Scalars scalars = Scalars::Q) {
    Poly p(vars, scalars);
    p.add_term({a, b}, c);
    return p;
  }

  int vars() const noexcept { return vars_; }
  Scalars scalars() const noexcept { return scalars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e.first + e.second));
    return d;
  }

  Rational coefficient(Exponent e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(Exponent e, const Rational& c) {
    if (sgn(c) == 0) return;
    if (vars_ == 1 && e.second != 0) throw domain_error("Y does not occur in a one-variable ring");
    if (scalars_ == Scalars::Z && !is_integral(c))
      throw domain_error("non-integer coefficient " + to_string(c) + " in Z-mode");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    require_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.require_compatible(b);
    Poly out(a.vars_, a.scalars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add_term({ea.first + eb.first, ea.second + eb.second}, ca * cb);
    return out;
  }

  friend Poly operator*(const Rational& c, const Poly& p) {
    Poly out(p.vars_, p.scalars_);
    for (const auto& [e, x] : p.terms_) out.add_term(e, c * x);
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.vars_ == b.vars_ && a.scalars_ == b.scalars_ && a.terms_ == b.terms_;
  }

  void require_compatible(const Poly& o) const {
    if (vars_ != o.vars_ || scalars_ != o.scalars_)
      throw domain_error("polynomials over different rings (variables or scalar mode differ)");
  }

private:
  int vars_;
  Scalars scalars_;
  Terms terms_;
};

/// tX^i tY^j applied to a polynomial.
inline Poly theta_apply(const Poly& f, unsigned i, unsigned j) {
  Poly out(f.vars(), f.scalars());
  for (const auto& [e, c] : f.terms()) {
    if (e.first < i || e.second < j) continue;
    const Integer weight = binomial(e.first, i) * binomial(e.second, j);
    out.add_term({e.first - i, e.second - j}, c * Rational(weight));
  }
  return out;
}

class DPOp {
public:
  using Terms = std::map<Exponent, Poly, detail::DisplayOrder>;

  explicit DPOp(int vars = 1, Scalars scalars = Scalars::Q) : vars_(vars), scalars_(scalars) {
    detail::check_vars(vars);
  }

  /// Multiplication by f.
  static DPOp multiplication(const Poly& f) {
    DPOp d(f.vars(), f.scalars());
    d.add_term({0, 0}, f);
    return d;
  }

  /// The divided power tX^i tY^j.
  static DPOp theta(unsigned i, unsigned j, int vars = 1, Scalars scalars = Scalars::Q) {
    DPOp d(vars, scalars);
    d.add_term({i, j}, Poly::constant(1, vars, scalars));
    return d;
  }

  /// The ordinary derivative dX^i dY^j = i! j! tX^i tY^j.
  static DPOp partial(unsigned i, unsigned j, int vars = 1, Scalars scalars = Scalars::Q) {
    DPOp d(vars, scalars);
    d.add_term({i, j}, Poly::constant(Rational(factorial(i) * factorial(j)), vars, scalars));
    return d;
  }

  int vars() const noexcept { return vars_; }
  Scalars scalars() const noexcept { return scalars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Poly coefficient(Exponent e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Poly(vars_, scalars_) : it->second;
  }

  void add_term(Exponent e, const Poly& f) {
    f.require_compatible(Poly(vars_, scalars_));
    if (f.is_zero()) return;
    if (vars_ == 1 && e.second != 0) throw domain_error("tY does not occur in a one-variable ring");
    auto [it, inserted] = terms_.try_emplace(e, f);
    if (!inserted) {
      it->second += f;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  DPOp& operator+=(const DPOp& o) {
    require_compatible(o);
    for (const auto& [e, f] : o.terms_) add_term(e, f);
    return *this;
  }

  DPOp& operator-=(const DPOp& o) {
    require_compatible(o);
    for (const auto& [e, f] : o.terms_) add_term(e, Rational(-1) * f);
    return *this;
  }

  friend DPOp operator+(DPOp a, const DPOp& b) { return a += b; }
  friend DPOp operator-(DPOp a, const DPOp& b) { return a -= b; }

  friend DPOp operator*(const Rational& c, const DPOp& d) {
    DPOp out(d.vars_, d.scalars_);
    for (const auto& [e, f] : d.terms_) out.add_term(e, c * f);
    return out;
  }

  friend bool operator==(const DPOp& a, const DPOp& b) {
    return a.vars_ == b.vars_ && a.scalars_ == b.scalars_ && a.terms_ == b.terms_;
  }

  void require_compatible(const DPOp& o) const {
    if (vars_ != o.vars_ || scalars_ != o.scalars_)
      throw domain_error("operators over different rings (variables or scalar mode differ)");
  }

private:
  int vars_;
  Scalars scalars_;
  Terms terms_;
};

inline Poly apply(const DPOp& d, const Poly& p) {
  if (d.vars() != p.vars() || d.scalars() != p.scalars())
    throw domain_error("apply: operator and polynomial live over different rings");
  Poly out(p.vars(), p.scalars());
  for (const auto& [e, f] : d.terms()) out += f * theta_apply(p, e.first, e.second);
  return out;
}

/// Normal form of d1 o d2, using
///   t^a o l_g = sum_s l_{t^s(g)} t^(a-s)   and   t^a t^b = C(a+b, a) t^(a+b)
/// in each variable.
inline DPOp compose(const DPOp& d1, const DPOp& d2) {
  d1.require_compatible(d2);
  DPOp out(d1.vars(), d1.scalars());
  for (const auto& [a, f] : d1.terms())
    for (const auto& [b, g] : d2.terms())
      for (unsigned sx = 0; sx <= a.first; ++sx)
        for (unsigned sy = 0; sy <= a.second; ++sy) {
          const Poly shifted = theta_apply(g, sx, sy);
          if (shifted.is_zero()) continue;
          const unsigned rx = a.first - sx, ry = a.second - sy;
          const Integer weight = binomial(rx + b.first, rx) * binomial(ry + b.second, ry);
          out.add_term({rx + b.first, ry + b.second}, Rational(weight) * (f * shifted));
        }
  return out;
}

/// d o l_f - l_f o d.
inline DPOp ad_mult(const DPOp& d, const Poly& f) {
  const DPOp lf = DPOp::multiplication(f);
  return compose(d, lf) - compose(lf, d);
}

/// Largest i + j with f_{i,j} != 0; -1 for the zero operator.
inline int order(const DPOp& d) {
  int best = -1;
  for (const auto& [e, f] : d.terms()) best = std::max(best, static_cast<int>(e.first + e.second));
  return best;
}

/// Z-mode only: whether d is in the Z-span of f dX^i dY^j.
inline bool is_naive(const DPOp& d) {
  if (d.scalars() != Scalars::Z)
    throw domain_error("is_naive is only meaningful in Z-mode; over Q every operator is naive");
  for (const auto& [e, f] : d.terms()) {
    const Integer weight = factorial(e.first) * factorial(e.second);
    for (const auto& [m, c] : f.terms())
      if (!mpz_divisible_p(c.get_num_mpz_t(), weight.get_mpz_t())) return false;
  }
  return true;
}

/// Coefficients g_{i,j} with d = sum g_{i,j} dX^i dY^j (Q-mode).
inline std::map<Exponent, Poly> naive_coefficients(const DPOp& d) {
  if (d.scalars() != Scalars::Q) throw domain_error("naive_coefficients needs Q-mode");
  std::map<Exponent, Poly> out;
  for (const auto& [e, f] : d.terms())
    out.emplace(e, Rational(1) / Rational(factorial(e.first) * factorial(e.second)) * f);
  return out;
}

// ---------------------------------------------------------------------------
// Text syntax: (X^2+1)*tX^2*tY + 3*tX, with dX^i = i! tX^i.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_monomial(Exponent e) {
  std::string out;
  auto put = [&](const char* v, unsigned k) {
    if (k == 0) return;
    if (!out.empty()) out += "*";
    out += v;
    if (k > 1) out += "^" + std::to_string(k);
  };
  put("X", e.first);
  put("Y", e.second);
  return out;
}

inline std::string format_theta(Exponent e) {
  std::string out;
  auto put = [&](const char* v, unsigned k) {
    if (k == 0) return;
    if (!out.empty()) out += "*";
    out += v;
    if (k > 1) out += "^" + std::to_string(k);
  };
  put("tX", e.first);
  put("tY", e.second);
  return out;
}

// A single signed term "c*m*suffix"; suffix may be empty.
inline std::string format_scaled(const Rational& c, Exponent m, const std::string& suffix) {
  std::string body = format_monomial(m);
  if (!suffix.empty()) body = body.empty() ? suffix : body + "*" + suffix;
  if (body.empty()) return to_string(c);
  if (c == 1) return body;
  if (c == -1) return "-" + body;
  return to_string(c) + "*" + body;
}

inline std::string join_signed(const std::vector<std::string>& parts, const char* plus, const char* minus) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (i == 0) {
      out += p;
    } else if (!p.empty() && p[0] == '-') {
      out += minus + p.substr(1);
    } else {
      out += plus + p;
    }
  }
  return out;
}

}  // namespace detail

inline std::string format(const Poly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::string> parts;
  for (const auto& [e, c] : p.terms()) parts.push_back(detail::format_scaled(c, e, ""));
  return detail::join_signed(parts, "+", "-");
}

inline std::string format(const DPOp& d) {
  if (d.is_zero()) return "0";
  std::vector<std::string> parts;
  for (const auto& [e, f] : d.terms()) {
    const std::string theta = detail::format_theta(e);
    if (theta.empty()) {
      for (const auto& [m, c] : f.terms()) parts.push_back(detail::format_scaled(c, m, ""));
    } else if (f.terms().size() == 1) {
      const auto& [m, c] = *f.terms().begin();
      parts.push_back(detail::format_scaled(c, m, theta));
    } else {
      parts.push_back("(" + format(f) + ")*" + theta);
    }
  }
  return detail::join_signed(parts, " + ", " - ");
}

namespace detail {

class OperatorParser {
public:
  OperatorParser(std::string_view text, int vars, Scalars scalars) : text_(text), vars_(vars), scalars_(scalars) {}

  DPOp parse() {
    DPOp d = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return d;
  }

private:
  DPOp expression() {
    DPOp total = term();
    for (;;) {
      skip_space();
      if (peek('+')) {
        ++pos_;
        total += term();
      } else if (peek('-')) {
        ++pos_;
        total -= term();
      } else {
        return total;
      }
    }
  }

  DPOp term() {
    skip_space();
    bool negate = false;
    while (peek('-') || peek('+')) {
      negate ^= text_[pos_] == '-';
      ++pos_;
      skip_space();
    }
    DPOp product = factor();
    for (;;) {
      skip_space();
      if (!peek('*')) break;
      ++pos_;
      product = compose(product, factor());
    }
    return negate ? Rational(-1) * product : product;
  }

  DPOp factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      DPOp inner = expression();
      skip_space();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return power(inner);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return power(DPOp::multiplication(number()));
    if (c == 't' || c == 'd') {
      ++pos_;
      const unsigned var = variable();
      const unsigned k = exponent_or_one();
      const Exponent e = var == 0 ? Exponent{k, 0} : Exponent{0, k};
      return c == 't' ? DPOp::theta(e.first, e.second, vars_, scalars_)
                      : DPOp::partial(e.first, e.second, vars_, scalars_);
    }
    if (c == 'X' || c == 'Y') {
      const unsigned var = variable();
      const unsigned k = exponent_or_one();
      const Exponent e = var == 0 ? Exponent{k, 0} : Exponent{0, k};
      return DPOp::multiplication(Poly::monomial(e.first, e.second, 1, vars_, scalars_));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  // `^k` on a composite factor is the k-fold composition.
  DPOp power(const DPOp& base) {
    skip_space();
    if (!peek('^')) return base;
    ++pos_;
    const unsigned k = integer();
    DPOp out = DPOp::multiplication(Poly::constant(1, vars_, scalars_));
    for (unsigned i = 0; i < k; ++i) out = compose(out, base);
    return out;
  }

  Poly number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string literal(text_.substr(start, pos_ - start));
    if (peek('/')) {
      ++pos_;
      const std::size_t den_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (den_start == pos_) fail("expected denominator");
      literal += "/" + std::string(text_.substr(den_start, pos_ - den_start));
    }
    Rational q;
    try {
      q = parse_rational(literal);
    } catch (const parse_error& e) {
      fail(e.what());
    }
    if (scalars_ == Scalars::Z && !is_integral(q)) fail("non-integer constant " + literal + " in Z-mode");
    return Poly::constant(q, vars_, scalars_);
  }

  unsigned variable() {
    if (peek('X')) {
      ++pos_;
      return 0;
    }
    if (peek('Y')) {
      if (vars_ == 1) fail("Y is not a variable of the one-variable ring");
      ++pos_;
      return 1;
    }
    fail("expected X or Y");
  }

  unsigned exponent_or_one() {
    skip_space();
    if (!peek('^')) return 1;
    ++pos_;
    return integer();
  }

  unsigned integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer");
    const std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 6) fail("exponent too large");
    return static_cast<unsigned>(std::stoul(digits));
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { throw parse_error(what, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
  int vars_;
  Scalars scalars_;
};

}  // namespace detail

/// Parses the operator syntax; `*` is composition, `tX^i` a divided power,
/// `dX^i` the ordinary derivative i! tX^i.
inline DPOp parse_operator(std::string_view text, int vars = 2, Scalars scalars = Scalars::Q) {
  detail::check_vars(vars);
  return detail::OperatorParser(text, vars, scalars).parse();
}

/// Parses a polynomial (an operator of order <= 0).
inline Poly parse_poly(std::string_view text, int vars = 2, Scalars scalars = Scalars::Q) {
  const DPOp d = parse_operator(text, vars, scalars);
  if (order(d) > 0) throw parse_error("expected a polynomial, got an operator of order " + std::to_string(order(d)));
  return d.coefficient({0, 0});
}

}  // namespace leftdiff
