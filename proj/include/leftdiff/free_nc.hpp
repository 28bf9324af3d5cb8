#pragma once

// Degree-truncated free associative algebras k<x_1..x_m>/(words longer than D)
// with free products, evaluation morphisms, multimorphism checks and
// Hasse-Schmidt sequences built from derivations.

#include "leftdiff/algebra.hpp"
#include "leftdiff/linalg.hpp"
#include "leftdiff/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace leftdiff {

/// A word is a sequence of letter indices into the alphabet.
using Word = std::vector<std::size_t>;

/// Shorter words first, then lexicographic by letter index.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

class FreeAlgebra {
public:
  static constexpr std::size_t max_basis = 200000;

  FreeAlgebra(std::vector<std::string> alphabet, std::size_t max_degree)
      : alphabet_(std::move(alphabet)), max_degree_(max_degree) {
    std::set<std::string> seen;
    for (const auto& name : alphabet_) {
      if (name.empty()) throw domain_error("empty generator name");
      if (std::isdigit(static_cast<unsigned char>(name[0])))
        throw domain_error("generator name '" + name + "' starts with a digit");
      if (!seen.insert(name).second) throw domain_error("duplicate generator name '" + name + "'");
    }
    std::size_t count = 1, power = 1;
    for (std::size_t len = 1; len <= max_degree_ && !alphabet_.empty(); ++len) {
      power *= alphabet_.size();
      count += power;
      if (count > max_basis) throw domain_error("truncated free algebra too large (more than 200000 words)");
    }
    words_ = detail::words_up_to(alphabet_.size(), max_degree_);
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
  }

  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  const std::vector<Word>& basis() const noexcept { return words_; }
  std::size_t dim() const noexcept { return words_.size(); }

  std::size_t index_of(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw domain_error("word '" + format_word(w) + "' is not in the truncated basis");
    return it->second;
  }

  std::optional<std::size_t> letter(std::string_view name) const {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
      if (alphabet_[i] == name) return i;
    return std::nullopt;
  }

  std::string format_word(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] >= alphabet_.size()) throw domain_error("letter index out of range");
      s += (i ? "*" : "") + alphabet_[w[i]];
    }
    return s;
  }

  friend bool operator==(const FreeAlgebra& a, const FreeAlgebra& b) {
    return a.alphabet_ == b.alphabet_ && a.max_degree_ == b.max_degree_;
  }

private:
  std::vector<std::string> alphabet_;
  std::size_t max_degree_;
  std::vector<Word> words_;
  std::map<Word, std::size_t, WordLess> index_;
};

using FreeAlgebraPtr = std::shared_ptr<const FreeAlgebra>;

inline FreeAlgebraPtr make_free_algebra(std::vector<std::string> alphabet, std::size_t max_degree) {
  return std::make_shared<const FreeAlgebra>(std::move(alphabet), max_degree);
}

class FreeElement {
public:
  using Terms = std::map<Word, Rational, WordLess>;

  explicit FreeElement(FreeAlgebraPtr algebra) : algebra_(std::move(algebra)) {
    if (!algebra_) throw domain_error("free element without an algebra");
  }

  static FreeElement zero(FreeAlgebraPtr a) { return FreeElement(std::move(a)); }

  static FreeElement one(FreeAlgebraPtr a) { return word(std::move(a), {}); }

  static FreeElement word(FreeAlgebraPtr a, const Word& w, const Rational& c = 1) {
    FreeElement e(std::move(a));
    e.add_term(w, c);
    return e;
  }

  static FreeElement generator(FreeAlgebraPtr a, std::string_view name) {
    auto idx = a->letter(name);
    if (!idx) throw domain_error("unknown generator '" + std::string(name) + "'");
    return word(std::move(a), {*idx});
  }

  static FreeElement from_coordinates(FreeAlgebraPtr a, const Vector& coords) {
    detail::check_length(coords, a->dim(), "free element coordinates");
    FreeElement e(a);
    for (std::size_t i = 0; i < coords.size(); ++i) e.add_term(a->basis()[i], coords[i]);
    return e;
  }

  const FreeAlgebraPtr& algebra() const noexcept { return algebra_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Rational coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Adds c*w; words beyond the truncation degree vanish.
  void add_term(const Word& w, const Rational& c) {
    if (sgn(c) == 0 || w.size() > algebra_->max_degree()) return;
    for (auto letter : w)
      if (letter >= algebra_->alphabet().size()) throw domain_error("letter index out of range");
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  Vector coordinates() const {
    Vector v(algebra_->dim());
    for (const auto& [w, c] : terms_) v[algebra_->index_of(w)] = c;
    return v;
  }

  void require_same_algebra(const FreeElement& o) const {
    if (algebra_ != o.algebra_ && !(*algebra_ == *o.algebra_))
      throw domain_error("free elements over different alphabets or truncation degrees");
  }

  FreeElement& operator+=(const FreeElement& o) {
    require_same_algebra(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }

  FreeElement& operator-=(const FreeElement& o) {
    require_same_algebra(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }

  friend FreeElement operator+(FreeElement a, const FreeElement& b) { return a += b; }
  friend FreeElement operator-(FreeElement a, const FreeElement& b) { return a -= b; }

  friend FreeElement operator*(const Rational& c, const FreeElement& e) {
    FreeElement out(e.algebra_);
    for (const auto& [w, x] : e.terms_) out.add_term(w, c * x);
    return out;
  }

  /// Concatenation followed by truncation.
  friend FreeElement operator*(const FreeElement& a, const FreeElement& b) {
    a.require_same_algebra(b);
    FreeElement out(a.algebra_);
    const std::size_t limit = a.algebra_->max_degree();
    for (const auto& [u, cu] : a.terms_)
      for (const auto& [v, cv] : b.terms_) {
        if (u.size() + v.size() > limit) continue;
        Word w = u;
        w.insert(w.end(), v.begin(), v.end());
        out.add_term(w, cu * cv);
      }
    return out;
  }

  friend bool operator==(const FreeElement& a, const FreeElement& b) {
    return *a.algebra_ == *b.algebra_ && a.terms_ == b.terms_;
  }

  /// Terms by (length, lex), e.g. "2*x*y - 1/2*y".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      const bool negative = sgn(c) < 0;
      const Rational mag = negative ? Rational(-c) : c;
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      if (w.empty()) {
        out += leftdiff::to_string(mag);
      } else if (mag == 1) {
        out += algebra_->format_word(w);
      } else {
        out += leftdiff::to_string(mag) + "*" + algebra_->format_word(w);
      }
    }
    return out;
  }

private:
  FreeAlgebraPtr algebra_;
  Terms terms_;
};

namespace detail {

class FreeParser {
public:
  FreeParser(FreeAlgebraPtr algebra, std::string_view text) : algebra_(std::move(algebra)), text_(text) {}

  FreeElement parse() {
    FreeElement e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  FreeElement expression() {
    FreeElement total = term();
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

  FreeElement term() {
    skip_space();
    bool negate = false;
    while (peek('-') || peek('+')) {
      negate ^= text_[pos_] == '-';
      ++pos_;
      skip_space();
    }
    FreeElement product = factor();
    for (;;) {
      skip_space();
      if (peek('*')) {
        ++pos_;
        product = product * factor();
      } else if (starts_factor()) {
        product = product * factor();  // juxtaposition
      } else {
        break;
      }
    }
    return negate ? Rational(-1) * product : product;
  }

  bool starts_factor() const {
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return c == '(' || std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  FreeElement factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    FreeElement base(algebra_);
    if (c == '(') {
      ++pos_;
      base = expression();
      skip_space();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      base = number();
    } else {
      base = letter();
    }
    skip_space();
    if (!peek('^')) return base;
    ++pos_;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 4) fail("expected a small non-negative exponent");
    const auto k = std::stoul(std::string(text_.substr(start, pos_ - start)));
    FreeElement out = FreeElement::one(algebra_);
    for (unsigned long i = 0; i < k && !out.is_zero(); ++i) out = out * base;
    return out;
  }

  FreeElement number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (peek('/')) {
      ++pos_;
      const std::size_t den = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (den == pos_) fail("expected denominator");
    }
    try {
      return FreeElement::word(algebra_, {}, parse_rational(text_.substr(start, pos_ - start)));
    } catch (const parse_error& e) {
      fail(e.what());
    }
  }

  // Longest generator name that is a prefix of the remaining input.
  FreeElement letter() {
    std::size_t best = 0, best_len = 0;
    const auto& names = algebra_->alphabet();
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& n = names[i];
      if (n.size() > best_len && text_.substr(pos_, n.size()) == n) {
        best = i;
        best_len = n.size();
      }
    }
    if (best_len == 0) fail("unknown generator at '" + std::string(text_.substr(pos_, 8)) + "'");
    pos_ += best_len;
    return FreeElement::word(algebra_, {best});
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { throw parse_error(what, pos_); }

  FreeAlgebraPtr algebra_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses e.g. "x*y*x", "xyx", "2*x' - x", "(x+y)^2".
/// Juxtaposed letters split greedily by the longest matching generator name.
inline FreeElement parse_free_element(const FreeAlgebraPtr& algebra, std::string_view text) {
  return detail::FreeParser(algebra, text).parse();
}

// ---------------------------------------------------------------------------
// Linear maps between truncated free algebras, given on the word basis.
// ---------------------------------------------------------------------------

class LinearMap {
public:
  LinearMap(FreeAlgebraPtr domain, FreeAlgebraPtr codomain, std::vector<FreeElement> images)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
    if (images_.size() != domain_->dim())
      throw dimension_mismatch("linear map needs one image per basis word");
    for (const auto& im : images_)
      if (!(*im.algebra() == *codomain_)) throw domain_error("image outside the codomain");
  }

  static LinearMap identity(const FreeAlgebraPtr& a) {
    std::vector<FreeElement> images;
    for (const auto& w : a->basis()) images.push_back(FreeElement::word(a, w));
    return LinearMap(a, a, std::move(images));
  }

  static LinearMap zero(const FreeAlgebraPtr& domain, const FreeAlgebraPtr& codomain) {
    return LinearMap(domain, codomain, std::vector<FreeElement>(domain->dim(), FreeElement::zero(codomain)));
  }

  const FreeAlgebraPtr& domain() const noexcept { return domain_; }
  const FreeAlgebraPtr& codomain() const noexcept { return codomain_; }
  const std::vector<FreeElement>& images() const noexcept { return images_; }

  const FreeElement& image(const Word& w) const { return images_[domain_->index_of(w)]; }

  FreeElement apply(const FreeElement& x) const {
    if (!(*x.algebra() == *domain_)) throw domain_error("argument outside the domain");
    FreeElement out(codomain_);
    for (const auto& [w, c] : x.terms()) out += c * image(w);
    return out;
  }

  /// Column c holds the coordinates of the image of basis word c.
  Matrix matrix() const {
    std::vector<Vector> columns;
    for (const auto& im : images_) columns.push_back(im.coordinates());
    return Matrix::from_columns(columns, codomain_->dim());
  }

  friend LinearMap compose(const LinearMap& f, const LinearMap& g) {
    if (!(*g.codomain_ == *f.domain_)) throw domain_error("compose: codomain/domain mismatch");
    std::vector<FreeElement> images;
    for (const auto& im : g.images_) images.push_back(f.apply(im));
    return LinearMap(g.domain_, f.codomain_, std::move(images));
  }

  friend LinearMap operator*(const Rational& c, const LinearMap& f) {
    std::vector<FreeElement> images;
    for (const auto& im : f.images_) images.push_back(c * im);
    return LinearMap(f.domain_, f.codomain_, std::move(images));
  }

  friend bool operator==(const LinearMap& a, const LinearMap& b) {
    return *a.domain_ == *b.domain_ && *a.codomain_ == *b.codomain_ && a.images_ == b.images_;
  }

private:
  FreeAlgebraPtr domain_;
  FreeAlgebraPtr codomain_;
  std::vector<FreeElement> images_;
};

using LinearEndo = LinearMap;

/// The map exchanging two basis words and fixing all others.
inline LinearMap swap_words_map(const FreeAlgebraPtr& a, const Word& u, const Word& v) {
  std::vector<FreeElement> images;
  for (const auto& w : a->basis()) {
    const Word& target = w == u ? v : (w == v ? u : w);
    images.push_back(FreeElement::word(a, target));
  }
  return LinearMap(a, a, std::move(images));
}

/// The structure-constant algebra with the same word basis.
inline Algebra to_algebra(const FreeAlgebra& f, Scalars scalars = Scalars::Q) {
  const std::size_t d = f.dim();
  std::vector<std::string> labels;
  for (const auto& w : f.basis()) labels.push_back(f.format_word(w));
  std::vector<Rational> c(d * d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const Word& u = f.basis()[i];
      const Word& v = f.basis()[j];
      if (u.size() + v.size() > f.max_degree()) continue;
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      c[(i * d + j) * d + f.index_of(w)] = 1;
    }
  return Algebra(std::move(labels), std::move(c), unit_vector(d, 0), scalars);
}

// ---------------------------------------------------------------------------
// Free products and evaluation morphisms.
// ---------------------------------------------------------------------------

struct FreeProduct {
  FreeAlgebraPtr algebra;
  std::vector<std::size_t> j1;  // letter of the product for each A-generator
  std::vector<std::size_t> j2;  // letter of the product for each B-generator
  std::vector<std::string> renamed;  // B-generators that received a prime

  FreeElement embed_first(std::size_t i) const { return FreeElement::word(algebra, {j1.at(i)}); }
  FreeElement embed_second(std::size_t i) const { return FreeElement::word(algebra, {j2.at(i)}); }
};

/// k<A> * k<B> = k<A, B>, truncated at max_degree. A B-generator whose name
/// is taken gets a trailing prime.
inline FreeProduct free_product(const std::vector<std::string>& alphabet_a, const std::vector<std::string>& alphabet_b,
                                std::size_t max_degree) {
  std::vector<std::string> names = alphabet_a;
  std::set<std::string> taken(alphabet_a.begin(), alphabet_a.end());
  if (taken.size() != alphabet_a.size()) throw domain_error("free_product: repeated generator in the first factor");
  FreeProduct out;
  for (std::size_t i = 0; i < alphabet_a.size(); ++i) out.j1.push_back(i);
  for (const auto& original : alphabet_b) {
    std::string name = original;
    if (taken.count(name)) {
      name += "'";
      out.renamed.push_back(original);
      if (taken.count(name))
        throw domain_error("free_product: generator '" + original + "' still collides after renaming to '" + name +
                           "'");
    }
    taken.insert(name);
    out.j2.push_back(names.size());
    names.push_back(std::move(name));
  }
  out.algebra = make_free_algebra(std::move(names), max_degree);
  return out;
}

/// Target algebra given by another truncated free algebra.
struct FreeTarget {
  using Element = FreeElement;
  FreeAlgebraPtr algebra;

  Element one() const { return FreeElement::one(algebra); }
  Element zero() const { return FreeElement::zero(algebra); }
  Element multiply(const Element& a, const Element& b) const { return a * b; }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element scale(const Rational& c, const Element& a) const { return c * a; }
  bool is_zero(const Element& a) const { return a.is_zero(); }
  std::string format(const Element& a) const { return a.to_string(); }
};

/// Target algebra given by structure constants.
struct StructureTarget {
  using Element = Vector;
  std::shared_ptr<const Algebra> algebra;

  Element one() const { return algebra->unit(); }
  Element zero() const { return Vector(algebra->dim()); }
  Element multiply(const Element& a, const Element& b) const { return algebra->multiply(a, b); }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element scale(const Rational& c, const Element& a) const { return c * a; }
  bool is_zero(const Element& a) const { return leftdiff::is_zero(a); }
  std::string format(const Element& a) const {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (sgn(a[i]) == 0) continue;
      if (!out.empty()) out += " + ";
      out += (a[i] == 1 ? "" : leftdiff::to_string(a[i]) + "*") + algebra->labels()[i];
    }
    return out.empty() ? "0" : out;
  }
};

/// psi : k<letters> -> target, determined by the images of the letters.
template <class Target>
class UniversalMap {
public:
  using Element = typename Target::Element;

  UniversalMap(FreeAlgebraPtr source, Target target, std::vector<Element> letter_images)
      : source_(std::move(source)), target_(std::move(target)), letters_(std::move(letter_images)) {
    if (letters_.size() != source_->alphabet().size())
      throw dimension_mismatch("universal map needs one image per generator");
  }

  const FreeAlgebraPtr& source() const noexcept { return source_; }
  const Target& target() const noexcept { return target_; }
  const std::vector<Element>& letter_images() const noexcept { return letters_; }

  /// Product of the letter images, also for words beyond the truncation.
  Element evaluate(const Word& w) const {
    Element out = target_.one();
    for (auto letter : w) out = target_.multiply(out, letters_.at(letter));
    return out;
  }

  Element apply(const FreeElement& x) const {
    Element out = target_.zero();
    for (const auto& [w, c] : x.terms()) out = target_.add(out, target_.scale(c, evaluate(w)));
    return out;
  }

private:
  FreeAlgebraPtr source_;
  Target target_;
  std::vector<Element> letters_;
};

/// The evaluation morphism on a free product with psi j1 = assign_a, psi j2 = assign_b.
template <class Target>
UniversalMap<Target> universal_map(const FreeProduct& product, const std::vector<typename Target::Element>& assign_a,
                                   const std::vector<typename Target::Element>& assign_b, Target target) {
  if (assign_a.size() != product.j1.size() || assign_b.size() != product.j2.size())
    throw dimension_mismatch("universal_map: assignment sizes do not match the factors");
  std::vector<typename Target::Element> letters(product.algebra->alphabet().size(), target.zero());
  for (std::size_t i = 0; i < assign_a.size(); ++i) letters[product.j1[i]] = assign_a[i];
  for (std::size_t i = 0; i < assign_b.size(); ++i) letters[product.j2[i]] = assign_b[i];
  return UniversalMap<Target>(product.algebra, std::move(target), std::move(letters));
}

/// Whether psi kills every word of length max_degree + 1, i.e. whether it is
/// a morphism on the truncated algebra and not only on words.
template <class Target>
bool descends_to_truncation(const UniversalMap<Target>& psi) {
  const auto& src = *psi.source();
  const auto& t = psi.target();
  for (const auto& w : src.basis()) {
    if (w.size() != src.max_degree()) continue;
    for (std::size_t g = 0; g < src.alphabet().size(); ++g) {
      Word longer = w;
      longer.push_back(g);
      if (!t.is_zero(psi.evaluate(longer))) return false;
    }
  }
  return true;
}

struct MorphismCheck {
  bool generators_agree = true;  // psi on each generator equals the assignment
  bool unital = true;
  bool multiplicative = true;  // psi(uv) = psi(u) psi(v) for every split of every basis word
  bool descends = true;        // products landing beyond the truncation map to zero
  std::size_t splits_checked = 0;
  std::string witness;
  bool holds() const { return generators_agree && unital && multiplicative; }
};

/// Checks word by word that psi is the morphism determined by its generator
/// values: every basis word w = uv satisfies psi(w) = psi(u) psi(v), so any
/// morphism agreeing on generators agrees with psi on the whole basis.
template <class Target>
MorphismCheck check_morphism(const UniversalMap<Target>& psi) {
  MorphismCheck out;
  const auto& t = psi.target();
  const auto& src = *psi.source();
  for (std::size_t g = 0; g < src.alphabet().size(); ++g) {
    if (src.max_degree() == 0) break;
    if (!(psi.apply(FreeElement::word(psi.source(), {g})) == psi.letter_images()[g])) {
      out.generators_agree = false;
      out.witness = "generator " + src.alphabet()[g];
    }
  }
  if (!(psi.apply(FreeElement::one(psi.source())) == t.one())) {
    out.unital = false;
    out.witness = "unit";
  }
  for (const auto& w : src.basis())
    for (std::size_t cut = 0; cut <= w.size(); ++cut) {
      const Word u(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cut));
      const Word v(w.begin() + static_cast<std::ptrdiff_t>(cut), w.end());
      ++out.splits_checked;
      const auto whole = psi.apply(FreeElement::word(psi.source(), w));
      const auto parts = t.multiply(psi.apply(FreeElement::word(psi.source(), u)),
                                    psi.apply(FreeElement::word(psi.source(), v)));
      if (!(whole == parts) && out.multiplicative) {
        out.multiplicative = false;
        out.witness = "split " + src.format_word(u) + " | " + src.format_word(v);
      }
    }
  out.descends = descends_to_truncation(psi);
  return out;
}

struct DegreeSlice {
  std::size_t degree = 0;
  std::size_t words = 0;
  std::size_t kernel_dim = 0;
  std::size_t ideal_dim = 0;
};

struct CodiagonalReport {
  bool holds = true;
  std::vector<std::string> alphabet;  // of A * A
  std::vector<DegreeSlice> slices;
};

/// ker(codiagonal : A*A -> A) against the two-sided ideal generated by
/// x' - x, degree by degree (both are spanned by homogeneous elements).
inline CodiagonalReport codiagonal_kernel_check(const std::vector<std::string>& alphabet, std::size_t max_degree) {
  const FreeProduct prod = free_product(alphabet, alphabet, max_degree);
  const FreeAlgebraPtr& pa = prod.algebra;
  const FreeAlgebraPtr base = make_free_algebra(alphabet, max_degree);
  std::vector<FreeElement> identity;
  for (std::size_t i = 0; i < alphabet.size(); ++i) identity.push_back(FreeElement::word(base, {i}));
  const auto codiag = universal_map(prod, identity, identity, FreeTarget{base});

  CodiagonalReport out;
  out.alphabet = pa->alphabet();
  std::vector<FreeElement> generators;
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    generators.push_back(prod.embed_second(i) - prod.embed_first(i));

  for (std::size_t deg = 0; deg <= max_degree; ++deg) {
    std::vector<std::size_t> slice;  // indices into the product basis
    for (std::size_t i = 0; i < pa->dim(); ++i)
      if (pa->basis()[i].size() == deg) slice.push_back(i);
    std::vector<std::size_t> target_slice;
    for (std::size_t i = 0; i < base->dim(); ++i)
      if (base->basis()[i].size() == deg) target_slice.push_back(i);

    // Matrix of the codiagonal restricted to degree deg.
    std::vector<Vector> columns;
    for (auto i : slice) {
      const Vector full = codiag.apply(FreeElement::word(pa, pa->basis()[i])).coordinates();
      Vector col;
      for (auto t : target_slice) col.push_back(full[t]);
      columns.push_back(std::move(col));
    }
    const Subspace ker = kernel(Matrix::from_columns(columns, target_slice.size()));

    // u (x'_i - x_i) v with |u| + |v| = deg - 1, in slice coordinates.
    EchelonBuilder ideal(slice.size());
    if (deg >= 1) {
      for (const auto& u : pa->basis())
        for (const auto& v : pa->basis()) {
          if (u.size() + v.size() + 1 != deg) continue;
          for (const auto& g : generators) {
            const Vector full = (FreeElement::word(pa, u) * g * FreeElement::word(pa, v)).coordinates();
            Vector local;
            for (auto i : slice) local.push_back(full[i]);
            ideal.add(std::move(local));
          }
        }
    }
    const Subspace ideal_space = std::move(ideal).finish();
    out.slices.push_back({deg, slice.size(), ker.dim(), ideal_space.dim()});
    if (!(ker == ideal_space)) out.holds = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multimorphisms.
// ---------------------------------------------------------------------------

/// Substitution map: a word with exactly r letters outside `x_letters` has
/// its i-th such letter replaced by the assigned target element; words with
/// another count go to 0. X-letters map to the target letter of the same name.
inline LinearMap multimorphism_example11(std::size_t r, const FreeAlgebraPtr& source,
                                         const std::vector<std::size_t>& x_letters, const FreeAlgebraPtr& target,
                                         const std::map<std::size_t, FreeElement>& assignment) {
  const std::set<std::size_t> xs(x_letters.begin(), x_letters.end());
  std::map<std::size_t, FreeElement> x_image;
  for (auto x : xs) {
    if (x >= source->alphabet().size()) throw domain_error("x-letter index out of range");
    x_image.emplace(x, FreeElement::generator(target, source->alphabet()[x]));
  }
  for (std::size_t y = 0; y < source->alphabet().size(); ++y) {
    if (xs.count(y)) continue;
    auto it = assignment.find(y);
    if (it == assignment.end())
      throw domain_error("no image assigned to generator '" + source->alphabet()[y] + "'");
    if (!(*it->second.algebra() == *target)) throw domain_error("assigned image outside the target");
  }
  std::vector<FreeElement> images;
  for (const auto& w : source->basis()) {
    const auto y_count = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [&](auto l) { return !xs.count(l); }));
    if (y_count != r) {
      images.push_back(FreeElement::zero(target));
      continue;
    }
    FreeElement img = FreeElement::one(target);
    for (auto l : w) img = img * (xs.count(l) ? x_image.at(l) : assignment.at(l));
    images.push_back(std::move(img));
  }
  return LinearMap(source, target, std::move(images));
}

struct MultimorphismWitness {
  std::size_t n = 0;
  std::vector<std::string> a;  // a_1 .. a_{n+1}
  std::vector<std::string> b;  // b_1 .. b_n
  std::string lhs;
  std::string rhs;
};

struct MultimorphismShape {
  std::size_t n = 0;
  bool holds = true;
  bool exhaustive = false;  // all basis tuples were checked as well
  std::size_t basis_tuples = 0;
  std::size_t samples = 0;
  std::optional<MultimorphismWitness> witness;
};

struct MultimorphismReport {
  bool holds = true;
  std::uint64_t seed = 0;
  std::vector<MultimorphismShape> shapes;
  std::optional<MultimorphismWitness> witness;  // first failure over all shapes
};

namespace detail {

inline FreeElement random_element(const FreeAlgebraPtr& a, const std::vector<std::size_t>& pool, std::mt19937_64& rng) {
  FreeElement e(a);
  if (pool.empty()) return e;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> count(1, 3);
  const int terms = count(rng);
  for (int t = 0; t < terms; ++t) e.add_term(a->basis()[pool[pick(rng)]], coeff(rng));
  return e;
}

// Letterwise image of an A-word under the structure map into the codomain.
inline FreeElement act(const FreeElement& a, const FreeAlgebraPtr& codomain) {
  FreeElement out(codomain);
  const auto& names = a.algebra()->alphabet();
  for (const auto& [w, c] : a.terms()) {
    FreeElement m = FreeElement::one(codomain);
    for (auto l : w) m = m * FreeElement::generator(codomain, names[l]);
    out += c * m;
  }
  return out;
}

}  // namespace detail

namespace detail {

// The law for each n in `ns`, with a's from `a_pool` and b's from `b_pool`
// (indices into the source basis).
inline MultimorphismReport check_multimorphism_law(const LinearMap& phi, const std::vector<std::size_t>& a_pool,
                                                   const std::vector<std::size_t>& b_pool,
                                                   const std::vector<std::size_t>& ns, std::size_t samples,
                                                   std::uint64_t seed) {
  const FreeAlgebraPtr& src = phi.domain();
  const FreeAlgebraPtr& dst = phi.codomain();
  MultimorphismReport report;
  report.seed = seed;

  auto check_tuple = [&](std::size_t n, const std::vector<FreeElement>& a, const std::vector<FreeElement>& b,
                         MultimorphismShape& shape) {
    FreeElement word = a[0];
    FreeElement rhs = act(a[0], dst);
    for (std::size_t k = 0; k < n; ++k) {
      word = word * b[k] * a[k + 1];
      rhs = rhs * phi.apply(b[k]) * act(a[k + 1], dst);
    }
    const FreeElement lhs = phi.apply(word);
    if (lhs == rhs) return;
    if (!shape.holds) return;  // keep the first witness
    shape.holds = false;
    MultimorphismWitness w;
    w.n = n;
    for (const auto& x : a) w.a.push_back(x.to_string());
    for (const auto& x : b) w.b.push_back(x.to_string());
    w.lhs = lhs.to_string();
    w.rhs = rhs.to_string();
    shape.witness = std::move(w);
  };

  for (const std::size_t n : ns) {
    MultimorphismShape shape;
    shape.n = n;
    std::size_t tuples = 1;
    for (std::size_t k = 0; k < n + 1 && tuples <= 50000; ++k) tuples *= a_pool.size();
    for (std::size_t k = 0; k < n && tuples <= 50000; ++k) tuples *= b_pool.size();
    shape.basis_tuples = tuples;
    shape.exhaustive = tuples <= 50000;
    if (shape.exhaustive) {
      // Mixed-radix enumeration: n+1 a-indices then n b-indices.
      std::vector<std::size_t> digits(2 * n + 1, 0);
      for (std::size_t t = 0; t < tuples && shape.holds; ++t) {
        std::vector<FreeElement> a, b;
        for (std::size_t k = 0; k <= n; ++k) a.push_back(FreeElement::word(src, src->basis()[a_pool[digits[k]]]));
        for (std::size_t k = 0; k < n; ++k) b.push_back(FreeElement::word(src, src->basis()[b_pool[digits[n + 1 + k]]]));
        check_tuple(n, a, b, shape);
        for (std::size_t k = 0; k < digits.size(); ++k) {
          const std::size_t radix = k <= n ? a_pool.size() : b_pool.size();
          if (++digits[k] < radix) break;
          digits[k] = 0;
        }
      }
    }
    for (std::size_t s = 0; s < samples; ++s) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(s)};
      std::mt19937_64 rng(seq);
      std::vector<FreeElement> a, b;
      for (std::size_t k = 0; k <= n; ++k) a.push_back(random_element(src, a_pool, rng));
      for (std::size_t k = 0; k < n; ++k) b.push_back(random_element(src, b_pool, rng));
      check_tuple(n, a, b, shape);
      ++shape.samples;
    }
    if (!shape.holds) {
      report.holds = false;
      if (!report.witness) report.witness = shape.witness;
    }
    report.shapes.push_back(std::move(shape));
  }
  return report;
}

inline std::vector<std::size_t> x_word_pool(const FreeAlgebra& src, const std::set<std::size_t>& xs) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < src.dim(); ++i) {
    const auto& w = src.basis()[i];
    if (std::all_of(w.begin(), w.end(), [&](auto l) { return xs.count(l) > 0; })) pool.push_back(i);
  }
  return pool;
}

}  // namespace detail

/// Tests phi(a1 b1 a2 ... an bn a(n+1)) = a1 phi(b1) a2 ... an phi(bn) a(n+1)
/// for n in {1, 2}, with a's in the span of words over `x_letters` and b's
/// arbitrary. Each shape gets `samples` seeded random tuples; when there are
/// at most 50000 basis tuples all of them are checked too, which suffices by
/// multilinearity.
inline MultimorphismReport check_multimorphism(const LinearMap& phi, const std::vector<std::size_t>& x_letters,
                                               std::size_t samples, std::uint64_t seed) {
  const FreeAlgebra& src = *phi.domain();
  const std::set<std::size_t> xs(x_letters.begin(), x_letters.end());
  std::vector<std::size_t> b_pool(src.dim());
  std::iota(b_pool.begin(), b_pool.end(), std::size_t{0});
  return detail::check_multimorphism_law(phi, detail::x_word_pool(src, xs), b_pool, {1, 2}, samples, seed);
}

// ---------------------------------------------------------------------------
// Derivations and Hasse-Schmidt sequences.
// ---------------------------------------------------------------------------

/// The derivation with the given generator images:
/// d(l_1 ... l_k) = sum_i l_1 .. d(l_i) .. l_k.
inline LinearMap derivation_from_generators(const FreeAlgebraPtr& a, const std::vector<FreeElement>& letter_images) {
  if (letter_images.size() != a->alphabet().size())
    throw dimension_mismatch("derivation needs one image per generator");
  std::vector<FreeElement> images;
  for (const auto& w : a->basis()) {
    FreeElement img(a);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Word left(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      const Word right(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
      img += FreeElement::word(a, left) * letter_images[w[i]] * FreeElement::word(a, right);
    }
    images.push_back(std::move(img));
  }
  return LinearMap(a, a, std::move(images));
}

/// d(uv) = d(u) v + u d(v) for all basis words u, v (uv = 0 beyond the truncation).
inline bool is_derivation(const LinearMap& d) {
  const auto& a = d.domain();
  if (!(*a == *d.codomain())) return false;
  for (const auto& u : a->basis())
    for (const auto& v : a->basis()) {
      const FreeElement eu = FreeElement::word(a, u), ev = FreeElement::word(a, v);
      if (!(d.apply(eu * ev) == d.apply(eu) * ev + eu * d.apply(ev))) return false;
    }
  return true;
}

struct HSSequence {
  FreeAlgebraPtr algebra;
  std::vector<LinearMap> maps;  // maps[0] = id, maps[n] = d^n / n!
  std::size_t length() const { return maps.empty() ? 0 : maps.size() - 1; }
};

/// partial_n = d^n / n! for n <= N. Z-mode needs 1/n!, so N >= 2 is refused there.
inline HSSequence hs_from_derivation(const LinearMap& d, std::size_t n_max, Scalars scalars = Scalars::Q) {
  if (!is_derivation(d)) throw domain_error("hs_from_derivation: the map is not a derivation");
  if (scalars == Scalars::Z && n_max >= 2)
    throw domain_error("hs_from_derivation: " + std::to_string(n_max) + "! is not invertible in Z");
  HSSequence seq;
  seq.algebra = d.domain();
  seq.maps.push_back(LinearMap::identity(d.domain()));
  LinearMap power = LinearMap::identity(d.domain());
  for (std::size_t n = 1; n <= n_max; ++n) {
    power = compose(d, power);
    seq.maps.push_back(Rational(1) / Rational(factorial(static_cast<long>(n))) * power);
  }
  return seq;
}

struct HSCheck {
  bool holds = true;
  std::size_t identities_checked = 0;
  std::optional<std::size_t> failing_n;
  std::string witness;
};

/// partial_n(t x) = sum_{i<=n} partial_i(t) partial_{n-i}(x) for all basis t, x and n <= N.
inline HSCheck hs_check(const HSSequence& seq) {
  HSCheck out;
  const auto& a = seq.algebra;
  if (seq.maps.empty() || !(seq.maps[0] == LinearMap::identity(a))) {
    out.holds = false;
    out.failing_n = 0;
    out.witness = "partial_0 is not the identity";
    return out;
  }
  for (std::size_t n = 0; n < seq.maps.size(); ++n)
    for (const auto& t : a->basis())
      for (const auto& x : a->basis()) {
        const FreeElement et = FreeElement::word(a, t), ex = FreeElement::word(a, x);
        FreeElement rhs(a);
        for (std::size_t i = 0; i <= n; ++i) rhs += seq.maps[i].apply(et) * seq.maps[n - i].apply(ex);
        ++out.identities_checked;
        if (!(seq.maps[n].apply(et * ex) == rhs)) {
          out.holds = false;
          out.failing_n = n;
          out.witness = "n=" + std::to_string(n) + ", t=" + a->format_word(t) + ", x=" + a->format_word(x);
          return out;
        }
      }
  return out;
}

}  // namespace leftdiff
