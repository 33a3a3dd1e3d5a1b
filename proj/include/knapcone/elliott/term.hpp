#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "knapcone/exact/matrix.hpp"
#include "knapcone/exact/rational.hpp"

namespace knapcone {

/// Ordered variable names. Earlier variables dominate in the iterated Laurent field.
class VarOrder {
 public:
  VarOrder() = default;
  explicit VarOrder(std::vector<std::string> names) : names_(std::move(names)) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names_)
      if (n.empty() || !seen.insert(n).second) fail(ErrorCode::InvalidInput, "variable names must be distinct: '" + n + "'");
  }

  std::size_t size() const { return names_.size(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }
  std::size_t index_of(const std::string& name) const {
    auto i = find(name);
    if (!i) fail(ErrorCode::InvalidInput, "unknown variable '" + name + "'");
    return *i;
  }

  friend bool operator==(const VarOrder&, const VarOrder&) = default;

 private:
  std::vector<std::string> names_;
};

using ExponentVector = std::vector<Rational>;

struct Monomial {
  ExponentVector e;

  Monomial() = default;
  explicit Monomial(std::size_t n) : e(n, Rational(0)) {}
  explicit Monomial(ExponentVector v) : e(std::move(v)) {}
  static Monomial from_ints(const std::vector<long>& v) {
    Monomial m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m.e[i] = Rational(v[i]);
    return m;
  }

  std::size_t size() const { return e.size(); }
  const Rational& operator[](std::size_t i) const { return e[i]; }
  Rational& operator[](std::size_t i) { return e[i]; }

  bool is_one() const {
    for (const auto& x : e)
      if (!x.is_zero()) return false;
    return true;
  }
  bool is_integral() const {
    for (const auto& x : e)
      if (!x.is_integer()) return false;
    return true;
  }

  Monomial& operator+=(const Monomial& o) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (!o.e[i].is_zero()) e[i] += o.e[i];
    return *this;
  }
  Monomial& operator-=(const Monomial& o) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (!o.e[i].is_zero()) e[i] -= o.e[i];
    return *this;
  }
  /// this += k * o
  void add_scaled(const Monomial& o, const Rational& k) {
    if (k.is_zero()) return;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (!o.e[i].is_zero()) e[i] += k * o.e[i];
  }
  Monomial inverse() const {
    Monomial r(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] = -e[i];
    return r;
  }
  friend Monomial operator+(Monomial a, const Monomial& b) { return a += b; }
  friend Monomial operator-(Monomial a, const Monomial& b) { return a -= b; }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.e < b.e; }

  std::string str(const VarOrder& order) const {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i].is_zero()) continue;
      if (!s.empty()) s += '*';
      s += order[i];
      if (e[i] != Rational(1)) s += "^" + (e[i].is_integer() ? e[i].str() : "(" + e[i].str() + ")");
    }
    return s.empty() ? "1" : s;
  }
};

enum class Comparison { Small, Large, One };

/// Classification against 1 in the iterated Laurent field whose variable
/// priority follows the exponent-vector positions.
inline Comparison compare_to_one(const Monomial& m) {
  for (const auto& x : m.e) {
    if (x.is_zero()) continue;
    return x.sign() > 0 ? Comparison::Small : Comparison::Large;
  }
  return Comparison::One;
}

/// Same classification with an explicit priority list of positions.
inline Comparison compare_to_one(const Monomial& m, const std::vector<std::size_t>& priority) {
  for (auto i : priority) {
    if (m.e[i].is_zero()) continue;
    return m.e[i].sign() > 0 ? Comparison::Small : Comparison::Large;
  }
  return Comparison::One;
}

/// Sparse Laurent polynomial with rational exponents, kept sorted by monomial.
class LaurentPoly {
 public:
  using Term = std::pair<Monomial, Rational>;

  LaurentPoly() = default;
  static LaurentPoly monomial(Monomial m, Rational c = 1) {
    LaurentPoly p;
    if (!c.is_zero()) p.terms_.emplace_back(std::move(m), std::move(c));
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::vector<Term>& mutable_terms() { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Append without merging; call normalize() afterwards.
  void push(Monomial m, Rational c) {
    if (!c.is_zero()) terms_.emplace_back(std::move(m), std::move(c));
  }

  /// Sort, merge equal monomials, and drop zero coefficients.
  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second += t.second;
        if (out.back().second.is_zero()) out.pop_back();
      } else if (!t.second.is_zero()) {
        out.push_back(std::move(t));
      }
    }
    terms_ = std::move(out);
  }

  void scale(const Rational& k) {
    if (k.is_zero()) {
      terms_.clear();
      return;
    }
    for (auto& t : terms_) t.second *= k;
  }
  void shift(const Monomial& m) {
    for (auto& t : terms_) t.first += m;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
    return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
                                        [](const Term& x, const Term& y) {
                                          if (x.first == y.first) return x.second < y.second;
                                          return x.first < y.first;
                                        });
  }

  std::string str(const VarOrder& order) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& [m, c] = terms_[i];
      std::string cs = c.str();
      if (i) {
        if (c.sign() < 0) {
          s += " - ";
          cs = (-c).str();
        } else {
          s += " + ";
        }
      }
      if (m.is_one())
        s += cs;
      else if (cs == "1")
        s += m.str(order);
      else if (cs == "-1")
        s += "-" + m.str(order);
      else
        s += cs + "*" + m.str(order);
    }
    return s;
  }

 private:
  std::vector<Term> terms_;
};

/// The binomial 1 - u.
struct BinomialFactor {
  Monomial u;
  friend bool operator==(const BinomialFactor& a, const BinomialFactor& b) { return a.u == b.u; }
  friend bool operator<(const BinomialFactor& a, const BinomialFactor& b) { return a.u < b.u; }
};

/// numerator / prod (1 - u_k), with an optional underlined factor.
struct CTTerm {
  LaurentPoly numerator;
  std::vector<BinomialFactor> denominator;
  std::optional<std::size_t> underline;

  std::size_t nvars() const {
    if (!denominator.empty()) return denominator[0].u.size();
    if (!numerator.empty()) return numerator.terms()[0].first.size();
    return 0;
  }

  /// Sorted factors and numerator; drops the underline mark.
  CTTerm canonical() const {
    CTTerm t{numerator, denominator, std::nullopt};
    std::sort(t.denominator.begin(), t.denominator.end());
    t.numerator.normalize();
    return t;
  }

  friend bool operator==(const CTTerm& a, const CTTerm& b) {
    return a.numerator == b.numerator && a.denominator == b.denominator && a.underline == b.underline;
  }
  friend bool operator<(const CTTerm& a, const CTTerm& b) {
    if (a.denominator != b.denominator)
      return std::lexicographical_compare(a.denominator.begin(), a.denominator.end(), b.denominator.begin(),
                                          b.denominator.end());
    return a.numerator < b.numerator;
  }

  std::string str(const VarOrder& order) const {
    std::string s = numerator.str(order);
    if (denominator.empty()) return s;
    if (numerator.size() > 1) s = "(" + s + ")";
    s += " / (";
    for (std::size_t k = 0; k < denominator.size(); ++k) {
      if (k) s += "*";
      s += "(1 - " + denominator[k].u.str(order) + ")";
    }
    return s + ")";
  }
};

using TermSum = std::vector<CTTerm>;

/// Canonical form of a sum: canonical terms, sorted, with numerators of equal
/// denominators merged.
inline TermSum canonical_sum(const TermSum& terms) {
  TermSum c;
  c.reserve(terms.size());
  for (const auto& t : terms) c.push_back(t.canonical());
  std::sort(c.begin(), c.end(), [](const CTTerm& a, const CTTerm& b) { return a.denominator < b.denominator; });
  TermSum out;
  for (auto& t : c) {
    if (!out.empty() && out.back().denominator == t.denominator) {
      out.back().numerator += t.numerator;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const CTTerm& t) { return t.numerator.empty(); });
  std::sort(out.begin(), out.end());
  return out;
}

/// Canonical order of a sum without merging (keeps the term count intact).
inline TermSum sorted_sum(const TermSum& terms) {
  TermSum c;
  c.reserve(terms.size());
  for (const auto& t : terms) c.push_back(t.canonical());
  std::sort(c.begin(), c.end());
  return c;
}

inline std::string sum_str(const TermSum& terms, const VarOrder& order) {
  std::string s;
  for (const auto& t : terms) s += t.str(order) + "\n";
  return s;
}

/// Flips every factor whose monomial is Large: 1/(1-u) = -u^{-1}/(1-u^{-1}).
inline CTTerm normalize_proper(const CTTerm& t) {
  CTTerm out = t;
  for (auto& f : out.denominator) {
    switch (compare_to_one(f.u)) {
      case Comparison::One: fail(ErrorCode::DegenerateFactor, "denominator factor 1 - 1");
      case Comparison::Small: break;
      case Comparison::Large: {
        f.u = f.u.inverse();
        out.numerator.shift(f.u);
        out.numerator.scale(-1);
        break;
      }
    }
  }
  return out;
}

/// Replaces the exponents at positions `block` of every monomial by W times them.
inline CTTerm apply_matrix_action(const RatMatrix& W, const CTTerm& t, const std::vector<std::size_t>& block) {
  if (W.rows() != block.size() || W.cols() != block.size())
    fail(ErrorCode::InvalidInput, "matrix action size does not match the variable block");
  if (determinant(W).is_zero()) fail(ErrorCode::SingularMatrix, "matrix action must be nonsingular");
  auto act = [&](Monomial& m) {
    std::vector<Rational> a;
    a.reserve(block.size());
    for (auto i : block) a.push_back(m.e[i]);
    for (std::size_t r = 0; r < block.size(); ++r) {
      Rational v = 0;
      for (std::size_t c = 0; c < block.size(); ++c)
        if (!W(r, c).is_zero() && !a[c].is_zero()) v += W(r, c) * a[c];
      m.e[block[r]] = v;
    }
  };
  CTTerm out = t;
  for (auto& [m, c] : out.numerator.mutable_terms()) act(m);
  out.numerator.normalize();
  for (auto& f : out.denominator) act(f.u);
  return out;
}

}  // namespace knapcone
