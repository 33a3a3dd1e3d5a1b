#pragma once

#include <vector>

#include "knapcone/elliott/term.hpp"

namespace knapcone {

/// Matrix form of coefficient * y^{alpha_0} lam^{a_0} / prod (1 - y^{alpha_i} lam^{a_i}).
///
/// Row 0 holds the lam-exponents, the remaining rows the other variables in
/// VarOrder with the lam position removed. Columns 0..n-1 are the factors and
/// the last column is the numerator.
struct EncodingMatrix {
  RatMatrix M;
  Rational coefficient = 1;

  std::size_t factors() const { return M.cols() - 1; }
  friend bool operator==(const EncodingMatrix&, const EncodingMatrix&) = default;
};

inline EncodingMatrix encode(const CTTerm& t, std::size_t lam) {
  if (t.numerator.size() != 1) fail(ErrorCode::InvalidInput, "encoding needs a single numerator monomial");
  const auto& [num, coeff] = t.numerator.terms()[0];
  const std::size_t nv = num.size(), n = t.denominator.size();
  EncodingMatrix enc{RatMatrix(nv, n + 1), coeff};
  auto put = [&](const Monomial& m, std::size_t col) {
    enc.M(0, col) = m[lam];
    std::size_t r = 1;
    for (std::size_t i = 0; i < nv; ++i)
      if (i != lam) enc.M(r++, col) = m[i];
  };
  for (std::size_t k = 0; k < n; ++k) put(t.denominator[k].u, k);
  put(num, n);
  return enc;
}

inline CTTerm decode(const EncodingMatrix& enc, std::size_t lam) {
  const std::size_t nv = enc.M.rows(), n = enc.factors();
  auto get = [&](std::size_t col) {
    Monomial m(nv);
    m[lam] = enc.M(0, col);
    std::size_t r = 1;
    for (std::size_t i = 0; i < nv; ++i)
      if (i != lam) m[i] = enc.M(r++, col);
    return m;
  };
  CTTerm t;
  for (std::size_t k = 0; k < n; ++k) t.denominator.push_back({get(k)});
  t.numerator = LaurentPoly::monomial(get(n), enc.coefficient);
  return t;
}

/// Scales the lam row by m and column s by 1/m.
inline EncodingMatrix gamma_transform(const EncodingMatrix& enc, std::size_t s, std::int64_t m) {
  if (m < 1) fail(ErrorCode::InvalidInput, "multiplier must be positive");
  EncodingMatrix out = enc;
  const Rational mm(static_cast<long>(m));
  for (std::size_t j = 0; j < out.M.cols(); ++j) out.M(0, j) *= mm;
  for (std::size_t i = 0; i < out.M.rows(); ++i) out.M(i, s) /= mm;
  return out;
}

/// Adds h times column s to column l.
inline EncodingMatrix epsilon_transform(const EncodingMatrix& enc, std::size_t s, std::size_t l, const Rational& h) {
  if (s == l) fail(ErrorCode::InvalidInput, "epsilon transform needs distinct columns");
  EncodingMatrix out = enc;
  out.M.add_col(l, s, h);
  return out;
}

/// Term-level gamma: every lam-exponent times m, factor s's other exponents divided by m.
inline CTTerm gamma_transform(const CTTerm& t, std::size_t s, std::int64_t m, std::size_t lam) {
  if (m < 1) fail(ErrorCode::InvalidInput, "multiplier must be positive");
  if (m == 1) return t;
  const Rational mm(static_cast<long>(m));
  CTTerm out = t;
  for (auto& [mon, c] : out.numerator.mutable_terms()) mon[lam] *= mm;
  out.numerator.normalize();
  for (std::size_t k = 0; k < out.denominator.size(); ++k) {
    auto& u = out.denominator[k].u;
    if (k == s) {
      for (std::size_t i = 0; i < u.size(); ++i)
        if (i != lam) u[i] /= mm;
    } else {
      u[lam] *= mm;
    }
  }
  return out;
}

}  // namespace knapcone
