#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "knapcone/elliott/term.hpp"

namespace knapcone {

/// Number of nonnegative integer solutions of sum x_k a_k = a0 (coin-change recurrence).
///
/// Runs over x = 0..a0 once, keeping for each coin only the last a_k partial
/// counts, so memory is sum(a_k) rather than a0.
inline BigInt dp_count(const BigInt& a0, const std::vector<std::int64_t>& a) {
  if (a0 < 0) fail(ErrorCode::InvalidInput, "a0 must be nonnegative");
  for (auto x : a)
    if (x < 1) fail(ErrorCode::InvalidInput, "weights must be positive");
  if (!a0.fits_slong_p()) fail(ErrorCode::OutOfRange, "a0 too large for the table");
  const std::int64_t N = a0.get_si();
  const std::size_t n = a.size();
  if (n == 0) return N == 0 ? 1 : 0;

  using u128 = unsigned __int128;
  constexpr u128 kLimit = static_cast<u128>(1) << 126;
  // ring[k][x mod a_k] holds the count using coins 0..k for amount x.
  std::vector<std::vector<u128>> ring(n);
  for (std::size_t k = 0; k < n; ++k) ring[k].assign(static_cast<std::size_t>(a[k]), 0);
  std::vector<std::size_t> slot(n, 0);
  bool overflow = false;
  u128 last = 0;
  for (std::int64_t x = 0; x <= N && !overflow; ++x) {
    u128 v = x == 0 ? 1 : 0;
    for (std::size_t k = 0; k < n; ++k) {
      u128& cell = ring[k][slot[k]];
      // cell still holds the value for x - a_k (or 0 when x < a_k)
      v += cell;
      if (v >= kLimit) overflow = true;
      cell = v;
      if (++slot[k] == ring[k].size()) slot[k] = 0;
    }
    last = v;
  }
  if (!overflow) {
    BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(last >> 64));
    BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(last));
    return (hi << 64) + lo;
  }
  std::vector<std::vector<BigInt>> big(n);
  for (std::size_t k = 0; k < n; ++k) big[k].assign(static_cast<std::size_t>(a[k]), BigInt(0));
  std::fill(slot.begin(), slot.end(), 0);
  BigInt v;
  for (std::int64_t x = 0; x <= N; ++x) {
    v = x == 0 ? 1 : 0;
    for (std::size_t k = 0; k < n; ++k) {
      BigInt& cell = big[k][slot[k]];
      v += cell;
      cell = v;
      if (++slot[k] == big[k].size()) slot[k] = 0;
    }
  }
  return v;
}

/// Coefficients of a truncated multivariate expansion, keyed by full exponent vectors.
struct SeriesTable {
  std::int64_t truncation = 0;
  std::map<ExponentVector, Rational> coeffs;

  Rational at(const ExponentVector& e) const {
    auto it = coeffs.find(e);
    return it == coeffs.end() ? Rational(0) : it->second;
  }
  friend bool operator==(const SeriesTable&, const SeriesTable&) = default;
};

/// Expansion of a term sum graded by w . exponent, truncated above grade T, keeping
/// only monomials whose `elim` exponents vanish. Factors of positive grade expand
/// geometrically; with `allow_flip`, negative-grade factors are first rewritten as
/// 1/(1 - u) = -u^{-1}/(1 - u^{-1}). Grade-zero factors are rejected.
inline SeriesTable graded_expansion(const TermSum& E, const std::vector<Rational>& w, std::int64_t T,
                                    const std::vector<std::size_t>& elim = {}, bool allow_flip = false) {
  SeriesTable out;
  out.truncation = T;
  const Rational TT(static_cast<long>(T));
  auto grade = [&](const Monomial& m) {
    Rational g = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!w[i].is_zero() && !m[i].is_zero()) g += w[i] * m[i];
    return g;
  };
  for (const auto& term : E) {
    std::map<ExponentVector, Rational> cur;
    for (const auto& [m, c] : term.numerator.terms()) cur[m.e] += c;
    std::vector<std::pair<Monomial, Rational>> factors;
    for (const auto& f : term.denominator) {
      Rational g = grade(f.u);
      if (g.sign() == 0 || (g.sign() < 0 && !allow_flip))
        fail(ErrorCode::NonProperFactor, "factor has no positive grade");
      if (g.sign() > 0) {
        factors.emplace_back(f.u, g);
        continue;
      }
      Monomial inv = f.u.inverse();
      std::map<ExponentVector, Rational> shifted;
      for (const auto& [e, c] : cur) shifted[(Monomial(e) + inv).e] -= c;
      cur = std::move(shifted);
      factors.emplace_back(inv, -g);
    }
    // the lowest grade only ever rises, so pieces above T can be dropped now
    std::erase_if(cur, [&](const auto& kv) { return grade(Monomial(kv.first)) > TT; });
    for (const auto& [u, g] : factors) {
      std::map<ExponentVector, Rational> next;
      for (const auto& [e, c] : cur) {
        Monomial m(e);
        Rational gm = grade(m);
        while (gm <= TT) {
          next[m.e] += c;
          m += u;
          gm += g;
        }
      }
      cur = std::move(next);
    }
    for (const auto& [e, c] : cur) {
      bool keep = true;
      for (auto p : elim) keep = keep && e[p].is_zero();
      if (keep && !c.is_zero()) out.coeffs[e] += c;
    }
  }
  std::erase_if(out.coeffs, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

/// Expands every factor geometrically, keeps monomials of total grade <= T over
/// the `grading` positions, and returns those whose `elim` exponents all vanish.
inline SeriesTable series_ct_oracle(const TermSum& E, const std::vector<std::size_t>& elim,
                                    const std::vector<std::size_t>& grading, std::int64_t T) {
  const std::size_t nv = E.empty() ? 0 : E[0].nvars();
  std::vector<Rational> w(nv, Rational(0));
  for (auto p : grading) w[p] = 1;
  return graded_expansion(E, w, T, elim, false);
}

/// Substitution of variables by t^{weight} * value, with some positions kept symbolic.
struct Specialization {
  std::vector<std::int64_t> weight;  // t-degree per position
  std::vector<Rational> value;       // numeric factor per position
  std::vector<std::size_t> keep;     // positions left symbolic (their exponents are tracked)
};

/// Laurent expansion in t of a specialized term sum, truncated above t^T,
/// restricted to monomials whose kept exponents vanish. Factors of positive
/// t-degree expand geometrically; without kept positions, negative-degree
/// factors are flipped and degree-zero factors become constants.
inline std::map<std::int64_t, Rational> specialized_ct_series(const TermSum& E, const Specialization& sp,
                                                              std::int64_t T) {
  struct Piece {
    std::int64_t deg;
    ExponentVector kept;
    Rational coeff;
  };
  auto pow_value = [&](const Monomial& m) {
    Rational v = 1;
    std::int64_t d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].is_zero()) continue;
      if (std::find(sp.keep.begin(), sp.keep.end(), i) != sp.keep.end()) continue;
      if (!m[i].is_integer()) fail(ErrorCode::NonIntegerExponent, "specialization needs integer exponents");
      std::int64_t e = m[i].to_int64();
      d += e * sp.weight[i];
      if (sp.value[i] != Rational(1)) {
        Rational base = e > 0 ? sp.value[i] : Rational(1) / sp.value[i];
        for (std::int64_t k = 0; k < (e > 0 ? e : -e); ++k) v *= base;
      }
    }
    ExponentVector kept;
    for (auto p : sp.keep) kept.push_back(m[p]);
    return std::make_tuple(d, kept, v);
  };
  auto add_kept = [](ExponentVector a, const ExponentVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  };

  std::map<std::int64_t, Rational> total;
  for (const auto& term : E) {
    // lowest possible degree of the term, used to bound the expansion
    std::int64_t low = 0;
    std::vector<std::tuple<std::int64_t, ExponentVector, Rational>> factors;
    Rational constant = 1;
    for (const auto& f : term.denominator) {
      auto [d, kept, v] = pow_value(f.u);
      if (d == 0 && !sp.keep.empty()) fail(ErrorCode::NonProperFactor, "factor of degree zero");
      if (d < 0) {
        if (!sp.keep.empty()) fail(ErrorCode::NonProperFactor, "factor of negative degree");
        // 1/(1 - v t^d) = -v^{-1} t^{-d} / (1 - v^{-1} t^{-d})
        constant *= -(Rational(1) / v);
        low += -d;
        factors.emplace_back(-d, kept, Rational(1) / v);
      } else if (d == 0) {
        if (v == Rational(1)) fail(ErrorCode::DegenerateFactor, "specialized factor vanishes");
        constant /= (Rational(1) - v);
      } else {
        factors.emplace_back(d, kept, v);
      }
    }
    std::vector<Piece> cur;
    for (const auto& [m, c] : term.numerator.terms()) {
      auto [d, kept, v] = pow_value(m);
      cur.push_back({d + low, kept, c * v * constant});
    }
    // Degrees may still dip below zero through the numerator; only the upper cut matters.
    for (const auto& [d, kept, v] : factors) {
      std::vector<Piece> next;
      for (const auto& p : cur) {
        Piece q = p;
        while (q.deg <= T) {
          next.push_back(q);
          q.deg += d;
          q.kept = add_kept(q.kept, kept);
          q.coeff *= v;
        }
      }
      // merge equal keys
      std::map<std::pair<std::int64_t, ExponentVector>, Rational> merged;
      for (auto& p : next) merged[{p.deg, p.kept}] += p.coeff;
      cur.clear();
      for (auto& [k, c] : merged)
        if (!c.is_zero()) cur.push_back({k.first, k.second, c});
    }
    for (const auto& p : cur) {
      if (p.deg > T) continue;
      bool zero = true;
      for (const auto& e : p.kept) zero = zero && e.is_zero();
      if (zero) total[p.deg] += p.coeff;
    }
  }
  std::erase_if(total, [](const auto& kv) { return kv.second.is_zero(); });
  return total;
}

namespace detail {

using Poly = std::vector<Rational>;  // coefficient of lam^i at index i

inline void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero())
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline Poly poly_sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// Quotient and remainder of a by b (b nonzero).
inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
  trim(a);
  Poly q;
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational lead = b.back();
  for (std::size_t i = a.size(); i-- >= b.size();) {
    if (a[i].is_zero()) {
      if (i == 0) break;
      continue;
    }
    Rational f = a[i] / lead;
    std::size_t shift = i - (b.size() - 1);
    q[shift] = f;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
    if (i == 0) break;
  }
  trim(a);
  trim(q);
  return {q, a};
}

// Inverse of a modulo mod; throws CoincidentFactors when they share a root.
inline Poly poly_inverse_mod(const Poly& a, const Poly& mod) {
  Poly r0 = mod, r1 = poly_divmod(a, mod).second;
  Poly s0, s1{Rational(1)};
  while (!r1.empty()) {
    auto [q, r] = poly_divmod(r0, r1);
    Poly s2 = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) fail(ErrorCode::CoincidentFactors, "factor shares a root with the underlined factor");
  Poly inv = s0;
  for (auto& c : inv) c /= r0[0];
  return poly_divmod(inv, mod).second;
}

}  // namespace detail

/// Numeric value of a monomial over the non-lam positions with y_i = base_i^M.
inline Rational monomial_value(const Monomial& m, std::size_t lam, const std::vector<Rational>& base, std::int64_t M) {
  Rational v = 1;
  for (std::size_t i = 0, k = 0; i < m.size(); ++i) {
    if (i == lam) continue;
    const Rational& b = base[k++];
    if (m[i].is_zero()) continue;
    Rational e = m[i] * Rational(static_cast<long>(M));
    if (!e.is_integer()) fail(ErrorCode::NonIntegerExponent, "power M does not clear exponent " + m[i].str());
    std::int64_t ee = e.to_int64();
    Rational x = ee > 0 ? b : Rational(1) / b;
    for (std::int64_t j = 0; j < (ee > 0 ? ee : -ee); ++j) v *= x;
  }
  return v;
}

/// A-operator value of the underlined factor computed independently of the
/// recursion: the constant coefficient of numerator / (other factors) reduced
/// modulo u lam^a - 1, with the other variables y_i = base_i^M.
inline Rational residue_a_operator(const CTTerm& t, std::size_t lam, const std::vector<Rational>& base,
                                   std::int64_t M) {
  using detail::Poly;
  if (!t.underline) fail(ErrorCode::InvalidInput, "residue oracle needs an underlined factor");
  const auto& U = t.denominator[*t.underline].u;
  const std::int64_t a = U[lam].to_int64();
  if (a < 1) fail(ErrorCode::InvalidLabel, "underlined factor needs a positive exponent");
  const Rational u = monomial_value(U, lam, base, M);
  const Rational uinv = Rational(1) / u;
  Poly mod(static_cast<std::size_t>(a) + 1, Rational(0));  // lam^a - 1/u
  mod[static_cast<std::size_t>(a)] = 1;
  mod[0] = -uinv;
  // lam^e = lam^{e mod a} * u^{-floor(e / a)}
  auto reduce_power = [&](std::int64_t e, const Rational& c, Poly& acc) {
    std::int64_t q = e >= 0 ? e / a : -((-e + a - 1) / a);
    std::int64_t r = e - q * a;
    Rational f = c;
    for (std::int64_t k = 0; k < (q > 0 ? q : -q); ++k) f *= (q > 0 ? uinv : u);
    acc[static_cast<std::size_t>(r)] += f;
  };
  Poly num(static_cast<std::size_t>(a), Rational(0));
  for (const auto& [m, c] : t.numerator.terms()) reduce_power(m[lam].to_int64(), c * monomial_value(m, lam, base, M), num);
  detail::trim(num);
  Poly den{Rational(1)};
  for (std::size_t j = 0; j < t.denominator.size(); ++j) {
    if (j == *t.underline) continue;
    const auto& f = t.denominator[j].u;
    Poly p(static_cast<std::size_t>(a), Rational(0));
    p[0] = 1;
    reduce_power(f[lam].to_int64(), -monomial_value(f, lam, base, M), p);
    detail::trim(p);
    den = detail::poly_divmod(detail::poly_mul(den, p), mod).second;
  }
  Poly r = detail::poly_divmod(detail::poly_mul(num, detail::poly_inverse_mod(den, mod)), mod).second;
  return r.empty() ? Rational(0) : r[0];
}

/// Numeric value of a lam-free term sum at y_i = base_i^M.
inline Rational evaluate_at(const TermSum& terms, std::size_t lam, const std::vector<Rational>& base, std::int64_t M) {
  Rational total = 0;
  for (const auto& t : terms) {
    Rational num = 0;
    for (const auto& [m, c] : t.numerator.terms()) num += c * monomial_value(m, lam, base, M);
    Rational den = 1;
    for (const auto& f : t.denominator) den *= Rational(1) - monomial_value(f.u, lam, base, M);
    if (den.is_zero()) fail(ErrorCode::DegenerateFactor, "evaluation point is a pole");
    total += num / den;
  }
  return total;
}

}  // namespace knapcone
