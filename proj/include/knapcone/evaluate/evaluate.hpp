#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "knapcone/decdenu/decdenu.hpp"
#include "knapcone/exact/series.hpp"

namespace knapcone {

struct GenericDirection {
  std::vector<std::int64_t> c;
  std::uint64_t seed = 0;
  std::int64_t bound = 10;
};

/// Deterministic stream of candidate directions: entries in [-B, B], B doubling
/// after every few rejected draws.
class DirectionSampler {
 public:
  DirectionSampler(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed), rng_(seed) {}

  GenericDirection next() {
    if (draws_ > 0 && draws_ % kDrawsPerBound == 0) bound_ *= 2;
    ++draws_;
    std::uniform_int_distribution<std::int64_t> dist(-bound_, bound_);
    GenericDirection d{std::vector<std::int64_t>(dim_), seed_, bound_};
    for (auto& x : d.c) x = dist(rng_);
    return d;
  }

 private:
  static constexpr int kDrawsPerBound = 4;
  std::size_t dim_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::int64_t bound_ = 10;
  std::uint64_t draws_ = 0;
};

inline Rational dot(const std::vector<std::int64_t>& c, const Monomial& m, const std::vector<std::size_t>& pos) {
  Rational s = 0;
  for (std::size_t i = 0; i < pos.size(); ++i)
    if (c[i] != 0 && !m[pos[i]].is_zero()) s += Rational(static_cast<long>(c[i])) * m[pos[i]];
  return s;
}

inline std::vector<std::size_t> all_positions(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

inline bool is_generic(const std::vector<std::int64_t>& c, const TermSum& terms, const std::vector<std::size_t>& pos) {
  for (const auto& t : terms)
    for (const auto& f : t.denominator)
      if (dot(c, f.u, pos).is_zero()) return false;
  return true;
}

/// A direction c over the positions `pos` with c . alpha != 0 for every denominator exponent alpha.
inline GenericDirection generic_direction(const TermSum& terms, std::uint64_t seed,
                                          std::optional<std::vector<std::size_t>> positions = std::nullopt) {
  std::vector<std::size_t> pos = positions ? *positions : all_positions(terms.empty() ? 0 : terms[0].nvars());
  for (const auto& t : terms)
    for (const auto& f : t.denominator) {
      bool zero = true;
      for (auto p : pos) zero = zero && f.u[p].is_zero();
      if (zero) fail(ErrorCode::ZeroDirection, "denominator exponent vanishes on the specialized variables");
    }
  DirectionSampler sampler(pos.size(), seed);
  for (;;) {
    GenericDirection d = sampler.next();
    if (is_generic(d.c, terms, pos)) return d;
  }
}

/// Limit at t = 0 of sum_i k_i e^{g_i t} / prod_k (1 - e^{b_k t}), with results
/// accumulated per tag.
class ToddAccumulator {
 public:
  explicit ToddAccumulator(std::size_t tags = 1) : totals_(tags, Rational(0)) {}

  struct Entry {
    Rational g;
    Rational coeff;
    std::size_t tag = 0;
  };

  void add(const std::vector<Rational>& betas, const std::vector<Entry>& numerator) {
    const std::size_t D = betas.size();
    Rational scale = (D % 2 == 0) ? Rational(1) : Rational(-1);
    TruncatedSeries P = TruncatedSeries::constant(1, D);
    for (const auto& b : betas) {
      if (b.is_zero()) fail(ErrorCode::NonGenericDirection, "direction is orthogonal to a denominator exponent");
      scale /= b;
      P = P * todd_factor_series(b, D);
    }
    bool integral = true;
    for (const auto& e : numerator) {
      if (e.tag >= totals_.size()) fail(ErrorCode::OutOfRange, "tag beyond accumulator size");
      integral = integral && e.g.is_integer() && e.coeff.is_integer();
    }
    if (!integral) {
      for (const auto& e : numerator) {
        // [t^D] e^{g t} P(t)
        Rational s = P[D];
        Rational pw = 1;
        for (std::size_t j = 1; j <= D; ++j) {
          pw = pw * e.g / Rational(static_cast<long>(j));
          if (pw.is_zero()) break;
          s += pw * P[D - j];
        }
        totals_[e.tag] += e.coeff * scale * s;
      }
      return;
    }
    // Q(g) = sum_j P[D-j] g^j / j!, scaled to integer coefficients c_j / L.
    std::vector<Rational> q(D + 1);
    BigInt fact = 1, L = 1;
    for (std::size_t j = 0; j <= D; ++j) {
      if (j > 0) fact *= static_cast<unsigned long>(j);
      q[j] = P[D - j] / Rational(fact);
      BigInt d = q[j].den();
      mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), d.get_mpz_t());
    }
    std::vector<BigInt> c(D + 1);
    for (std::size_t j = 0; j <= D; ++j) c[j] = q[j].num() * (L / q[j].den());
    if (scratch_.size() != totals_.size()) scratch_.assign(totals_.size(), BigInt(0));
    touched_.clear();
    BigInt h;
    for (const auto& e : numerator) {
      const BigInt g = e.g.num();
      h = c[D];
      for (std::size_t j = D; j-- > 0;) {
        h *= g;
        h += c[j];
      }
      h *= e.coeff.num();
      if (std::find(touched_.begin(), touched_.end(), e.tag) == touched_.end()) touched_.push_back(e.tag);
      scratch_[e.tag] += h;
    }
    const Rational leaf_scale = scale / Rational(L);
    for (auto tag : touched_) {
      totals_[tag] += leaf_scale * Rational(scratch_[tag]);
      scratch_[tag] = 0;
    }
  }

  const std::vector<Rational>& totals() const { return totals_; }

 private:
  std::vector<Rational> totals_;
  std::vector<BigInt> scratch_;
  std::vector<std::size_t> touched_;
};

inline void add_term(ToddAccumulator& acc, const CTTerm& t, const std::vector<std::int64_t>& c,
                     const std::vector<std::size_t>& pos, std::optional<std::size_t> tag_pos = std::nullopt) {
  std::vector<Rational> betas;
  betas.reserve(t.denominator.size());
  for (const auto& f : t.denominator) betas.push_back(dot(c, f.u, pos));
  std::vector<ToddAccumulator::Entry> num;
  num.reserve(t.numerator.size());
  for (const auto& [m, k] : t.numerator.terms()) {
    std::size_t tag = 0;
    if (tag_pos) tag = static_cast<std::size_t>(m[*tag_pos].to_int64());
    num.push_back({dot(c, m, pos), k, tag});
  }
  acc.add(betas, num);
}

/// Value at all specialized variables = 1 along the direction `dir`.
inline Rational specialize_all_ones(const TermSum& terms, const GenericDirection& dir,
                                    std::optional<std::vector<std::size_t>> positions = std::nullopt) {
  std::vector<std::size_t> pos = positions ? *positions : all_positions(terms.empty() ? 0 : terms[0].nvars());
  if (dir.c.size() != pos.size()) fail(ErrorCode::InvalidInput, "direction length does not match variables");
  ToddAccumulator acc;
  for (const auto& t : terms) add_term(acc, t, dir.c, pos);
  return acc.totals()[0];
}

struct EvalOptions {
  Strategy strategy = Strategy::Auto;
  CandidateRule rule = CandidateRule::SumNorm;
  std::uint64_t seed = 1;
  /// Run the recursion on the (lam, t) projection along the direction instead of on all of y.
  bool projected = true;
};

namespace detail {

// lam^{-a0-i} w^i / prod (1 - lam^{a_j} t^{c_j}) over (lam, t, w).
inline CTTerm projected_knapsack_term(const BigInt& a0, std::size_t count, const std::vector<std::int64_t>& a,
                                      const std::vector<std::int64_t>& c, std::size_t s) {
  CTTerm t;
  for (std::size_t j = 0; j < a.size(); ++j) {
    Monomial u(3);
    u[0] = Rational(static_cast<long>(a[j]));
    u[1] = Rational(static_cast<long>(c[j]));
    t.denominator.push_back({std::move(u)});
  }
  for (std::size_t i = 0; i < count; ++i) {
    Monomial m(3);
    m[0] = -Rational(BigInt(a0 + static_cast<unsigned long>(i)));
    m[2] = Rational(static_cast<long>(i));
    t.numerator.push(std::move(m), 1);
  }
  t.numerator.normalize();
  t.underline = s;
  return t;
}

inline std::vector<Rational> batch_attempt(const BigInt& a0, std::size_t count, const std::vector<std::int64_t>& a,
                                           const GenericDirection& dir, const EvalOptions& eo) {
  const std::size_t n = a.size();
  ToddAccumulator acc(count);
  DecOptions opt;
  opt.strategy = eo.strategy;
  opt.rule = eo.rule;
  if (eo.projected) {
    // Projection can merge distinct factors; their coincidence is meaningless here.
    opt.check_coincident = false;
    const std::vector<std::size_t> pos{1};
    const std::vector<std::int64_t> unit{1};
    opt.leaf_sink = [&](CTTerm&& leaf) { add_term(acc, leaf, unit, pos, std::size_t{2}); };
    for (std::size_t s = 0; s < n; ++s) a_operator(projected_knapsack_term(a0, count, a, dir.c, s), 0, opt);
  } else {
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = 1 + i;
    opt.leaf_sink = [&](CTTerm&& leaf) { add_term(acc, leaf, dir.c, pos, n + 1); };
    for (std::size_t s = 0; s < n; ++s) a_operator(knapsack_term(a0, a, s, count), 0, opt);
  }
  return acc.totals();
}

// Leaf denominators do not depend on the numerator, so a single-monomial run
// with a discarding sink tells whether the projected direction is generic.
inline bool projected_direction_ok(const std::vector<std::int64_t>& a, const GenericDirection& dir,
                                   const EvalOptions& eo) {
  DecOptions opt;
  opt.strategy = eo.strategy;
  opt.rule = eo.rule;
  opt.check_coincident = false;
  opt.leaf_sink = [](CTTerm&& leaf) {
    for (const auto& f : leaf.denominator)
      if (f.u[1].is_zero()) fail(ErrorCode::NonGenericDirection, "projected leaf factor is constant");
  };
  try {
    for (std::size_t s = 0; s < a.size(); ++s) a_operator(projected_knapsack_term(0, 1, a, dir.c, s), 0, opt);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonGenericDirection || e.code() == ErrorCode::DegenerateFactor) return false;
    throw;
  }
  return true;
}

}  // namespace detail

/// d(a0 + i; a) for i = 0..count-1.
inline std::vector<BigInt> denumerant_batch(const BigInt& a0, std::size_t count, const std::vector<std::int64_t>& a,
                                            const EvalOptions& eo = {}) {
  validate_knapsack(a, 0);
  if (a0 < 0) fail(ErrorCode::InvalidInput, "a0 must be nonnegative");
  if (count == 0) return {};
  DirectionSampler sampler(a.size(), eo.seed);
  for (;;) {
    GenericDirection dir = sampler.next();
    bool zero = false;
    for (auto x : dir.c) zero = zero || x == 0;
    if (zero) continue;  // every root factor needs a nonzero direction entry
    if (eo.projected && !detail::projected_direction_ok(a, dir, eo)) continue;
    std::vector<Rational> totals;
    try {
      totals = detail::batch_attempt(a0, count, a, dir, eo);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonGenericDirection) continue;
      // a projected leaf factor 1 - t^0 means c is orthogonal to its exponent
      if (eo.projected && e.code() == ErrorCode::DegenerateFactor) continue;
      throw;
    }
    std::vector<BigInt> out;
    out.reserve(count);
    for (auto& v : totals) {
      if (!v.is_integer() || v.sign() < 0)
        fail(ErrorCode::NonIntegerResult, "denumerant evaluated to " + v.str());
      out.push_back(v.num());
    }
    return out;
  }
}

inline BigInt denumerant(const BigInt& a0, const std::vector<std::int64_t>& a, const EvalOptions& eo = {}) {
  return denumerant_batch(a0, 1, a, eo)[0];
}

inline BigInt denumerant(const BigInt& a0, const std::vector<std::int64_t>& a, Strategy strategy) {
  EvalOptions eo;
  eo.strategy = strategy;
  return denumerant(a0, a, eo);
}

struct FrobeniusReport {
  BigInt claimed;
  std::vector<BigInt> values;  // d(F + i), i = 0..R
  bool holds = false;
  BigInt d_at_f() const { return values.empty() ? BigInt(-1) : values[0]; }
  BigInt min_after() const {
    BigInt m = -1;
    for (std::size_t i = 1; i < values.size(); ++i)
      if (m < 0 || values[i] < m) m = values[i];
    return m;
  }
};

/// Checks d(F) = 0 and d(F + i) >= 1 for 1 <= i <= R.
inline FrobeniusReport frobenius_check(const std::vector<std::int64_t>& a, const BigInt& F, std::size_t R,
                                       const EvalOptions& eo = {}) {
  FrobeniusReport rep;
  rep.claimed = F;
  rep.values = denumerant_batch(F, R + 1, a, eo);
  rep.holds = rep.values[0] == 0;
  for (std::size_t i = 1; i < rep.values.size(); ++i) rep.holds = rep.holds && rep.values[i] >= 1;
  return rep;
}

}  // namespace knapcone
