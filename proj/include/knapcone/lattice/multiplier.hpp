#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knapcone/lattice/lll.hpp"

namespace knapcone {

using Label = std::vector<std::int64_t>;

/// min(b mod a, a - b mod a): the magnitude of the signed remainder.
inline std::int64_t signed_remainder_abs(std::int64_t b, std::int64_t a) {
  if (a < 1) fail(ErrorCode::InvalidInput, "modulus must be positive");
  std::int64_t r = b % a;
  if (r < 0) r += a;
  return std::min(r, a - r);
}

inline std::int64_t mul_mod_abs(std::int64_t m, std::int64_t b, std::int64_t a) {
  __int128 p = static_cast<__int128>(m) * b % a;
  if (p < 0) p += a;
  auto r = static_cast<std::int64_t>(p);
  return std::min(r, a - r);
}

/// Nearly good multipliers read off an LLL-reduced basis of the multiplier lattice.
inline std::vector<std::int64_t> good_multiplier_candidates(std::int64_t a, const std::vector<std::int64_t>& others,
                                                            std::int64_t scale = 100) {
  if (a < 2) fail(ErrorCode::InvalidInput, "candidate search needs a >= 2");
  std::vector<std::int64_t> b;
  for (auto v : others) {
    std::int64_t r = v % a;
    if (r < 0) r += a;
    if (r != 0) b.push_back(r);
  }
  std::vector<std::int64_t> out;
  if (b.empty()) return out;
  const std::size_t k = b.size();
  IntMatrix L(k + 1, k + 1);
  L(0, 0) = 1;
  for (std::size_t j = 0; j < k; ++j) {
    L(0, j + 1) = BigInt(static_cast<long>(scale)) * BigInt(static_cast<long>(b[j]));
    L(j + 1, j + 1) = BigInt(static_cast<long>(scale)) * BigInt(static_cast<long>(a));
  }
  ReducedBasis red = lll_reduce(L);
  const BigInt A = static_cast<long>(a);
  for (std::size_t i = 0; i < red.basis.rows(); ++i) {
    BigInt kk = floor_mod(::abs(red.basis(i, 0)), A);
    BigInt alt = A - kk;
    const BigInt& best = kk < alt ? kk : alt;
    if (best == 0) continue;
    auto c = static_cast<std::int64_t>(best.get_si());
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class Strategy { Auto, AlwaysOne, LllOnly, Bezout3 };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::AlwaysOne: return "always-one";
    case Strategy::LllOnly: return "lll-only";
    case Strategy::Bezout3: return "bezout3";
  }
  return "auto";
}

inline Strategy parse_strategy(std::string_view s) {
  if (s == "auto") return Strategy::Auto;
  if (s == "always-one") return Strategy::AlwaysOne;
  if (s == "lll-only") return Strategy::LllOnly;
  if (s == "bezout3") return Strategy::Bezout3;
  fail(ErrorCode::InvalidInput, "unknown strategy '" + std::string(s) + "'");
}

/// How LLL candidates are ranked: by the sum or by the maximum of [m v_j]_{v_s}.
enum class CandidateRule { SumNorm, MaxNorm };

inline std::string_view to_string(CandidateRule r) { return r == CandidateRule::SumNorm ? "sum" : "max"; }

inline CandidateRule parse_candidate_rule(std::string_view s) {
  if (s == "sum") return CandidateRule::SumNorm;
  if (s == "max") return CandidateRule::MaxNorm;
  fail(ErrorCode::InvalidInput, "unknown candidate rule '" + std::string(s) + "'");
}

struct MultiplierChoice {
  std::int64_t m = 1;
  bool is_lll_suggested = false;
  std::int64_t objective = 0;  // max-norm of the image, whatever the rule
};

/// max over j != s of [m v_j]_{v_s}.
inline std::int64_t multiplier_objective(std::size_t s, const Label& v, std::int64_t m) {
  std::int64_t best = 0;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != s) best = std::max(best, mul_mod_abs(m, v[j], v[s]));
  return best;
}

/// sum over j != s of [m v_j]_{v_s}.
inline std::int64_t multiplier_sum_norm(std::size_t s, const Label& v, std::int64_t m) {
  std::int64_t total = 0;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != s) total += mul_mod_abs(m, v[j], v[s]);
  return total;
}

/// floor(a / floor((a - 1)^{1/n})): a good multiplier reaches this max-norm for n reduced entries.
inline std::int64_t multiplier_existence_bound(std::int64_t a, std::size_t n) {
  if (a < 2 || n == 0) fail(ErrorCode::InvalidInput, "bound needs a >= 2 and n >= 1");
  std::int64_t root = 1;
  auto pow_le = [&](std::int64_t base) {
    __int128 p = 1;
    for (std::size_t i = 0; i < n; ++i) {
      p *= base;
      if (p > a - 1) return false;
    }
    return true;
  };
  while (pow_le(root + 1)) ++root;
  return a / root;
}

/// Smallest max-norm over all k in [1, max(1, a/2)], with the first k attaining it.
inline std::pair<std::int64_t, std::int64_t> best_max_norm_exhaustive(std::int64_t a, const std::vector<std::int64_t>& tail) {
  std::int64_t best = -1, best_k = 1;
  for (std::int64_t k = 1; k <= std::max<std::int64_t>(1, a / 2); ++k) {
    std::int64_t worst = 0;
    for (auto b : tail) worst = std::max(worst, mul_mod_abs(k, b, a));
    if (best < 0 || worst < best) {
      best = worst;
      best_k = k;
    }
  }
  return {best, best_k};
}

/// Multiplicity vector r_1..r_{floor(a/2)} of the reduced entries j != s.
inline std::vector<std::int64_t> multiplicities(std::size_t s, const Label& v, std::int64_t m = 1) {
  const std::int64_t a = v[s];
  std::vector<std::int64_t> r(static_cast<std::size_t>(a / 2), 0);
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j == s) continue;
    std::int64_t b = mul_mod_abs(m, v[j], a);
    if (b != 0) ++r[static_cast<std::size_t>(b - 1)];
  }
  return r;
}

/// Closed-form leaf count with multiplier 1 throughout, for 2 <= a1 <= 13.
inline std::int64_t f1_closed_formula(std::int64_t a1, std::vector<std::int64_t> rv) {
  if (a1 < 2 || a1 > 13) fail(ErrorCode::OutOfRange, "closed formula covers 2 <= a1 <= 13");
  const std::size_t k = static_cast<std::size_t>(a1 / 2);
  if (rv.size() > k) fail(ErrorCode::InvalidInput, "too many multiplicities for a1 = " + std::to_string(a1));
  rv.resize(6, 0);
  const std::int64_t r1 = rv[0], r2 = rv[1], r3 = rv[2], r4 = rv[3], r5 = rv[4], r6 = rv[5];
  switch (a1) {
    case 2:
    case 3: return r1;
    case 4: return r1 * r2 + r1;
    case 5: return r1 * r2 + r1 + r2;
    case 6: return r1 * (r2 + r3 + 1) + 2 * r2 * r3;
    case 7: return r1 * (r2 + r3 + 1) + (2 * r3 + 1) * r2 + r3;
    case 8: return (r4 + 1) * (r2 + 1) * (r1 + r3) + (r4 + r2 + r1) * r3;
    case 9: return (r1 + 1 + r3) * (r2 * r4 + r2 + r4) + r1 + (r4 + r2 + r1) * r3;
    case 10:
      return r1 * ((r2 + 2) * r4 + (r2 + r3 + 1) * (r5 + 1)) + 3 * r4 * (r3 + r5) + (r4 + 2) * (r5 + r2) * r3 +
             2 * r5 * (r4 + 1) * r2 + r3;
    case 11:
      return r1 + (r4 * r2 + r2 + r4) * (r1 + 1 + r3 + r5) + r3 * (r1 + r2 + 1 + r4 + r5) +
             r5 * ((r1 + r4 + 2) * (r2 + r3 + 1) - 1);
    case 12:
      return ((r6 + 1) * (r2 + r3 + 1) + (r2 + 2 * r6 + 1) * r4) * r1 +
             ((r4 + 2 * r6 + 2) * r2 + r4 * (3 * r6 + 2)) * r3 +
             ((r2 + r3 + 2) * r1 + (r4 + 2 * r6 + 2) * (r2 + r3) + r4 * r2 + (2 * r6 + 3) * r4 + 3 * r6 + 1) * r5;
    case 13:
      return r1 + r2 * (r1 + 1 + r3 + r5) + r3 * (r1 + r2 + 1 + r4 + r5) +
             r4 * (r1 + 1 + r3 + r5 + (r2 + r6) * (r1 + 1 + r3 + r5)) +
             r5 * (r1 + r4 + r6 + (r2 + r3 + 1) * (r1 + r4 + r6 + 1)) +
             r6 * (r1 + r5 + 1 + (r2 + r4) * (r1 + 1 + r3 + r5) + r3 * (r1 + r2 + 1 + r4 + r5));
  }
  return 0;
}

namespace detail {

// Multiplier representatives in [1, a/2] coprime to a.
inline std::vector<std::int64_t> valid_multipliers(std::int64_t a) {
  std::vector<std::int64_t> ms;
  for (std::int64_t m = 1; m <= std::max<std::int64_t>(1, a / 2); ++m)
    if (std::gcd(m, a) == 1) ms.push_back(m);
  return ms;
}

inline std::int64_t pick_by_max(const std::vector<std::pair<std::int64_t, std::int64_t>>& value_to_m) {
  // value_to_m: (r value, multiplier); highest r wins, ties go to the smaller multiplier.
  std::int64_t best_r = -1, best_m = 1;
  for (auto [r, m] : value_to_m)
    if (r > best_r || (r == best_r && m < best_m)) {
      best_r = r;
      best_m = m;
    }
  return best_m;
}

inline std::int64_t small_index_rule(std::size_t s, const Label& v) {
  const std::int64_t a = v[s];
  if (a <= 6) return 1;
  auto r = multiplicities(s, v);
  r.resize(6, 0);
  auto R = [&](int i) { return r[static_cast<std::size_t>(i - 1)]; };
  switch (a) {
    case 7: return pick_by_max({{R(1), 1}, {R(2), 3}, {R(3), 2}});
    case 8: return R(1) < R(3) ? 3 : 1;
    case 9: return pick_by_max({{R(1), 1}, {R(2), 4}, {R(4), 2}});
    case 10:
      return (R(1) + R(2) - R(3) - R(4)) * R(5) + 2 * R(1) * R(2) - 2 * R(3) * R(4) < 0 ? 3 : 1;
    case 12: return R(1) < R(5) ? 5 : 1;
    default: {
      std::int64_t best_m = 1, best_f = -1;
      for (auto m : valid_multipliers(a)) {
        auto img = multiplicities(s, v, m);
        std::int64_t f = f1_closed_formula(a, img);
        if (best_f < 0 || f < best_f) {
          best_f = f;
          best_m = m;
        }
      }
      return best_m;
    }
  }
}

inline std::int64_t bezout_multiplier(std::size_t s, const Label& v) {
  const std::int64_t a = v[s];
  std::optional<std::size_t> last;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (j != s) last = j;
  if (!last) return 1;
  BigInt inv, base = static_cast<long>(v[*last]), mod = static_cast<long>(a);
  base = floor_mod(base, mod);
  if (mpz_invert(inv.get_mpz_t(), base.get_mpz_t(), mod.get_mpz_t()) == 0) return 1;
  std::int64_t u = inv.get_si();
  return std::max<std::int64_t>(1, std::min(u, a - u));
}

}  // namespace detail

/// Chooses the multiplier for node (s; v). s is zero-based.
inline MultiplierChoice select_multiplier(std::size_t s, const Label& v, Strategy strategy,
                                          CandidateRule rule = CandidateRule::SumNorm) {
  if (s >= v.size() || v[s] < 2) fail(ErrorCode::InvalidLabel, "multiplier selection needs v_s >= 2");
  const std::int64_t a = v[s];
  MultiplierChoice c;
  auto finish = [&](std::int64_t m) {
    c.m = m;
    c.objective = multiplier_objective(s, v, m);
    return c;
  };
  switch (strategy) {
    case Strategy::AlwaysOne: return finish(1);
    case Strategy::Bezout3: return finish(detail::bezout_multiplier(s, v));
    case Strategy::Auto:
      if (a <= 13) return finish(detail::small_index_rule(s, v));
      [[fallthrough]];
    case Strategy::LllOnly: {
      std::vector<std::int64_t> others;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (j != s) others.push_back(signed_remainder_abs(v[j], a));
      std::sort(others.begin(), others.end());
      auto cands = good_multiplier_candidates(a, others);
      c.is_lll_suggested = true;
      cands.push_back(1);
      std::int64_t best_m = 1, best_obj = -1;
      for (auto m : cands) {
        if (std::gcd(m, a) != 1) continue;
        std::int64_t obj = rule == CandidateRule::SumNorm ? multiplier_sum_norm(s, v, m) : multiplier_objective(s, v, m);
        if (best_obj < 0 || obj < best_obj || (obj == best_obj && m < best_m)) {
          best_obj = obj;
          best_m = m;
        }
      }
      return finish(best_m);
    }
  }
  return finish(1);
}

/// Leaf count of the decomposition tree of (s; v), with multiplier 1 everywhere
/// (no strategy) or with the given strategy at every node. Labels are memoized
/// up to permutation, so the order-dependent bezout3 strategy is rejected.
class LeafCounter {
 public:
  explicit LeafCounter(std::optional<Strategy> strategy, CandidateRule rule = CandidateRule::SumNorm)
      : strategy_(strategy), rule_(rule) {
    if (strategy_ == Strategy::Bezout3) fail(ErrorCode::InvalidInput, "leaf counter does not support bezout3");
  }

  std::uint64_t count(std::size_t s, const Label& v) {
    if (s >= v.size()) fail(ErrorCode::InvalidLabel, "index out of range");
    if (v[s] < 1) fail(ErrorCode::InvalidLabel, "index must be positive");
    if (v[s] == 1) return 1;
    // Canonical key: index first, then the sorted nonzero reduced others.
    Label key{v[s]};
    for (std::size_t j = 0; j < v.size(); ++j)
      if (j != s) {
        auto b = signed_remainder_abs(v[j], v[s]);
        if (b) key.push_back(b);
      }
    std::sort(key.begin() + 1, key.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Label w(key.begin(), key.end());
    std::int64_t m = strategy_ ? select_multiplier(0, w, *strategy_, rule_).m : 1;
    Label b(w.size());
    b[0] = w[0];
    for (std::size_t j = 1; j < w.size(); ++j) b[j] = mul_mod_abs(m, w[j], w[0]);
    std::uint64_t total = 0;
    bool any = false;
    for (std::size_t j = 1; j < b.size(); ++j)
      if (b[j] != 0) {
        total += count(j, b);
        any = true;
      }
    if (!any) fail(ErrorCode::InvalidLabel, "label entries share a common factor with the index");
    memo_[key] = total;
    return total;
  }

 private:
  std::optional<Strategy> strategy_;
  CandidateRule rule_;
  std::map<Label, std::uint64_t> memo_;
};

/// f^h(s; v): h = 1 uses multiplier 1 everywhere, otherwise the auto strategy.
inline std::uint64_t f_recursive(bool use_multiplier, std::size_t s, const Label& v) {
  LeafCounter lc(use_multiplier ? std::optional<Strategy>(Strategy::Auto) : std::nullopt);
  return lc.count(s, v);
}

}  // namespace knapcone
