#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace knapcone;
using namespace knapcone::testing;

namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Gram-Schmidt vectors and mu coefficients, computed independently of the reducer.
void gram_schmidt(const IntMatrix& B, std::vector<std::vector<Rational>>& bs, std::vector<std::vector<Rational>>& mu) {
  const std::size_t n = B.rows(), m = B.cols();
  bs.assign(n, std::vector<Rational>(m, Rational(0)));
  mu.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) bs[i][k] = Rational(B(i, k));
    std::vector<Rational> bi = bs[i];
    for (std::size_t j = 0; j < i; ++j) {
      mu[i][j] = dot(bi, bs[j]) / dot(bs[j], bs[j]);
      for (std::size_t k = 0; k < m; ++k) bs[i][k] -= mu[i][j] * bs[j][k];
    }
  }
}

void check_reduced(const IntMatrix& B, const ReducedBasis& r) {
  CHECK(r.transform * B == r.basis);
  CHECK(::abs(determinant(r.transform)) == 1);
  std::vector<std::vector<Rational>> bs, mu;
  gram_schmidt(r.basis, bs, mu);
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(abs(mu[i][j]) <= Rational(1, 2));
  for (std::size_t k = 1; k < bs.size(); ++k)
    CHECK(dot(bs[k], bs[k]) >= (r.delta - mu[k][k - 1] * mu[k][k - 1]) * dot(bs[k - 1], bs[k - 1]));
}

BigInt row_norm2(const IntMatrix& M, std::size_t i) {
  BigInt s = 0;
  for (std::size_t k = 0; k < M.cols(); ++k) s += M(i, k) * M(i, k);
  return s;
}

// Shortest nonzero vector with coefficients in [-box, box].
BigInt shortest_in_box(const IntMatrix& B, int box) {
  const std::size_t n = B.rows();
  std::vector<int> c(n, -box);
  BigInt best = -1;
  for (;;) {
    bool zero = true;
    for (auto x : c) zero = zero && x == 0;
    if (!zero) {
      BigInt s = 0;
      for (std::size_t k = 0; k < B.cols(); ++k) {
        BigInt v = 0;
        for (std::size_t i = 0; i < n; ++i) v += BigInt(c[i]) * B(i, k);
        s += v * v;
      }
      if (best < 0 || s < best) best = s;
    }
    std::size_t i = 0;
    while (i < n && c[i] == box) c[i++] = -box;
    if (i == n) break;
    ++c[i];
  }
  return best;
}

Label label_from(std::int64_t a1, const std::vector<std::int64_t>& r) {
  Label v{a1};
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::int64_t k = 0; k < r[i]; ++k) v.push_back(static_cast<std::int64_t>(i + 1));
  return v;
}

// All multiplicity vectors of length len with entry sum <= total.
void for_each_multiplicity(std::size_t len, std::int64_t total, const std::function<void(const std::vector<std::int64_t>&)>& f) {
  std::vector<std::int64_t> r(len, 0);
  auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (i == len) {
      f(r);
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      r[i] = x;
      self(self, i + 1, left - x);
    }
    r[i] = 0;
  };
  rec(rec, 0, total);
}

}  // namespace

TEST_CASE("lll on small bases") {
  IntMatrix I = IntMatrix::identity(2);
  ReducedBasis r = lll_reduce(I);
  CHECK(r.basis == I);
  check_reduced(I, r);

  IntMatrix B{{1, 1}, {1, 0}};
  ReducedBasis rb = lll_reduce(B);
  check_reduced(B, rb);
  CHECK(row_norm2(rb.basis, 0) <= 2);
  CHECK(::abs(determinant(rb.basis)) == 1);

  CHECK_THROWS_AS(lll_reduce(IntMatrix{{1, 2}, {2, 4}}), Error);
}

TEST_CASE("lll on random 4x4 bases against brute force") {
  Rng rng(3);
  int done = 0;
  while (done < 15) {
    IntMatrix B = random_int_matrix(rng, 4, 4, 50);
    if (determinant(B) == 0) continue;
    ++done;
    ReducedBasis r = lll_reduce(B);
    check_reduced(B, r);
    BigInt shortest = row_norm2(r.basis, 0);
    for (std::size_t i = 1; i < 4; ++i) shortest = std::min(shortest, row_norm2(r.basis, i));
    // squared norms: |b| <= 2^{(n-1)/2} |v|  <=>  |b|^2 <= 2^{n-1} |v|^2
    BigInt box = shortest_in_box(B, 3);
    CHECK(shortest <= 8 * box);
  }
}

TEST_CASE("signed remainder") {
  CHECK(signed_remainder_abs(4, 7) == 3);
  CHECK(signed_remainder_abs(0, 9) == 0);
  CHECK(signed_remainder_abs(6, 7) == 1);
  Rng rng(2);
  for (int it = 0; it < 1000; ++it) {
    std::int64_t a = uniform(rng, 1, 60), b = uniform(rng, -500, 500);
    std::int64_t r = signed_remainder_abs(b, a);
    CHECK(r >= 0);
    CHECK(r <= a / 2);
    CHECK(r == signed_remainder_abs(-b, a));
    CHECK(r == signed_remainder_abs(b + a, a));
  }
  CHECK_THROWS_AS(signed_remainder_abs(3, 0), Error);
}

TEST_CASE("good multiplier candidates") {
  CHECK(good_multiplier_candidates(2, {1, 3, 5}).size() <= 1);
  for (auto k : good_multiplier_candidates(2, {1, 3, 5})) CHECK(k == 1);

  // a = 101, (1, 1, 1): the best candidate meets the existence bound and the exhaustive optimum
  const std::vector<std::int64_t> tail{1, 1, 1};
  auto cands = good_multiplier_candidates(101, tail);
  REQUIRE(!cands.empty());
  std::int64_t best = -1;
  for (auto k : cands) {
    std::int64_t v = 0;
    for (auto b : tail) v = std::max(v, mul_mod_abs(k, b, 101));
    if (best < 0 || v < best) best = v;
  }
  CHECK(best <= multiplier_existence_bound(101, 3));
  CHECK(best == best_max_norm_exhaustive(101, tail).first);
}

TEST_CASE("cuww5 root candidate list contains the reference multiplier" * doctest::may_fail()) {
  const std::vector<std::int64_t> tail{13429, 26855, 40280, 40281, 53711, 53714, 67141};
  auto cands = good_multiplier_candidates(26850, tail);
  CHECK(std::find(cands.begin(), cands.end(), 2447) != cands.end());
}

TEST_CASE("select multiplier examples") {
  CHECK(select_multiplier(0, {7, 2, 3}, Strategy::Auto).m == 2);
  CHECK(select_multiplier(0, {7, 2, 3}, Strategy::AlwaysOne).m == 1);
  CHECK(select_multiplier(0, {6, 1, 2, 3, 5}, Strategy::Auto).m == 1);
  CHECK_THROWS_AS(select_multiplier(0, {1, 2}, Strategy::Auto), Error);

  // index 5: valid multipliers 1 and 2 give the same leaf count
  for (std::int64_t r1 = 0; r1 <= 3; ++r1)
    for (std::int64_t r2 = 0; r2 <= 3; ++r2) {
      if (r1 + r2 == 0) continue;
      Label v = label_from(5, {r1, r2});
      auto m = select_multiplier(0, v, Strategy::Auto).m;
      CHECK((m == 1 || m == 2));
      CHECK(f1_closed_formula(5, multiplicities(0, v, 1)) == f1_closed_formula(5, multiplicities(0, v, 2)));
    }
}

TEST_CASE("chosen multipliers are valid") {
  Rng rng(17);
  for (auto strategy : {Strategy::Auto, Strategy::AlwaysOne, Strategy::LllOnly, Strategy::Bezout3})
    for (auto rule : {CandidateRule::SumNorm, CandidateRule::MaxNorm})
      for (int it = 0; it < 150; ++it) {
        Label v = random_weights(rng, static_cast<std::size_t>(uniform(rng, 2, 6)), 400);
        if (v[0] < 2) continue;
        auto c = select_multiplier(0, v, strategy, rule);
        CHECK(c.m >= 1);
        CHECK(c.m <= std::max<std::int64_t>(1, v[0] / 2));
        CHECK(std::gcd(c.m, v[0]) == 1);
        CHECK(c.objective == multiplier_objective(0, v, c.m));
      }
}

TEST_CASE("auto multiplier is optimal for small indices") {
  for (std::int64_t a = 2; a <= 13; ++a) {
    const std::size_t len = static_cast<std::size_t>(a / 2);
    for_each_multiplicity(len, 5, [&](const std::vector<std::int64_t>& r) {
      Label v = label_from(a, r);
      if (v.size() < 2) return;
      std::int64_t g = 0;
      for (auto x : v) g = std::gcd(g, x);
      if (g != 1) return;
      auto m = select_multiplier(0, v, Strategy::Auto).m;
      std::int64_t chosen = f1_closed_formula(a, multiplicities(0, v, m)), best = chosen;
      for (std::int64_t k = 1; k <= a / 2; ++k)
        if (std::gcd(k, a) == 1) best = std::min(best, f1_closed_formula(a, multiplicities(0, v, k)));
      INFO("a = ", a, " label size = ", v.size(), " m = ", m);
      CHECK(chosen == best);
    });
  }
}

TEST_CASE("closed formulas") {
  CHECK(f1_closed_formula(7, {0, 1, 1}) == 4);
  for (std::int64_t r1 = 0; r1 <= 6; ++r1) CHECK(f1_closed_formula(2, {r1}) == r1);
  CHECK(f1_closed_formula(5, {1, 1}) == 3);
  CHECK_THROWS_AS(f1_closed_formula(14, {}), Error);
  CHECK_THROWS_AS(f1_closed_formula(1, {}), Error);
}

TEST_CASE("closed formulas agree with the recursion on a small sweep") {
  for (std::int64_t a = 2; a <= 13; ++a)
    for_each_multiplicity(static_cast<std::size_t>(a / 2), 4, [&](const std::vector<std::int64_t>& r) {
      Label v = label_from(a, r);
      std::int64_t g = 0;
      for (auto x : v) g = std::gcd(g, x);
      if (v.size() < 2 || g != 1) return;
      CHECK(f1_closed_formula(a, r) == static_cast<std::int64_t>(f_recursive(false, 0, v)));
    });
}

TEST_CASE("recursive leaf counts") {
  CHECK(f_recursive(false, 0, {7, 2, 3}) == 4);
  CHECK(f_recursive(true, 0, {7, 2, 3}) == 3);
  CHECK(f_recursive(false, 0, {1}) == 1);
  CHECK(f_recursive(true, 0, {1}) == 1);
}

TEST_CASE("existence bound holds for a sample of tails") {
  Rng rng(23);
  CHECK(multiplier_existence_bound(101, 3) == 25);
  CHECK(multiplier_existence_bound(2, 1) == 2);
  for (std::int64_t a = 2; a <= 120; a += 7)
    for (std::size_t n = 1; n <= 5; ++n)
      for (int it = 0; it < 10; ++it) {
        std::vector<std::int64_t> tail(n);
        for (auto& x : tail) x = uniform(rng, 1, 10 * a);
        CHECK(best_max_norm_exhaustive(a, tail).first <= multiplier_existence_bound(a, n));
      }
}

TEST_CASE("strategy and rule names round-trip") {
  for (auto s : {Strategy::Auto, Strategy::AlwaysOne, Strategy::LllOnly, Strategy::Bezout3})
    CHECK(parse_strategy(to_string(s)) == s);
  for (auto r : {CandidateRule::SumNorm, CandidateRule::MaxNorm}) CHECK(parse_candidate_rule(to_string(r)) == r);
  CHECK_THROWS_AS(parse_strategy("fastest"), Error);
  CHECK_THROWS_AS(parse_candidate_rule("l2"), Error);
}
