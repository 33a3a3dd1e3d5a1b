#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace knapcone;
using namespace knapcone::testing;

namespace {

IntMatrix worked_type_matrix() {
  return IntMatrix{{19, -8, -1, -10, 0}, {165, -30, -7, -72, 28}, {-99, 36, 5, 50, -4}, {57, -24, -3, -30, 0}};
}

void check_smith(const IntMatrix& A) {
  SmithForm f = smith_normal_form(A);
  CHECK(f.U * A * f.V == f.S);
  CHECK(::abs(determinant(f.U)) == 1);
  CHECK(::abs(determinant(f.V)) == 1);
  for (std::size_t i = 0; i < f.S.rows(); ++i)
    for (std::size_t j = 0; j < f.S.cols(); ++j)
      if (i != j) CHECK(f.S(i, j) == 0);
  auto d = f.invariant_factors();
  CHECK(d.size() == rank(A));
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d[i] > 0);
    if (i + 1 < d.size()) CHECK(d[i + 1] % d[i] == 0);
  }
}

// All k-subsets of {0..n-1}.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

TEST_CASE("rational arithmetic stays in lowest terms") {
  Rng rng(7);
  for (int it = 0; it < 500; ++it) {
    Rational a(uniform(rng, -40, 40), uniform(rng, 1, 40));
    Rational b(uniform(rng, -40, 40), uniform(rng, 1, 40));
    for (const Rational& r : {a + b, a - b, a * b}) {
      CHECK(r.den() > 0);
      CHECK(gcd(r.num(), r.den()) == 1);
    }
    if (!b.is_zero()) {
      Rational q = a / b;
      CHECK(gcd(q.num(), q.den()) == 1);
      CHECK(q * b == a);
    }
  }
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
}

TEST_CASE("rational arithmetic survives overflow of the small representation") {
  Rational big(std::int64_t{1} << 62, 3);
  Rational sq = big * big;
  CHECK(sq.den() == 9);
  CHECK(sq.num() == BigInt(1) << 124);
  CHECK((sq / big) == big);
}

TEST_CASE("smith normal form of the identity") {
  IntMatrix I = IntMatrix::identity(3);
  SmithForm f = smith_normal_form(I);
  CHECK(f.U == I);
  CHECK(f.S == I);
  CHECK(f.V == I);
}

TEST_CASE("smith normal form of the worked 4x5 type matrix") {
  IntMatrix A = worked_type_matrix();
  SmithForm f = smith_normal_form(A);
  CHECK(f.rank == 3);
  CHECK(f.invariant_factors() == std::vector<BigInt>{1, 2, 4});
  for (std::size_t j = 0; j < 5; ++j) CHECK(f.S(3, j) == 0);
  check_smith(A);
}

TEST_CASE("smith normal form properties on random matrices") {
  Rng rng(11);
  for (int it = 0; it < 60; ++it) check_smith(random_int_matrix(rng, 3, 4, 9));
  for (int it = 0; it < 20; ++it) check_smith(random_int_matrix(rng, 4, 3, 9));
}

TEST_CASE("maximal minor gcd") {
  CHECK(maximal_minor_gcd(IntMatrix{{2, 4, 6}}) == 2);
  CHECK(maximal_minor_gcd(IntMatrix{{1, 0, 0}, {0, 1, 0}}) == 1);
  CHECK(maximal_minor_gcd(IntMatrix{{2, 0}, {0, 3}}) == 6);
  CHECK_THROWS_AS(maximal_minor_gcd(IntMatrix{{1, 2}, {2, 4}}), Error);

  Rng rng(5);
  for (int it = 0; it < 25; ++it) {
    const std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 4));
    const std::size_t c = static_cast<std::size_t>(uniform(rng, static_cast<std::int64_t>(r), 6));
    IntMatrix A = random_int_matrix(rng, r, c, 6);
    if (rank(A) < r) continue;
    BigInt g = maximal_minor_gcd(A);
    BigInt direct = 0;
    std::vector<std::size_t> rows(r);
    std::iota(rows.begin(), rows.end(), 0);
    for (const auto& cols : subsets(c, r)) {
      BigInt d = determinant(A.submatrix(rows, cols));
      CHECK(d % g == 0);
      direct = gcd(direct, d);
    }
    CHECK(direct == g);
  }
}

TEST_CASE("determinant, rank and inverse") {
  IntMatrix A{{2, 1}, {7, 4}};
  CHECK(determinant(A) == 1);
  RatMatrix inv = inverse(to_rational(A));
  CHECK(inv * to_rational(A) == RatMatrix::identity(2));
  CHECK(rank(IntMatrix{{1, 2, 3}, {2, 4, 6}}) == 1);
  CHECK_THROWS_AS(inverse(to_rational(IntMatrix{{1, 2}, {2, 4}})), Error);
}

TEST_CASE("truncated series basics") {
  CHECK(series_exp(Rational(0), 3) == TruncatedSeries::constant(1, 3));
  CHECK(series_exp(Rational(1), 2) == TruncatedSeries(2, {1, 1, Rational(1, 2)}));
  TruncatedSeries p(2, {1, 1}), m(2, {1, -1});
  CHECK(series_mul(p, m) == TruncatedSeries(2, {1, 0, -1}));
}

TEST_CASE("todd factor series") {
  CHECK(todd_factor_series(Rational(1), 2) == TruncatedSeries(2, {1, Rational(-1, 2), Rational(1, 12)}));
  CHECK(todd_factor_series(Rational(1), 0) == TruncatedSeries::constant(1, 0));
  CHECK(todd_factor_series(Rational(2), 1) == TruncatedSeries(1, {1, -1}));
  CHECK_THROWS_AS(todd_factor_series(Rational(0), 3), Error);

  // todd(B t) * (e^{B t} - 1) / (B t) == 1
  for (const Rational& B : {Rational(1), Rational(-3), Rational(5, 7)}) {
    const std::size_t N = 8;
    TruncatedSeries e = series_exp(B, N + 1);
    TruncatedSeries q(N);
    for (std::size_t k = 0; k <= N; ++k) q[k] = e[k + 1] / B;
    CHECK(todd_factor_series(B, N) * q == TruncatedSeries::constant(1, N));
  }
}
