#pragma once

#include <vector>

#include "knapcone/exact/matrix.hpp"

namespace knapcone {

struct ReducedBasis {
  IntMatrix basis;      // reduced rows
  IntMatrix transform;  // transform * original == basis
  Rational delta;
};

/// Integral LLL reduction of the rows of B (fraction-free Gram-Schmidt data).
inline ReducedBasis lll_reduce(const IntMatrix& B, const Rational& delta = Rational(3, 4)) {
  if (!(delta > Rational(1, 4) && delta < Rational(1)))
    fail(ErrorCode::InvalidInput, "LLL parameter must lie in (1/4, 1)");
  const std::size_t n = B.rows(), dim = B.cols();
  ReducedBasis out{B, IntMatrix::identity(n), delta};
  if (n == 0) return out;
  IntMatrix& b = out.basis;
  IntMatrix& H = out.transform;
  const BigInt p = delta.num(), q = delta.den();

  auto dot = [&](std::size_t i, std::size_t j) {
    BigInt s = 0;
    for (std::size_t c = 0; c < dim; ++c) s += b(i, c) * b(j, c);
    return s;
  };

  // 1-based bookkeeping: d[0] = 1, d[i] is the Gram determinant of the first i rows.
  std::vector<BigInt> d(n + 1, BigInt(0));
  std::vector<std::vector<BigInt>> lam(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
  d[0] = 1;
  d[1] = dot(0, 0);
  if (d[1] == 0) fail(ErrorCode::DependentRows, "zero row in LLL input");
  if (n == 1) return out;

  auto red = [&](std::size_t k, std::size_t l) {
    BigInt two_lam = 2 * lam[k][l];
    if (::abs(two_lam) <= d[l]) return;
    BigInt qq = floor_div(two_lam + d[l], 2 * d[l]);
    b.add_row(k - 1, l - 1, -qq);
    H.add_row(k - 1, l - 1, -qq);
    lam[k][l] -= qq * d[l];
    for (std::size_t i = 1; i < l; ++i) lam[k][i] -= qq * lam[l][i];
  };

  auto swap = [&](std::size_t k, std::size_t kmax) {
    b.swap_rows(k - 1, k - 2);
    H.swap_rows(k - 1, k - 2);
    for (std::size_t j = 1; j + 2 <= k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    BigInt l = lam[k][k - 1];
    BigInt Bv = (d[k - 2] * d[k] + l * l) / d[k - 1];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      BigInt t = lam[i][k];
      lam[i][k] = (d[k] * lam[i][k - 1] - l * t) / d[k - 1];
      lam[i][k - 1] = (Bv * t + l * lam[i][k]) / d[k];
    }
    d[k - 1] = Bv;
  };

  std::size_t k = 2, kmax = 1;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        BigInt u = dot(k - 1, j - 1);
        for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
        if (j < k)
          lam[k][j] = u;
        else
          d[k] = u;
      }
      if (d[k] == 0) fail(ErrorCode::DependentRows, "LLL input rows are linearly dependent");
    }
    red(k, k - 1);
    if (q * d[k] * d[k - 2] < p * d[k - 1] * d[k - 1] - q * lam[k][k - 1] * lam[k][k - 1]) {
      swap(k, kmax);
      if (k > 2) --k;
      continue;
    }
    for (std::size_t l = k - 1; l-- > 1;) red(k, l);
    ++k;
  }
  return out;
}

}  // namespace knapcone
