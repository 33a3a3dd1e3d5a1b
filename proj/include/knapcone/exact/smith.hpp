#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "knapcone/exact/matrix.hpp"

namespace knapcone {

struct SmithForm {
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix S;  // rows x cols, diagonal
  IntMatrix V;  // cols x cols, unimodular
  std::size_t rank = 0;

  std::vector<BigInt> invariant_factors() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < rank; ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

// Position of the nonzero entry of least magnitude in the trailing block, first in row-major order.
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_pivot(const IntMatrix& a, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  BigInt best_abs;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      BigInt v = ::abs(a(i, j));
      if (!best || v < best_abs) {
        best = {i, j};
        best_abs = v;
      }
    }
  return best;
}

}  // namespace detail

/// Smith normal form: returns U, S, V with U*A*V = S.
inline SmithForm smith_normal_form(const IntMatrix& A) {
  if (A.empty()) fail(ErrorCode::InvalidInput, "empty matrix");
  const std::size_t m = A.rows(), n = A.cols();
  SmithForm out{IntMatrix::identity(m), A, IntMatrix::identity(n), 0};
  IntMatrix& a = out.S;
  IntMatrix& U = out.U;
  IntMatrix& V = out.V;

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    for (;;) {
      auto piv = detail::smallest_pivot(a, t);
      if (!piv) break;
      a.swap_rows(t, piv->first);
      U.swap_rows(t, piv->first);
      a.swap_cols(t, piv->second);
      V.swap_cols(t, piv->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        BigInt q = floor_div(a(i, t), a(t, t));
        a.add_row(i, t, -q);
        U.add_row(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        BigInt q = floor_div(a(t, j), a(t, t));
        a.add_col(j, t, -q);
        V.add_col(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into the pivot row and retry.
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < m && !bad; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (floor_mod(a(i, j), a(t, t)) != 0) {
            bad = i;
            break;
          }
      if (!bad) break;
      a.add_row(t, *bad, 1);
      U.add_row(t, *bad, 1);
    }
    if (a(t, t) == 0) break;
    if (a(t, t) < 0) {
      a.negate_row(t);
      U.negate_row(t);
    }
  }
  out.rank = t;
  return out;
}

/// Product of the invariant factors, i.e. the gcd of all maximal minors.
inline BigInt maximal_minor_gcd(const IntMatrix& A) {
  if (A.rows() == 0) return 1;
  SmithForm f = smith_normal_form(A);
  if (f.rank < A.rows()) fail(ErrorCode::RankDeficient, "matrix does not have full row rank");
  BigInt p = 1;
  for (std::size_t i = 0; i < f.rank; ++i) p *= f.S(i, i);
  return p;
}

}  // namespace knapcone
