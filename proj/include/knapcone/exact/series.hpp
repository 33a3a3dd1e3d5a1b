#pragma once

#include <string>
#include <vector>

#include "knapcone/exact/rational.hpp"

namespace knapcone {

/// Power series in one parameter t, truncated after t^order.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order = 0) : c_(order + 1, Rational(0)) {}
  TruncatedSeries(std::size_t order, std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    c_.resize(order + 1, Rational(0));
  }

  static TruncatedSeries constant(const Rational& v, std::size_t order) {
    TruncatedSeries s(order);
    s.c_[0] = v;
    return s;
  }

  std::size_t order() const { return c_.size() - 1; }
  const Rational& operator[](std::size_t k) const { return c_[k]; }
  Rational& operator[](std::size_t k) { return c_[k]; }
  const std::vector<Rational>& coefficients() const { return c_; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    TruncatedSeries r(n);
    for (std::size_t i = 0; i <= n; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; i + j <= n; ++j) {
        if (b.c_[j].is_zero()) continue;
        r.c_[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.c_ == b.c_; }

  /// Multiplicative inverse; the constant coefficient must be nonzero.
  TruncatedSeries inverse() const {
    if (c_[0].is_zero()) fail(ErrorCode::InvalidInput, "series with zero constant term is not invertible");
    TruncatedSeries r(order());
    r.c_[0] = Rational(1) / c_[0];
    for (std::size_t k = 1; k <= order(); ++k) {
      Rational acc = 0;
      for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
      r.c_[k] = -acc * r.c_[0];
    }
    return r;
  }

  /// Series of t -> f(scale * t).
  TruncatedSeries scaled(const Rational& scale) const {
    TruncatedSeries r(order());
    Rational p = 1;
    for (std::size_t k = 0; k <= order(); ++k) {
      r.c_[k] = c_[k] * p;
      p *= scale;
    }
    return r;
  }

  std::string str() const {
    std::string s;
    for (std::size_t k = 0; k <= order(); ++k) {
      if (c_[k].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[k].str() + ")";
      if (k) s += "t^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<Rational> c_;
};

inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

/// e^{C t} truncated at t^order.
inline TruncatedSeries series_exp(const Rational& C, std::size_t order) {
  TruncatedSeries r(order);
  Rational term = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    r[k] = term;
    term = term * C / Rational(static_cast<long>(k + 1));
  }
  return r;
}

/// Coefficients of x / (e^x - 1) up to x^order.
inline const std::vector<Rational>& todd_coefficients(std::size_t order) {
  thread_local std::vector<Rational> cache;
  if (cache.size() <= order) {
    TruncatedSeries q(order);  // (e^x - 1) / x
    Rational f = 1;
    for (std::size_t k = 0; k <= order; ++k) {
      f *= Rational(static_cast<long>(k + 1));
      q[k] = Rational(1) / f;
    }
    cache = q.inverse().coefficients();
  }
  return cache;
}

/// Series of (B t) / (e^{B t} - 1) truncated at t^order.
inline TruncatedSeries todd_factor_series(const Rational& B, std::size_t order) {
  if (B.is_zero()) fail(ErrorCode::ZeroDirection, "todd factor with zero scale");
  const auto& base = todd_coefficients(order);
  TruncatedSeries r(order, std::vector<Rational>(base.begin(), base.begin() + order + 1));
  return r.scaled(B);
}

}  // namespace knapcone
