#pragma once

#include <gmpxx.h>

#include <climits>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "knapcone/errors.hpp"

namespace knapcone {

using BigInt = mpz_class;

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

namespace detail {

using i128 = __int128;
constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

inline bool fits_small(i128 v) { return v <= kSmallMax && v >= -kSmallMax; }

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline BigInt from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  BigInt r = (hi << 64) + lo;
  return neg ? BigInt(-r) : r;
}

}  // namespace detail

/// Exact rational in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in a signed 64-bit word are kept
/// inline; anything larger spills to a GMP rational and is demoted again as
/// soon as it fits.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : num_(v) {}
  Rational(long v) { set_i128(v, 1); }
  Rational(long long v) { set_i128(v, 1); }
  Rational(const BigInt& z) { set_big(mpq_class(z)); }
  Rational(std::int64_t p, std::int64_t q) {
    if (q == 0) fail(ErrorCode::InvalidInput, "zero denominator");
    set_i128(p, q);
  }
  Rational(const BigInt& p, const BigInt& q) {
    if (q == 0) fail(ErrorCode::InvalidInput, "zero denominator");
    mpq_class v(p, q);
    v.canonicalize();
    set_big(std::move(v));
  }
  explicit Rational(const mpq_class& q) {
    mpq_class v(q);
    v.canonicalize();
    set_big(std::move(v));
  }

  Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  bool is_small() const { return !big_; }
  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  int sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }

  BigInt num() const { return big_ ? BigInt(big_->get_num()) : BigInt(static_cast<long>(num_)); }
  BigInt den() const { return big_ ? BigInt(big_->get_den()) : BigInt(static_cast<long>(den_)); }
  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(BigInt(static_cast<long>(num_)), BigInt(static_cast<long>(den_)));
  }

  /// Small-path accessors; only valid when is_small().
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }

  BigInt floor() const {
    if (!big_) {
      std::int64_t q = num_ / den_;
      if ((num_ % den_ != 0) && (num_ < 0)) --q;
      return BigInt(static_cast<long>(q));
    }
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return q;
  }

  /// Integer value; throws NonIntegerExponent if fractional.
  BigInt to_integer() const {
    if (!is_integer()) fail(ErrorCode::NonIntegerExponent, "expected integer, got " + str());
    return num();
  }

  /// Integer value as int64; throws OutOfRange on overflow.
  std::int64_t to_int64() const {
    if (!is_integer()) fail(ErrorCode::NonIntegerExponent, "expected integer, got " + str());
    if (!big_) return num_;
    fail(ErrorCode::OutOfRange, "integer exceeds 64 bits: " + str());
  }

  std::string str() const {
    if (!big_) return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    return big_->get_den() == 1 ? big_->get_num().get_str() : big_->get_str();
  }

  static Rational parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(BigInt(s));
      return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::InvalidInput, "not a rational: '" + s + "'");
    }
  }

  Rational operator-() const {
    if (!big_) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return Rational(mpq_class(-*big_));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) {
        Rational r;
        r.set_i128(static_cast<detail::i128>(a.num_) + b.num_, a.den_);
        return r;
      }
      Rational r;
      r.set_i128(static_cast<detail::i128>(a.num_) * b.den_ + static_cast<detail::i128>(b.num_) * a.den_,
                 static_cast<detail::i128>(a.den_) * b.den_);
      return r;
    }
    return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      Rational r;
      r.set_i128(static_cast<detail::i128>(a.num_) * b.num_, static_cast<detail::i128>(a.den_) * b.den_);
      return r;
    }
    return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) fail(ErrorCode::InvalidInput, "division by zero");
    if (!a.big_ && !b.big_) {
      Rational r;
      r.set_i128(static_cast<detail::i128>(a.num_) * b.den_, static_cast<detail::i128>(a.den_) * b.num_);
      return r;
    }
    return Rational(mpq_class(a.to_mpq() / b.to_mpq()));
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (!a.big_ || !b.big_) return false;  // canonical: a big value never fits small
    return *a.big_ == *b.big_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) return a.num_ <=> b.num_;
      detail::i128 l = static_cast<detail::i128>(a.num_) * b.den_;
      detail::i128 r = static_cast<detail::i128>(b.num_) * a.den_;
      return l <=> r;
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  std::size_t hash() const {
    if (!big_) return std::hash<std::int64_t>()(num_) * 1000003u ^ std::hash<std::int64_t>()(den_);
    return std::hash<std::string>()(big_->get_str());
  }

 private:
  void set_i128(detail::i128 p, detail::i128 q) {
    if (q < 0) {
      p = -p;
      q = -q;
    }
    if (p == 0) {
      num_ = 0;
      den_ = 1;
      big_.reset();
      return;
    }
    if (q != 1) {
      detail::i128 g = detail::gcd128(p, q);
      if (g != 1) {
        p /= g;
        q /= g;
      }
    }
    if (detail::fits_small(p) && detail::fits_small(q)) {
      num_ = static_cast<std::int64_t>(p);
      den_ = static_cast<std::int64_t>(q);
      big_.reset();
    } else {
      set_big(mpq_class(detail::from_i128(p), detail::from_i128(q)));
    }
  }

  void set_big(mpq_class v) {
    const mpz_class& n = v.get_num();
    const mpz_class& d = v.get_den();
    if (n.fits_slong_p() && d.fits_slong_p() && n != LONG_MIN) {
      num_ = n.get_si();
      den_ = d.get_si();
      big_.reset();
    } else {
      num_ = 0;
      den_ = 1;
      big_ = std::make_unique<mpq_class>(std::move(v));
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace knapcone

template <>
struct std::hash<knapcone::Rational> {
  std::size_t operator()(const knapcone::Rational& r) const { return r.hash(); }
};
