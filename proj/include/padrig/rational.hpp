#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace padrig {

using Integer = mpz_class;

/// A validated prime. Construction fails with ErrorKind::input for non-primes.
class Prime {
 public:
  explicit Prime(std::int64_t value);
  std::int64_t value() const noexcept { return value_; }
  friend bool operator==(Prime, Prime) = default;

 private:
  std::int64_t value_;
};

bool is_prime(std::int64_t n) noexcept;

/// Exact fraction in lowest terms with positive denominator. Zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : q_(n) {}   // NOLINT(google-explicit-constructor)
  explicit Rational(const Integer& n) : q_(n) {}
  Rational(const Integer& num, const Integer& den);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "a" or "a/b" (optional sign on a, b > 0 after normalization).
  static Rational parse(std::string_view text);

  Integer numerator() const { return q_.get_num(); }
  Integer denominator() const { return q_.get_den(); }
  const mpq_class& raw() const noexcept { return q_; }

  bool is_zero() const noexcept { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const noexcept { return sgn(q_); }

  /// Largest integer <= value.
  Integer floor() const;
  /// Value minus floor: the representative of the class mod Z in [0, 1).
  Rational fractional_part() const;

  std::string to_string() const;

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// p-adic valuation, +infinity for exact zero.
class Valuation {
 public:
  static Valuation infinity() { return Valuation(); }
  explicit Valuation(std::int64_t v) : finite_(true), value_(v) {}

  bool is_infinite() const noexcept { return !finite_; }
  /// Precondition: finite.
  std::int64_t value() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.finite_ != b.finite_) return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.value_ <=> b.value_;
  }
  std::string to_string() const;

 private:
  Valuation() = default;
  bool finite_ = false;
  std::int64_t value_ = 0;
};

/// Number of times p divides n (n != 0).
std::int64_t integer_valuation(const Integer& n, std::int64_t p);

Valuation padic_valuation(const Rational& r, Prime p);
bool is_p_integral(const Rational& r, Prime p);

/// lcm of reduced denominators. Fails with ErrorKind::input on an empty list.
Integer denominator_lcm(std::span<const Rational> values);

/// Minimal f >= 1 with p^f = 1 (mod n). Fails with ErrorKind::condition when gcd(p, n) != 1.
std::int64_t multiplicative_order(Prime p, std::int64_t n);

/// v_p(k!) by Legendre's formula.
std::int64_t factorial_valuation(std::int64_t k, std::int64_t p);

Integer ipow(std::int64_t base, std::int64_t exponent);

}  // namespace padrig
