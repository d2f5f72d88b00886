#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "padrig/rational.hpp"

namespace padrig {

inline constexpr std::int64_t kInfinitePrecision = std::numeric_limits<std::int64_t>::max() / 4;

/// Element of Q_p known either exactly (a rational) or as u * p^v + O(p^(v+m)).
///
/// Four representations are kept apart:
///   exact zero                 valuation +inf, precision +inf
///   exact nonzero rational     precision +inf
///   u * p^v + O(p^(v+m))       unit u in [0, p^m), gcd(u, p) = 1, m >= 1
///   O(p^N)                     zero to absolute precision N
///
/// Precision is relative: m counts the significant digits past the valuation.
/// Sums keep the smaller absolute precision, products the smaller relative
/// precision. Multiplying by an exact scalar never loses relative precision,
/// so dividing by k only shifts the valuation down by v_p(k).
class PadicNumber {
 public:
  static PadicNumber exact_zero(Prime p);
  static PadicNumber exact(const Rational& r, Prime p);
  /// r rounded to `relative_precision` significant digits (exact zero stays exact).
  static PadicNumber from_rational(const Rational& r, Prime p, std::int64_t relative_precision);
  /// O(p^absolute_precision).
  static PadicNumber big_oh(Prime p, std::int64_t absolute_precision);
  /// u * p^v + O(p^(v+m)); u is reduced and its p-part moved into the valuation.
  static PadicNumber from_digits(const Integer& u, std::int64_t v, std::int64_t m, Prime p);

  Prime prime() const noexcept { return p_; }
  bool is_exact() const noexcept { return kind_ == Kind::exact || kind_ == Kind::exact_zero; }
  bool is_exact_zero() const noexcept { return kind_ == Kind::exact_zero; }
  /// True for exact zero and for O(p^N).
  bool is_zero() const noexcept { return kind_ == Kind::exact_zero || kind_ == Kind::inexact_zero; }

  /// Exact valuation for nonzero values, N for O(p^N), +inf for exact zero.
  Valuation valuation() const;
  /// Lower bound on the valuation usable in arithmetic; kInfinitePrecision for exact zero.
  std::int64_t valuation_bound() const noexcept;
  /// Significant digits, kInfinitePrecision when exact, 0 for O(p^N).
  std::int64_t relative_precision() const noexcept;
  /// v + m, or N for O(p^N), or kInfinitePrecision when exact.
  std::int64_t absolute_precision() const noexcept;

  /// A rational whose difference from the value has valuation >= absolute_precision().
  Rational to_rational() const;
  /// Unit digits (only meaningful for the u * p^v + O(..) representation).
  const Integer& unit_digits() const noexcept { return unit_; }

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  PadicNumber& operator+=(const PadicNumber& b) { return *this = *this + b; }
  PadicNumber& operator-=(const PadicNumber& b) { return *this = *this - b; }
  PadicNumber& operator*=(const PadicNumber& b) { return *this = *this * b; }

  /// Fails with ErrorKind::precision on a value that is zero to precision.
  PadicNumber inverse() const;
  /// Multiplication by an exact rational.
  PadicNumber scaled(const Rational& r) const;
  /// Forgets digits at and beyond p^absolute_precision.
  PadicNumber capped(std::int64_t absolute_precision) const;

  /// a - b is zero to the precision of both operands.
  bool agrees_with(const PadicNumber& other) const;

  /// "u * p^v + O(p^(v+m))", "O(p^N)", or for exact values the rational itself.
  std::string to_string() const;

  friend bool operator==(const PadicNumber& a, const PadicNumber& b);

 private:
  enum class Kind { exact_zero, exact, inexact, inexact_zero };
  PadicNumber(Prime p, Kind k) : p_(p), kind_(k) {}

  void require_same_prime(const PadicNumber& other) const;

  Prime p_;
  Kind kind_;
  Rational exact_;        // Kind::exact
  Integer unit_;          // Kind::inexact
  std::int64_t val_ = 0;  // inexact: valuation; inexact_zero: absolute precision
  std::int64_t rel_ = 0;  // inexact: relative precision
};

}  // namespace padrig

namespace padrig {

/// p^e from a per-thread cache (e >= 0).
const Integer& prime_power(Prime p, std::int64_t e);

}  // namespace padrig
