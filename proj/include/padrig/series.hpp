#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "padrig/matrix.hpp"
#include "padrig/padic.hpp"

namespace padrig {

/// Upper window bound of a series whose every coefficient is known.
inline constexpr std::int64_t kUnbounded = kInfinitePrecision;

inline constexpr std::int64_t kDefaultXWindow = 32;
inline constexpr std::int64_t kDefaultPDigits = 20;

/// Truncated Laurent series  sum_{k=ord}^{hi-1} c_k x^k + O(x^hi)  over Q_p.
///
/// Coefficients below ord are known to be zero, coefficients at and above hi
/// are unknown. hi == kUnbounded marks a series known in every degree (a
/// Laurent polynomial). Every operation emits only coefficients that follow
/// soundly from its inputs: windows shrink by the usual valuation rules and
/// p-adic precision follows PadicNumber.
///
/// p_cap is the working number of significant p-adic digits: it is used when
/// rounding inputs and as the target of series that are summed to infinity
/// (log, exp). Exactly known coefficients are stored exactly.
class LaurentSeries {
 public:
  /// The exact zero series.
  LaurentSeries(Prime p, std::int64_t p_cap);

  /// O(x^hi): nothing known below hi except that no terms precede it.
  static LaurentSeries big_oh(Prime p, std::int64_t p_cap, std::int64_t hi);
  static LaurentSeries monomial(const PadicNumber& c, std::int64_t exponent, std::int64_t p_cap,
                                std::int64_t hi = kUnbounded);
  static LaurentSeries constant(const PadicNumber& c, std::int64_t p_cap, std::int64_t hi = kUnbounded);
  /// Dense coefficients starting at `lo`.
  static LaurentSeries from_coefficients(Prime p, std::int64_t p_cap, std::int64_t lo,
                                         std::vector<PadicNumber> coefficients, std::int64_t hi);

  Prime prime() const noexcept { return p_; }
  std::int64_t p_cap() const noexcept { return p_cap_; }
  /// Lowest exponent with a coefficient not known to be exactly zero (hi if none).
  std::int64_t order() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return hi_; }
  bool is_bounded() const noexcept { return hi_ < kUnbounded; }
  bool is_exact_zero() const noexcept { return c_.empty() && hi_ == kUnbounded; }
  /// Highest stored exponent + 1 (== order() when nothing is stored).
  std::int64_t top() const noexcept { return lo_ + static_cast<std::int64_t>(c_.size()); }

  /// Precondition: k < hi. Below order() the coefficient is exact zero.
  PadicNumber coefficient(std::int64_t k) const;
  const std::vector<PadicNumber>& dense_coefficients() const noexcept { return c_; }

  /// Minimum valuation bound over stored coefficients (kInfinitePrecision if none).
  std::int64_t min_valuation() const;
  /// All stored coefficients exactly known.
  bool is_exact() const;

  LaurentSeries truncated(std::int64_t hi) const;
  /// Forgets p-adic digits at and beyond p^absolute_precision.
  LaurentSeries capped(std::int64_t absolute_precision) const;
  /// Rounds exact coefficients to p_cap significant digits.
  LaurentSeries rounded() const;

  LaurentSeries operator-() const;
  friend LaurentSeries operator+(const LaurentSeries& f, const LaurentSeries& g);
  friend LaurentSeries operator-(const LaurentSeries& f, const LaurentSeries& g) { return f + (-g); }
  friend LaurentSeries operator*(const LaurentSeries& f, const LaurentSeries& g);
  LaurentSeries& operator+=(const LaurentSeries& g) { return *this = *this + g; }
  LaurentSeries& operator*=(const LaurentSeries& g) { return *this = *this * g; }

  LaurentSeries scaled(const Rational& r) const;
  LaurentSeries scaled(const PadicNumber& c) const;
  /// Multiplication by x^e.
  LaurentSeries shifted(std::int64_t e) const;
  /// d/dx: x^k -> k x^(k-1).
  LaurentSeries derivative() const;
  /// 1/f, computed up to min(sound window, x_cap). Fails with ErrorKind::precision
  /// when the leading coefficient is zero to precision.
  LaurentSeries inverse(std::int64_t x_cap) const;
  LaurentSeries pow(std::int64_t k, std::int64_t x_cap) const;

  /// Coefficientwise agreement to precision on the common window.
  bool agrees_with(const LaurentSeries& g) const;

  /// "(c) * x^k + ... + O(x^hi)".
  std::string to_string() const;

 private:
  void normalize();
  void check_compatible(const LaurentSeries& g) const;

  Prime p_;
  std::int64_t p_cap_;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = kUnbounded;
  std::vector<PadicNumber> c_;  // c_[i] is the coefficient of x^(lo_ + i)
};

/// f'/f. Requires a unit leading coefficient (ErrorKind::precision otherwise).
LaurentSeries dlog(const LaurentSeries& f, std::int64_t x_cap);

/// f(phi(x)) truncated to what is soundly computable and to x_cap.
/// phi must have positive order; its leading coefficient must be a unit when f
/// has negative-exponent terms. Fails with ErrorKind::input otherwise.
LaurentSeries substitute(const LaurentSeries& f, const LaurentSeries& phi, std::int64_t x_cap);

/// log(1 + f) = sum_{k>=1} (-1)^(k+1) f^k / k. Requires every coefficient of f
/// to have valuation >= 1 (ErrorKind::convergence otherwise) and order(f) >= 0.
/// The neglected tail is deducted from the coefficient precision.
LaurentSeries log_one_plus(const LaurentSeries& f, std::int64_t x_cap);

/// Square matrix of truncated Laurent series over one prime.
class MatrixSeries {
 public:
  MatrixSeries(std::size_t n, Prime p, std::int64_t p_cap);
  static MatrixSeries identity(std::size_t n, Prime p, std::int64_t p_cap);
  /// Constant matrix with exactly known entries.
  static MatrixSeries constant(const MatrixQ& a, Prime p, std::int64_t p_cap);
  /// a * x^e with exactly known entries.
  static MatrixSeries monomial(const MatrixQ& a, std::int64_t e, Prime p, std::int64_t p_cap);

  std::size_t size() const noexcept { return n_; }
  Prime prime() const noexcept { return p_; }
  std::int64_t p_cap() const noexcept { return p_cap_; }
  LaurentSeries& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
  const LaurentSeries& operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

  std::int64_t order() const;
  std::int64_t hi() const;
  std::int64_t min_valuation() const;

  MatrixSeries truncated(std::int64_t hi) const;
  MatrixSeries rounded() const;
  MatrixSeries derivative() const;
  MatrixSeries scaled(const LaurentSeries& s) const;

  friend MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b);
  friend MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b);
  friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b);
  friend MatrixSeries operator*(const MatrixQ& a, const MatrixSeries& b);
  friend MatrixSeries operator*(const MatrixSeries& a, const MatrixQ& b);

  /// Inverse by the coefficient recursion on x^v (C_0 + C_1 x + ...), C_0 invertible.
  MatrixSeries inverse(std::int64_t x_cap) const;

  bool agrees_with(const MatrixSeries& b) const;
  /// Minimum valuation of all coefficients of this - identity on the common window.
  std::int64_t distance_from_identity() const;

  std::string to_string() const;

 private:
  std::size_t n_;
  Prime p_;
  std::int64_t p_cap_;
  std::vector<LaurentSeries> e_;
};

/// sum_{k>=0} A^k L^k / k!  for p >= 3, p-integral A and L with coefficients of
/// valuation >= 1 and order >= 0. p = 2 fails with ErrorKind::convergence;
/// non-p-integral A with ErrorKind::input.
MatrixSeries matrix_exp(const MatrixQ& a, const LaurentSeries& l, std::int64_t x_cap);

}  // namespace padrig
