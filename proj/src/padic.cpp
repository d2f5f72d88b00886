#include "padrig/padic.hpp"

#include <algorithm>
#include <unordered_map>
#include <deque>

#include "padrig/error.hpp"

namespace padrig {
namespace {

const Integer& pow_p(Prime p, std::int64_t e) { return prime_power(p, e); }

// Digits of the unit part r / p^v(r) modulo p^m.
Integer unit_residue(const Rational& r, Prime p, std::int64_t v, std::int64_t m) {
  Integer num = r.numerator();
  Integer den = r.denominator();
  if (v > 0) num /= pow_p(p, v);
  if (v < 0) den /= pow_p(p, -v);
  const Integer& mod = pow_p(p, m);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  Integer out = num * inv;
  mpz_mod(out.get_mpz_t(), out.get_mpz_t(), mod.get_mpz_t());
  return out;
}

}  // namespace

const Integer& prime_power(Prime p, std::int64_t e) {
  if (e < 0) fail(ErrorKind::input, "negative prime power");
  thread_local std::unordered_map<std::int64_t, std::deque<Integer>> cache;
  auto& powers = cache[p.value()];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<std::int64_t>(powers.size()) <= e) powers.push_back(powers.back() * p.value());
  return powers[static_cast<std::size_t>(e)];
}

PadicNumber PadicNumber::exact_zero(Prime p) { return PadicNumber(p, Kind::exact_zero); }

PadicNumber PadicNumber::exact(const Rational& r, Prime p) {
  if (r.is_zero()) return exact_zero(p);
  PadicNumber out(p, Kind::exact);
  out.exact_ = r;
  out.val_ = padic_valuation(r, p).value();
  return out;
}

PadicNumber PadicNumber::from_rational(const Rational& r, Prime p, std::int64_t relative_precision) {
  if (relative_precision < 1) fail(ErrorKind::input, "relative precision must be >= 1");
  if (r.is_zero()) return exact_zero(p);
  const std::int64_t v = padic_valuation(r, p).value();
  return from_digits(unit_residue(r, p, v, relative_precision), v, relative_precision, p);
}

PadicNumber PadicNumber::big_oh(Prime p, std::int64_t absolute_precision) {
  PadicNumber out(p, Kind::inexact_zero);
  out.val_ = absolute_precision;
  return out;
}

PadicNumber PadicNumber::from_digits(const Integer& u, std::int64_t v, std::int64_t m, Prime p) {
  if (m < 1) return big_oh(p, v + std::max<std::int64_t>(m, 0));
  const Integer& mod = pow_p(p, m);
  Integer digits;
  mpz_mod(digits.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
  if (digits == 0) return big_oh(p, v + m);
  const std::int64_t w = integer_valuation(digits, p.value());
  if (w > 0) digits /= pow_p(p, w);
  PadicNumber out(p, Kind::inexact);
  out.val_ = v + w;
  out.rel_ = m - w;
  out.unit_ = digits;
  return out;
}

Valuation PadicNumber::valuation() const {
  if (kind_ == Kind::exact_zero) return Valuation::infinity();
  return Valuation(val_);
}

std::int64_t PadicNumber::valuation_bound() const noexcept {
  return kind_ == Kind::exact_zero ? kInfinitePrecision : val_;
}

std::int64_t PadicNumber::relative_precision() const noexcept {
  switch (kind_) {
    case Kind::exact_zero:
    case Kind::exact: return kInfinitePrecision;
    case Kind::inexact: return rel_;
    case Kind::inexact_zero: return 0;
  }
  return 0;
}

std::int64_t PadicNumber::absolute_precision() const noexcept {
  switch (kind_) {
    case Kind::exact_zero:
    case Kind::exact: return kInfinitePrecision;
    case Kind::inexact: return val_ + rel_;
    case Kind::inexact_zero: return val_;
  }
  return 0;
}

Rational PadicNumber::to_rational() const {
  switch (kind_) {
    case Kind::exact_zero:
    case Kind::inexact_zero: return Rational(0);
    case Kind::exact: return exact_;
    case Kind::inexact:
      if (val_ >= 0) return Rational(Integer(unit_ * pow_p(p_, val_)));
      return Rational(unit_, pow_p(p_, -val_));
  }
  return Rational(0);
}

void PadicNumber::require_same_prime(const PadicNumber& other) const {
  if (p_ != other.p_)
    fail(ErrorKind::input, "prime mismatch: " + std::to_string(p_.value()) + " vs " +
                               std::to_string(other.p_.value()));
}

PadicNumber PadicNumber::operator-() const {
  PadicNumber out = *this;
  if (kind_ == Kind::exact) {
    out.exact_ = -exact_;
  } else if (kind_ == Kind::inexact) {
    const Integer& mod = pow_p(p_, rel_);
    out.unit_ = mod - unit_;
  }
  return out;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  using Kind = PadicNumber::Kind;
  a.require_same_prime(b);
  const Prime p = a.p_;
  if (a.kind_ == Kind::exact_zero) return b;
  if (b.kind_ == Kind::exact_zero) return a;
  if (a.kind_ == Kind::exact && b.kind_ == Kind::exact) return PadicNumber::exact(a.exact_ + b.exact_, p);

  const std::int64_t n = std::min(a.absolute_precision(), b.absolute_precision());
  const std::int64_t vmin = std::min(a.valuation_bound(), b.valuation_bound());
  if (vmin >= n) return PadicNumber::big_oh(p, n);
  const std::int64_t width = n - vmin;
  Integer sum = 0;
  for (const PadicNumber* x : {&a, &b}) {
    if (x->kind_ == Kind::inexact_zero || x->val_ >= n) continue;
    const std::int64_t shift = x->val_ - vmin;
    if (x->kind_ == Kind::inexact) {
      sum += x->unit_ * pow_p(p, shift);
    } else {
      sum += unit_residue(x->exact_, p, x->val_, n - x->val_) * pow_p(p, shift);
    }
  }
  return PadicNumber::from_digits(sum, vmin, width, p);
}

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  using Kind = PadicNumber::Kind;
  a.require_same_prime(b);
  const Prime p = a.p_;
  if (a.kind_ == Kind::exact_zero || b.kind_ == Kind::exact_zero) return PadicNumber::exact_zero(p);
  if (a.kind_ == Kind::exact) return b.scaled(a.exact_);
  if (b.kind_ == Kind::exact) return a.scaled(b.exact_);
  if (a.kind_ == Kind::inexact_zero || b.kind_ == Kind::inexact_zero)
    return PadicNumber::big_oh(p, a.val_ + b.val_);
  const std::int64_t m = std::min(a.rel_, b.rel_);
  Integer prod = a.unit_ * b.unit_;
#ifdef PADRIG_FAULT_INJECTION
  if (m > 1) prod += p.value();
#endif
  return PadicNumber::from_digits(prod, a.val_ + b.val_, m, p);
}

PadicNumber PadicNumber::scaled(const Rational& r) const {
  if (r.is_zero() || kind_ == Kind::exact_zero) return exact_zero(p_);
  if (kind_ == Kind::exact) return exact(exact_ * r, p_);
  const std::int64_t vr = padic_valuation(r, p_).value();
  if (kind_ == Kind::inexact_zero) return big_oh(p_, val_ + vr);
  return from_digits(unit_ * unit_residue(r, p_, vr, rel_), val_ + vr, rel_, p_);
}

PadicNumber PadicNumber::inverse() const {
  switch (kind_) {
    case Kind::exact_zero:
    case Kind::inexact_zero:
      fail(ErrorKind::precision, "cannot invert a value that is zero to precision: " + to_string());
    case Kind::exact: return exact(Rational(1) / exact_, p_);
    case Kind::inexact: {
      const Integer& mod = pow_p(p_, rel_);
      Integer inv;
      mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
      return from_digits(inv, -val_, rel_, p_);
    }
  }
  return *this;
}

PadicNumber PadicNumber::capped(std::int64_t absolute_precision) const {
  switch (kind_) {
    case Kind::exact_zero: return big_oh(p_, absolute_precision);
    case Kind::exact:
      if (val_ >= absolute_precision) return big_oh(p_, absolute_precision);
      return from_rational(exact_, p_, absolute_precision - val_);
    case Kind::inexact:
      if (val_ >= absolute_precision) return big_oh(p_, absolute_precision);
      if (val_ + rel_ <= absolute_precision) return *this;
      return from_digits(unit_, val_, absolute_precision - val_, p_);
    case Kind::inexact_zero: return big_oh(p_, std::min(val_, absolute_precision));
  }
  return *this;
}

bool PadicNumber::agrees_with(const PadicNumber& other) const { return (*this - other).is_zero(); }

std::string PadicNumber::to_string() const {
  const std::string ps = std::to_string(p_.value());
  switch (kind_) {
    case Kind::exact_zero: return "0";
    case Kind::exact: return exact_.to_string();
    case Kind::inexact_zero: return "O(" + ps + "^" + std::to_string(val_) + ")";
    case Kind::inexact:
      return unit_.get_str() + " * " + ps + "^" + std::to_string(val_) + " + O(" + ps + "^" +
             std::to_string(val_ + rel_) + ")";
  }
  return "?";
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  if (a.p_ != b.p_ || a.kind_ != b.kind_) return false;
  using Kind = PadicNumber::Kind;
  switch (a.kind_) {
    case Kind::exact_zero: return true;
    case Kind::exact: return a.exact_ == b.exact_;
    case Kind::inexact: return a.val_ == b.val_ && a.rel_ == b.rel_ && a.unit_ == b.unit_;
    case Kind::inexact_zero: return a.val_ == b.val_;
  }
  return false;
}

}  // namespace padrig
